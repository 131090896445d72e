#pragma once

#include "anisomhd/grid.hpp"

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace anisomhd {

using Complex = std::complex<double>;

/// Real samples on the uniform physical grid x_a = i_a * L_a / n_a, laid out
/// like Grid::index.
struct PhysicalField {
    Grid grid;
    std::vector<double> values;

    PhysicalField() = default;
    explicit PhysicalField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
};

/// Fourier coefficients of a real periodic field, full spectrum, normalised so
/// that f(x) = sum_k coeff(k) exp(i k.x).
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& g) : grid_(g), coeffs_(g.size()) {}
    ScalarField(const Grid& g, std::vector<Complex> coeffs);

    const Grid& grid() const { return grid_; }
    std::span<const Complex> coeffs() const { return coeffs_; }
    std::span<Complex> coeffs() { return coeffs_; }

    Complex& operator[](std::size_t i) { return coeffs_[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs_[i]; }

    Complex& at_mode(std::array<int, 3> m) { return coeffs_[grid_.index_of_mode(m)]; }
    const Complex& at_mode(std::array<int, 3> m) const {
        return coeffs_[grid_.index_of_mode(m)];
    }

    /// Writes `value` at mode m and its conjugate at -m.
    void set_mode_pair(std::array<int, 3> m, Complex value);

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

    friend bool operator==(const ScalarField&, const ScalarField&) = default;

private:
    Grid grid_;
    std::vector<Complex> coeffs_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Three components on a shared grid. `divergence_free` records that the
/// field came out of a solenoidal construction (projection, curl); it is a
/// claim checked by max_relative_divergence, not an enforced property.
struct VectorField {
    std::array<ScalarField, 3> comp;
    bool divergence_free = false;

    VectorField() = default;
    explicit VectorField(const Grid& g) : comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}
    VectorField(ScalarField a, ScalarField b, ScalarField c, bool solenoidal = false);

    const Grid& grid() const { return comp[0].grid(); }
    ScalarField& operator[](int a) { return comp[a]; }
    const ScalarField& operator[](int a) const { return comp[a]; }

    VectorField& operator+=(const VectorField& other);
    VectorField& operator*=(double s);

    /// Coefficient-wise equality; the solenoidal flag is not compared.
    friend bool operator==(const VectorField& a, const VectorField& b) { return a.comp == b.comp; }
};

/// Largest deviation |c(-k) - conj(c(k))| relative to the largest coefficient.
double hermitian_defect(const ScalarField& f);
double hermitian_defect(const VectorField& v);

/// Replaces each coefficient pair by its Hermitian average.
void symmetrize(ScalarField& f);

/// max_k |c(k)|
double max_abs(const ScalarField& f);
double max_abs(const VectorField& v);

/// True when every coefficient is finite.
bool all_finite(const ScalarField& f);

}  // namespace anisomhd
