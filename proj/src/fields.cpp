#include "anisomhd/fields.hpp"

#include "anisomhd/errors.hpp"

#include <algorithm>
#include <cmath>

namespace anisomhd {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw ConfigError("field arithmetic on mismatched grids");
}

std::size_t mirror_index(const Grid& g, int i0, int i1, int i2) {
    return g.index(g.mirror(0, i0), g.mirror(1, i1), g.mirror(2, i2));
}

}  // namespace

ScalarField::ScalarField(const Grid& g, std::vector<Complex> coeffs)
    : grid_(g), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != g.size()) {
        throw ConfigError("scalar field: coefficient count does not match grid");
    }
}

void ScalarField::set_mode_pair(std::array<int, 3> m, Complex value) {
    const std::size_t idx = grid_.index_of_mode(m);
    std::array<int, 3> s{};
    for (int a = 0; a < 3; ++a) s[a] = grid_.mirror(a, grid_.storage(a, m[a]));
    const std::size_t mirrored = grid_.index(s[0], s[1], s[2]);
    if (mirrored == idx) {
        coeffs_[idx] = value.real();
    } else {
        coeffs_[idx] = value;
        coeffs_[mirrored] = std::conj(value);
    }
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(ScalarField a, ScalarField b, ScalarField c, bool solenoidal)
    : comp{std::move(a), std::move(b), std::move(c)}, divergence_free(solenoidal) {
    require_same_grid(comp[0].grid(), comp[1].grid());
    require_same_grid(comp[0].grid(), comp[2].grid());
}

VectorField& VectorField::operator+=(const VectorField& other) {
    for (int a = 0; a < 3; ++a) comp[a] += other.comp[a];
    divergence_free = divergence_free && other.divergence_free;
    return *this;
}

VectorField& VectorField::operator*=(double s) {
    for (auto& c : comp) c *= s;
    return *this;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (const auto& c : f.coeffs()) m = std::max(m, std::abs(c));
    return m;
}

double max_abs(const VectorField& v) {
    return std::max({max_abs(v[0]), max_abs(v[1]), max_abs(v[2])});
}

double hermitian_defect(const ScalarField& f) {
    const Grid& g = f.grid();
    double worst = 0.0;
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2) {
                const Complex a = f[g.index(i0, i1, i2)];
                const Complex b = f[mirror_index(g, i0, i1, i2)];
                worst = std::max(worst, std::abs(a - std::conj(b)));
            }
    const double scale = max_abs(f);
    return scale > 0 ? worst / scale : 0.0;
}

double hermitian_defect(const VectorField& v) {
    return std::max({hermitian_defect(v[0]), hermitian_defect(v[1]), hermitian_defect(v[2])});
}

void symmetrize(ScalarField& f) {
    const Grid& g = f.grid();
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2) {
                const std::size_t a = g.index(i0, i1, i2);
                const std::size_t b = mirror_index(g, i0, i1, i2);
                if (b < a) continue;
                const Complex avg = 0.5 * (f[a] + std::conj(f[b]));
                f[a] = avg;
                f[b] = std::conj(avg);
            }
}

bool all_finite(const ScalarField& f) {
    return std::all_of(f.coeffs().begin(), f.coeffs().end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

}  // namespace anisomhd
