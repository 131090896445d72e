#pragma once

#include "anisomhd/fields.hpp"
#include "anisomhd/state.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace testsupport {

using anisomhd::Complex;
using anisomhd::Grid;
using anisomhd::ScalarField;
using anisomhd::State;
using anisomhd::VectorField;

/// Random real field with every mode |m_a| <= band filled, Hermitian by
/// construction, independent of the library's generators.
inline ScalarField random_field(const Grid& g, int band, std::uint64_t seed, bool zero_mean = true) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    ScalarField f(g);
    for (int m0 = -band; m0 <= band; ++m0)
        for (int m1 = -band; m1 <= band; ++m1)
            for (int m2 = -band; m2 <= band; ++m2) {
                const Complex c(uni(rng), uni(rng));
                const std::size_t i = g.index_of_mode({m0, m1, m2});
                const std::size_t j = g.index_of_mode({-m0, -m1, -m2});
                if (i == j) {
                    f[i] = Complex(c.real(), 0.0);
                } else if (i < j) {
                    f[i] = c;
                    f[j] = std::conj(c);
                }
            }
    if (zero_mean) f.at_mode({0, 0, 0}) = 0.0;
    return f;
}

/// Solenoidal field built as the curl of a random potential, computed here
/// with its own wavenumber loop.
inline VectorField random_solenoidal(const Grid& g, int band, std::uint64_t seed, double scale = 1.0) {
    const ScalarField a[3] = {random_field(g, band, seed), random_field(g, band, seed + 101),
                              random_field(g, band, seed + 202)};
    VectorField v(g);
    for (int i0 = 0; i0 < g.n[0]; ++i0)
        for (int i1 = 0; i1 < g.n[1]; ++i1)
            for (int i2 = 0; i2 < g.n[2]; ++i2) {
                const std::size_t idx = g.index(i0, i1, i2);
                const double k[3] = {2 * std::numbers::pi / g.length[0] * g.mode(0, i0),
                                     2 * std::numbers::pi / g.length[1] * g.mode(1, i1),
                                     2 * std::numbers::pi / g.length[2] * g.mode(2, i2)};
                const Complex I(0.0, 1.0);
                for (int c = 0; c < 3; ++c) {
                    const int p = (c + 1) % 3, q = (c + 2) % 3;
                    v[c][idx] = scale * I * (k[p] * a[q][idx] - k[q] * a[p][idx]);
                }
            }
    return v;
}

/// Direct evaluation of the Fourier series at M^3 equispaced points, one
/// axis at a time with explicit exponentials (no FFT library involved).
inline std::vector<double> dense_values(const ScalarField& f, int M) {
    const Grid& g = f.grid();
    const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
    auto phase = [&](int axis, int i, int p) {
        const double x = g.length[axis] * p / M;
        const double k = 2 * std::numbers::pi / g.length[axis] * g.mode(axis, i);
        return std::polar(1.0, k * x);
    };
    // stage 1: axis 2
    std::vector<Complex> s1(static_cast<std::size_t>(n0) * n1 * M);
    for (int i0 = 0; i0 < n0; ++i0)
        for (int i1 = 0; i1 < n1; ++i1)
            for (int p2 = 0; p2 < M; ++p2) {
                Complex acc{};
                for (int i2 = 0; i2 < n2; ++i2) acc += f[g.index(i0, i1, i2)] * phase(2, i2, p2);
                s1[(static_cast<std::size_t>(i0) * n1 + i1) * M + p2] = acc;
            }
    std::vector<Complex> s2(static_cast<std::size_t>(n0) * M * M);
    for (int i0 = 0; i0 < n0; ++i0)
        for (int p1 = 0; p1 < M; ++p1)
            for (int p2 = 0; p2 < M; ++p2) {
                Complex acc{};
                for (int i1 = 0; i1 < n1; ++i1) acc += s1[(static_cast<std::size_t>(i0) * n1 + i1) * M + p2] * phase(1, i1, p1);
                s2[(static_cast<std::size_t>(i0) * M + p1) * M + p2] = acc;
            }
    std::vector<double> out(static_cast<std::size_t>(M) * M * M);
    for (int p0 = 0; p0 < M; ++p0)
        for (int p1 = 0; p1 < M; ++p1)
            for (int p2 = 0; p2 < M; ++p2) {
                Complex acc{};
                for (int i0 = 0; i0 < n0; ++i0) acc += s2[(static_cast<std::size_t>(i0) * M + p1) * M + p2] * phase(0, i0, p0);
                out[(static_cast<std::size_t>(p0) * M + p1) * M + p2] = acc.real();
            }
    return out;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double max_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.coeffs().size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double max_diff(const VectorField& a, const VectorField& b) {
    return std::max({max_diff(a[0], b[0]), max_diff(a[1], b[1]), max_diff(a[2], b[2])});
}


/// Samples of e^{-|x|} smoothed by a unit-mass Gaussian of width sigma, on
/// [-L/2, L/2) with n points, from the closed form of the convolution.
inline std::vector<double> mollified_exponential(double sigma, double L, int n) {
    std::vector<double> s(n);
    const double r2 = std::sqrt(2.0) * sigma;
    for (int i = 0; i < n; ++i) {
        const double x = -L / 2 + L * i / n;
        const double ax = std::abs(x);
        const double near = std::exp(sigma * sigma / 2 - ax) * std::erfc((sigma * sigma - ax) / r2);
        const double far = std::exp(sigma * sigma / 2 + ax) * std::erfc((sigma * sigma + ax) / r2);
        s[i] = 0.5 * (near + far);
    }
    return s;
}

}  // namespace testsupport
