#pragma once

#include "anisomhd/mhd.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace anisomhd {

using Mat2 = std::array<std::array<Complex, 2>, 2>;

/// Eigenpair of the per-mode linear system. `plus` is the root with the
/// larger real part (the positive-imaginary one for a complex pair).
struct WaveMode {
    std::array<double, 3> k{};
    double kh_sq = 0.0;
    Complex plus;
    Complex minus;
};

/// Roots of x^2 + p x + q = 0 for real p, q, larger real part first. The
/// larger-magnitude root is formed directly and the other from the product,
/// so nothing cancels when one root is tiny.
std::array<Complex, 2> stable_quadratic_roots(double p, double q);

/// Roots of lambda^2 + (k1^2 + kh^2) lambda + (k1^2 kh^2 + k2^2) = 0 with
/// kh^2 = k1^2 + k2^2: the symbol of the damped wave equation obeyed by
/// both u and b in the default model.
WaveMode dispersion_roots(const std::array<double, 3>& k);

/// [[-sum nu_i k_i^2, i k_bg], [i k_bg, -sum eta_i k_i^2]] acting on one
/// (u, b) polarisation of mode k. Requires the perturbation variant.
Mat2 linear_block(const std::array<double, 3>& k, const ModelConfig& c);

/// Eigenvalues of linear_block via its characteristic polynomial.
WaveMode block_roots(const std::array<double, 3>& k, const ModelConfig& c);

/// exp(t M) for a 2x2 complex matrix, closed form through the eigenvalue
/// split M = s I + (M - s I), (M - s I)^2 = d^2 I.
Mat2 expm(const Mat2& m, double t);

struct DecayRow {
    std::array<int, 3> k{};
    double re_plus = 0.0, im_plus = 0.0, re_minus = 0.0, im_minus = 0.0;
};

/// Integer wavevectors (m1, m2, m3) with lo[a] <= m_a <= hi[a], ordered
/// lexicographically, on a 2*pi box (k = m).
std::vector<DecayRow> decay_map(const std::array<int, 3>& lo, const std::array<int, 3>& hi,
                                const ModelConfig& c);

std::string decay_csv_header();
std::string to_csv_row(const DecayRow& r);

struct LinearValidation {
    double max_relative_error = 0.0;
    std::vector<double> per_mode_error;
};

/// Excites each integer mode (one polarisation of u and b), runs the
/// simulator with the nonlinear terms off to time T, and compares with the
/// 2x2 matrix exponential. Uses a 2*pi box at `n` points per axis.
LinearValidation validate_simulator_linear(const std::vector<std::array<int, 3>>& modes,
                                           double T, double dt, const ModelConfig& c = {},
                                           int n = 8);

}  // namespace anisomhd
