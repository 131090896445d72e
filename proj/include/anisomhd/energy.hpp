#pragma once

#include "anisomhd/state.hpp"

#include <span>
#include <string>
#include <vector>

namespace anisomhd {

enum class SobolevForm {
    multiplier,      ///< sum_k (1 + |k|^2)^s |f(k)|^2
    equivalent_sum,  ///< ||f||^2 + sum_i ||d_i^s f||^2
};

struct SobolevSpec {
    int order = 4;
    SobolevForm form = SobolevForm::multiplier;
};

/// Squared H^s norm over the box (volume-weighted, so s = 0 is the L^2 norm).
double sobolev_norm_sq(const ScalarField& f, const SobolevSpec& spec);
double sobolev_norm_sq(const VectorField& v, const SobolevSpec& spec);

/// Spectral weight w(k) with ||f||^2_{H^s} = V sum_k w(k) |f(k)|^2.
double sobolev_weight(double k0, double k1, double k2, const SobolevSpec& spec);

/// Vorticity / current density.
VectorField curl(const VectorField& v);

/// Instantaneous norms and accumulated integrals of the H^4 energy
/// functional. The trailing `*_rate` members hold the integrands at `t` so the
/// next update can apply the trapezoid rule; they are not serialised.
struct EnergyReport {
    double t = 0.0;
    double h4_u = 0.0;
    double h4_b = 0.0;
    double int_d1u_h4 = 0.0;
    double int_dhb_h4 = 0.0;
    double int_d2u_h3 = 0.0;
    double e1 = 0.0;
    double e2 = 0.0;
    double e = 0.0;

    double sup_h4 = 0.0;
    double d1u_h4_rate = 0.0;
    double dhb_h4_rate = 0.0;
    double d2u_h3_rate = 0.0;
    SobolevForm form = SobolevForm::multiplier;
};

/// Report at the state's own time with empty integrals.
EnergyReport initial_report(const State& s, SobolevForm form = SobolevForm::multiplier);

/// Advances `prev` to `s.t`: running sup updated, integrals by trapezoid.
/// Throws UsageError if s.t < prev.t.
EnergyReport update_report(const EnergyReport& prev, const State& s);

/// Fixed column order: t,h4_u,h4_b,int_d1u_h4,int_dhb_h4,int_d2u_h3,e1,e2,e
std::string energy_csv_header();
std::string to_csv_row(const EnergyReport& r);
/// Parses one row written by to_csv_row (the trapezoid rates are left zero).
EnergyReport parse_csv_row(const std::string& line);

/// r(t) = C0 (E(0) + E(0)^{3/2} + E(t)^{3/2} + E(t)^2) - E(t); series[0] is E(0).
std::vector<double> bootstrap_residual(std::span<const double> energies, double c0);

/// Smallest C0 >= 1 for which every residual is non-negative, by bisection
/// to relative tolerance `rel_tol`.
double fit_bootstrap_constant(std::span<const double> energies, double rel_tol = 1e-12);

/// Smallest C >= 0 with lhs[i] <= C * rhs[i] for all i, by bisection.
/// Entries with rhs == 0 must have lhs == 0, otherwise the fit is +inf.
double fit_linear_constant(std::span<const double> lhs, std::span<const double> rhs,
                           double rel_tol = 1e-12);

/// W^{ijk} = integral of d3^3 w_i * d2 u_j * d3^3 w_k with w = curl u;
/// i, j, k are 1-based component labels.
double interaction_term(const State& s, int i, int j, int k);

/// P = sum_ij (-Laplacian)^{-1} d_i d_j (u_i u_j - b_i b_j), zero mean.
ScalarField pressure_field(const State& s);

}  // namespace anisomhd
