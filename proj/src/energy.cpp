#include "anisomhd/energy.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>
#include <cstdio>
#include <limits>
#include <sstream>

namespace anisomhd {

double sobolev_weight(double k0, double k1, double k2, const SobolevSpec& spec) {
    const int s = spec.order;
    if (s < 0) throw ConfigError("sobolev order must be non-negative");
    if (spec.form == SobolevForm::multiplier) {
        return std::pow(1.0 + k0 * k0 + k1 * k1 + k2 * k2, s);
    }
    if (s == 0) return 1.0;  // ||f||^2 only; the sum of zeroth derivatives is not added
    return 1.0 + std::pow(k0 * k0, s) + std::pow(k1 * k1, s) + std::pow(k2 * k2, s);
}

double sobolev_norm_sq(const ScalarField& f, const SobolevSpec& spec) {
    const Grid& g = f.grid();
    double sum = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
        const double w = sobolev_weight(g.wavenumber(0, i0), g.wavenumber(1, i1),
                                        g.wavenumber(2, i2), spec);
        sum += w * std::norm(f[idx]);
    });
    return sum * g.volume();
}

double sobolev_norm_sq(const VectorField& v, const SobolevSpec& spec) {
    return sobolev_norm_sq(v[0], spec) + sobolev_norm_sq(v[1], spec) +
           sobolev_norm_sq(v[2], spec);
}

VectorField curl(const VectorField& v) {
    ScalarField c0 = derivative(v[2], 1) - derivative(v[1], 2);
    ScalarField c1 = derivative(v[0], 2) - derivative(v[2], 0);
    ScalarField c2 = derivative(v[1], 0) - derivative(v[0], 1);
    return VectorField(std::move(c0), std::move(c1), std::move(c2), true);
}

namespace {

struct Integrands {
    double h4_u = 0, h4_b = 0, d1u_h4 = 0, dhb_h4 = 0, d2u_h3 = 0;
};

/// Per-mode weights for one grid and norm form, built once per thread.
struct WeightTable {
    std::vector<double> w4, w3, d0sq, dhsq;
};

const WeightTable& weights_for(const Grid& g, SobolevForm form) {
    using Key = std::tuple<std::array<int, 3>, std::array<double, 3>, SobolevForm>;
    thread_local std::map<Key, WeightTable> cache;
    auto [it, fresh] = cache.try_emplace(Key{g.n, g.length, form});
    WeightTable& t = it->second;
    if (fresh) {
        const SobolevSpec h4{4, form}, h3{3, form};
        t.w4.resize(g.size());
        t.w3.resize(g.size());
        t.d0sq.resize(g.size());
        t.dhsq.resize(g.size());
        for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double k0 = g.wavenumber(0, i0), k1 = g.wavenumber(1, i1), k2 = g.wavenumber(2, i2);
            t.w4[idx] = sobolev_weight(k0, k1, k2, h4);
            t.w3[idx] = sobolev_weight(k0, k1, k2, h3);
            const double d0 = g.odd_wavenumber(0, i0), d1 = g.odd_wavenumber(1, i1);
            t.d0sq[idx] = d0 * d0;
            t.dhsq[idx] = d1 * d1;
        });
    }
    return t;
}

Integrands integrands(const State& s, SobolevForm form) {
    require_consistent(s);
    const Grid& g = s.grid();
    const WeightTable& t = weights_for(g, form);
    Integrands r;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        const double eu = std::norm(s.u[0][idx]) + std::norm(s.u[1][idx]) + std::norm(s.u[2][idx]);
        const double eb = std::norm(s.b[0][idx]) + std::norm(s.b[1][idx]) + std::norm(s.b[2][idx]);
        const double w4 = t.w4[idx];
        r.h4_u += w4 * eu;
        r.h4_b += w4 * eb;
        r.d1u_h4 += t.d0sq[idx] * w4 * eu;
        r.dhb_h4 += (t.d0sq[idx] + t.dhsq[idx]) * w4 * eb;
        r.d2u_h3 += t.dhsq[idx] * t.w3[idx] * eu;
    }
    const double vol = g.volume();
    r.h4_u *= vol;
    r.h4_b *= vol;
    r.d1u_h4 *= vol;
    r.dhb_h4 *= vol;
    r.d2u_h3 *= vol;
    return r;
}

void compose(EnergyReport& r) {
    r.e1 = r.sup_h4 + r.int_d1u_h4 + r.int_dhb_h4;
    r.e2 = r.int_d2u_h3;
    r.e = r.e1 + r.e2;
}

}  // namespace

EnergyReport initial_report(const State& s, SobolevForm form) {
    const Integrands in = integrands(s, form);
    EnergyReport r;
    r.form = form;
    r.t = s.t;
    r.h4_u = in.h4_u;
    r.h4_b = in.h4_b;
    r.sup_h4 = in.h4_u + in.h4_b;
    r.d1u_h4_rate = in.d1u_h4;
    r.dhb_h4_rate = in.dhb_h4;
    r.d2u_h3_rate = in.d2u_h3;
    compose(r);
    return r;
}

EnergyReport update_report(const EnergyReport& prev, const State& s) {
    if (s.t < prev.t) {
        throw UsageError("update_report: time went backwards (" + std::to_string(prev.t) +
                         " -> " + std::to_string(s.t) + ")");
    }
    const Integrands in = integrands(s, prev.form);
    const double dt = s.t - prev.t;
    EnergyReport r = prev;
    r.t = s.t;
    r.h4_u = in.h4_u;
    r.h4_b = in.h4_b;
    r.sup_h4 = std::max(prev.sup_h4, in.h4_u + in.h4_b);
    r.int_d1u_h4 += 0.5 * dt * (prev.d1u_h4_rate + in.d1u_h4);
    r.int_dhb_h4 += 0.5 * dt * (prev.dhb_h4_rate + in.dhb_h4);
    r.int_d2u_h3 += 0.5 * dt * (prev.d2u_h3_rate + in.d2u_h3);
    r.d1u_h4_rate = in.d1u_h4;
    r.dhb_h4_rate = in.dhb_h4;
    r.d2u_h3_rate = in.d2u_h3;
    compose(r);
    return r;
}

std::string energy_csv_header() {
    return "t,h4_u,h4_b,int_d1u_h4,int_dhb_h4,int_d2u_h3,e1,e2,e";
}

std::string to_csv_row(const EnergyReport& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", r.t,
                  r.h4_u, r.h4_b, r.int_d1u_h4, r.int_dhb_h4, r.int_d2u_h3, r.e1, r.e2, r.e);
    return buf;
}

EnergyReport parse_csv_row(const std::string& line) {
    std::istringstream in(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(in, cell, ',')) {
        try {
            v.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("energy csv: cannot parse '" + cell + "'");
        }
    }
    if (v.size() != 9) throw ConfigError("energy csv: expected 9 columns in '" + line + "'");
    EnergyReport r;
    r.t = v[0];
    r.h4_u = v[1];
    r.h4_b = v[2];
    r.int_d1u_h4 = v[3];
    r.int_dhb_h4 = v[4];
    r.int_d2u_h3 = v[5];
    r.e1 = v[6];
    r.e2 = v[7];
    r.e = v[8];
    r.sup_h4 = r.e1 - r.int_d1u_h4 - r.int_dhb_h4;
    return r;
}

std::vector<double> bootstrap_residual(std::span<const double> energies, double c0) {
    std::vector<double> r;
    if (energies.empty()) return r;
    r.reserve(energies.size());
    const double e0 = energies.front();
    const double base = e0 + std::pow(e0, 1.5);
    for (double e : energies) r.push_back(c0 * (base + std::pow(e, 1.5) + e * e) - e);
    return r;
}

namespace {

template <class Feasible>
double bisect_minimal(double lo, Feasible feasible, double rel_tol) {
    if (feasible(lo)) return lo;
    double hi = std::max(1.0, 2 * lo);
    while (!feasible(hi)) {
        hi *= 2;
        if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

double fit_bootstrap_constant(std::span<const double> energies, double rel_tol) {
    auto feasible = [&](double c0) {
        const auto r = bootstrap_residual(energies, c0);
        return std::all_of(r.begin(), r.end(), [](double x) { return x >= 0.0; });
    };
    return bisect_minimal(1.0, feasible, rel_tol);
}

double fit_linear_constant(std::span<const double> lhs, std::span<const double> rhs,
                           double rel_tol) {
    if (lhs.size() != rhs.size()) throw UsageError("fit_linear_constant: length mismatch");
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (rhs[i] <= 0.0 && lhs[i] > 0.0) return std::numeric_limits<double>::infinity();
    }
    auto feasible = [&](double c) {
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            if (lhs[i] > c * rhs[i]) return false;
        }
        return true;
    };
    return bisect_minimal(0.0, feasible, rel_tol);
}

double interaction_term(const State& s, int i, int j, int k) {
    for (int c : {i, j, k}) {
        if (c < 1 || c > 3) throw ConfigError("interaction_term: component labels are 1..3");
    }
    const VectorField w = curl(s.u);
    const ScalarField a = derivative(w[i - 1], 2, 3);
    const ScalarField mid = derivative(s.u[j - 1], 1, 1);
    const ScalarField c = derivative(w[k - 1], 2, 3);
    // Band-limited factors: the mean of (a*mid)*c only sees the retained
    // modes of the dealiased product.
    const ScalarField am = dealiased_product(a, mid);
    return inner_mean(am, c) * s.grid().volume();
}

ScalarField pressure_field(const State& s) {
    require_consistent(s);
    const Grid& g = s.grid();
    ScalarField p(g);
    for (int a = 0; a < 3; ++a) {
        for (int b = a; b < 3; ++b) {
            ScalarField t = dealiased_product(s.u[a], s.u[b]) - dealiased_product(s.b[a], s.b[b]);
            const double mult = a == b ? 1.0 : 2.0;
            for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
                const double k[3] = {g.odd_wavenumber(0, i0), g.odd_wavenumber(1, i1),
                                     g.odd_wavenumber(2, i2)};
                const double ksq = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
                if (ksq == 0.0) return;
                p[idx] -= mult * k[a] * k[b] / ksq * t[idx];
            });
        }
    }
    return p;
}

}  // namespace anisomhd
