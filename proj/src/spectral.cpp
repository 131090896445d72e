#include "anisomhd/spectral.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/fft.hpp"

#include <algorithm>
#include <cmath>

namespace anisomhd {

namespace {

Complex i_pow(int order) {
    switch (order % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

}  // namespace

ScalarField derivative(const ScalarField& f, int axis, int order) {
    if (axis < 0 || axis > 2) throw ConfigError("derivative: axis must be 0, 1 or 2");
    if (order < 1) throw ConfigError("derivative: order must be positive");
    const Grid& g = f.grid();
    std::vector<Complex> symbol(g.n[axis]);
    const Complex unit = i_pow(order);
    for (int i = 0; i < g.n[axis]; ++i) {
        const double k = order % 2 == 1 ? g.odd_wavenumber(axis, i) : g.wavenumber(axis, i);
        symbol[i] = unit * std::pow(k, order);
    }
    ScalarField out(g);
    for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
        const int i[3] = {i0, i1, i2};
        out[idx] = f[idx] * symbol[i[axis]];
    });
    return out;
}

VectorField derivative(const VectorField& v, int axis, int order) {
    VectorField out(derivative(v[0], axis, order), derivative(v[1], axis, order),
                    derivative(v[2], axis, order));
    out.divergence_free = v.divergence_free;
    return out;
}

VectorField leray_project(const VectorField& v) {
    const Grid& g = v.grid();
    VectorField out(g);
    for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
        const double k0 = g.odd_wavenumber(0, i0);
        const double k1 = g.odd_wavenumber(1, i1);
        const double k2 = g.odd_wavenumber(2, i2);
        const double ksq = k0 * k0 + k1 * k1 + k2 * k2;
        const Complex a = v[0][idx], b = v[1][idx], c = v[2][idx];
        if (ksq == 0.0) {
            out[0][idx] = a;
            out[1][idx] = b;
            out[2][idx] = c;
            return;
        }
        const Complex kv = (k0 * a + k1 * b + k2 * c) / ksq;
        out[0][idx] = a - k0 * kv;
        out[1][idx] = b - k1 * kv;
        out[2][idx] = c - k2 * kv;
    });
    out.divergence_free = true;
    return out;
}

ScalarField divergence(const VectorField& v) {
    ScalarField out = derivative(v[0], 0);
    out += derivative(v[1], 1);
    out += derivative(v[2], 2);
    return out;
}

double max_relative_divergence(const VectorField& v) {
    const Grid& g = v.grid();
    std::array<std::vector<double>, 3> k;
    for (int a = 0; a < 3; ++a) {
        k[a].resize(g.n[a]);
        for (int i = 0; i < g.n[a]; ++i) k[a][i] = g.odd_wavenumber(a, i);
    }
    // compared in squares; one square root at the end
    double worst_sq = 0.0;
    for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
        const double k0 = k[0][i0], k1 = k[1][i1], k2 = k[2][i2];
        const double ksq = k0 * k0 + k1 * k1 + k2 * k2;
        if (ksq == 0.0) return;
        const Complex kv = k0 * v[0][idx] + k1 * v[1][idx] + k2 * v[2][idx];
        worst_sq = std::max(worst_sq, std::norm(kv) / ksq);
    });
    const double scale = max_abs(v);
    return scale > 0 ? std::sqrt(worst_sq) / scale : 0.0;
}

ScalarField dealiased_product(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw ConfigError("dealiased_product: grid mismatch");
    auto& fft = fft_for(f.grid());
    std::vector<double> a(f.grid().size()), b(f.grid().size());
    fft.to_physical(f.coeffs(), a);
    fft.to_physical(g.coeffs(), b);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    ScalarField out(f.grid());
    fft.to_spectral(a, out.coeffs(), true);
    return out;
}

ScalarField dealias(const ScalarField& f) {
    const Grid& g = f.grid();
    ScalarField out(g);
    for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
        if (g.retained(0, i0) && g.retained(1, i1) && g.retained(2, i2)) out[idx] = f[idx];
    });
    return out;
}

VectorField dealias(const VectorField& v) {
    VectorField out(dealias(v[0]), dealias(v[1]), dealias(v[2]));
    out.divergence_free = v.divergence_free;
    return out;
}

ScalarField transform_roundtrip(const ScalarField& f) {
    return to_spectral(to_physical(f));
}

ScalarField resample(const ScalarField& f, const Grid& target) {
    const Grid& g = f.grid();
    for (int a = 0; a < 3; ++a) {
        if (target.n[a] < g.n[a]) throw ConfigError("resample: target grid is coarser");
        if (target.length[a] != g.length[a]) throw ConfigError("resample: box lengths differ");
    }
    ScalarField out(target);
    for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
        std::array<int, 3> m{g.mode(0, i0), g.mode(1, i1), g.mode(2, i2)};
        // An unpaired Nyquist coefficient is split evenly between +m and -m
        // on the finer grid so the result stays real.
        Complex c = f[idx];
        std::array<bool, 3> nyq{};
        const int ii[3] = {i0, i1, i2};
        for (int a = 0; a < 3; ++a) nyq[a] = g.is_nyquist(a, ii[a]) && target.n[a] > g.n[a];
        const int splits = nyq[0] + nyq[1] + nyq[2];
        if (splits == 0) {
            out.at_mode(m) += c;
            return;
        }
        c /= static_cast<double>(1 << splits);
        for (int mask = 0; mask < (1 << 3); ++mask) {
            bool valid = true;
            std::array<int, 3> mm = m;
            for (int a = 0; a < 3; ++a) {
                if (mask & (1 << a)) {
                    if (!nyq[a]) valid = false;
                    mm[a] = -m[a];
                }
            }
            if (valid) out.at_mode(mm) += c;
        }
    });
    return out;
}

double l2_norm_sq(const ScalarField& f) {
    double s = 0.0;
    for (const auto& c : f.coeffs()) s += std::norm(c);
    return s * f.grid().volume();
}

double l2_norm_sq(const VectorField& v) {
    return l2_norm_sq(v[0]) + l2_norm_sq(v[1]) + l2_norm_sq(v[2]);
}

double l2_norm_sq(const PhysicalField& p) {
    double s = 0.0;
    for (double x : p.values) s += x * x;
    return s * p.grid.volume() / static_cast<double>(p.grid.size());
}

double inner_mean(const ScalarField& f, const ScalarField& g) {
    if (!(f.grid() == g.grid())) throw ConfigError("inner_mean: grid mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.grid().size(); ++i) s += (f[i] * std::conj(g[i])).real();
    return s;
}

}  // namespace anisomhd
