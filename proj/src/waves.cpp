#include "anisomhd/waves.hpp"

#include "anisomhd/errors.hpp"

#include <cmath>
#include <cstdio>

namespace anisomhd {

std::array<Complex, 2> stable_quadratic_roots(double p, double q) {
    const double disc = p * p - 4.0 * q;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        const double big = -0.5 * (p + std::copysign(root, p));
        const double small = big != 0.0 ? q / big : 0.0;
        return big >= small ? std::array<Complex, 2>{big, small}
                            : std::array<Complex, 2>{small, big};
    }
    const double re = -0.5 * p;
    const double im = 0.5 * std::sqrt(-disc);
    return {Complex(re, im), Complex(re, -im)};
}

namespace {

WaveMode roots_from(const std::array<double, 3>& k, double p, double q) {
    WaveMode w;
    w.k = k;
    w.kh_sq = k[0] * k[0] + k[1] * k[1];
    const auto r = stable_quadratic_roots(p, q);
    w.plus = r[0];
    w.minus = r[1];
    return w;
}

}  // namespace

WaveMode dispersion_roots(const std::array<double, 3>& k) {
    const double k1sq = k[0] * k[0];
    const double khsq = k1sq + k[1] * k[1];
    return roots_from(k, k1sq + khsq, k1sq * khsq + k[1] * k[1]);
}

Mat2 linear_block(const std::array<double, 3>& k, const ModelConfig& cfg) {
    const ModelConfig c = cfg.normalized();
    if (c.variant != Variant::perturbation) {
        throw ConfigError("linear_block: only the perturbation variant has a 2x2 block, got " +
                          to_string(c.variant));
    }
    double du = 0.0, db = 0.0;
    for (int a = 0; a < 3; ++a) {
        du -= c.nu[a] * k[a] * k[a];
        db -= c.eta[a] * k[a] * k[a];
    }
    const Complex couple = c.coupling ? Complex(0.0, k[c.background_axis - 1]) : Complex{};
    return Mat2{{{du, couple}, {couple, db}}};
}

WaveMode block_roots(const std::array<double, 3>& k, const ModelConfig& cfg) {
    const Mat2 m = linear_block(k, cfg);
    // Diagonal real, off-diagonal i*kb on both sides: trace and determinant are real.
    const double a = m[0][0].real(), d = m[1][1].real();
    const double det = a * d - (m[0][1] * m[1][0]).real();
    return roots_from(k, -(a + d), det);
}

Mat2 expm(const Mat2& m, double t) {
    const Complex s = 0.5 * (m[0][0] + m[1][1]);
    const Complex a = m[0][0] - s;  // M - sI = [[a, b], [c, -a]]
    const Complex b = m[0][1], c = m[1][0];
    const Complex d = std::sqrt(a * a + b * c);
    const Complex dt = d * t;
    Complex ch, sh_over_d;
    if (std::abs(dt) < 1e-4) {
        const Complex z = dt * dt;
        ch = 1.0 + z / 2.0 + z * z / 24.0;
        sh_over_d = t * (1.0 + z / 6.0 + z * z / 120.0);
    } else {
        ch = std::cosh(dt);
        sh_over_d = std::sinh(dt) / d;
    }
    const Complex e = std::exp(s * t);
    return Mat2{{{e * (ch + sh_over_d * a), e * sh_over_d * b},
                 {e * sh_over_d * c, e * (ch - sh_over_d * a)}}};
}

std::vector<DecayRow> decay_map(const std::array<int, 3>& lo, const std::array<int, 3>& hi,
                                const ModelConfig& c) {
    for (int a = 0; a < 3; ++a) {
        if (lo[a] > hi[a]) throw ConfigError("decay_map: empty lattice range");
    }
    std::vector<DecayRow> rows;
    rows.reserve(static_cast<std::size_t>(hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) *
                 (hi[2] - lo[2] + 1));
    for (int m0 = lo[0]; m0 <= hi[0]; ++m0)
        for (int m1 = lo[1]; m1 <= hi[1]; ++m1)
            for (int m2 = lo[2]; m2 <= hi[2]; ++m2) {
                const WaveMode w = block_roots({double(m0), double(m1), double(m2)}, c);
                rows.push_back({{m0, m1, m2}, w.plus.real(), w.plus.imag(), w.minus.real(),
                                w.minus.imag()});
            }
    return rows;
}

std::string decay_csv_header() {
    return "k1,k2,k3,re_lambda_plus,im_lambda_plus,re_lambda_minus,im_lambda_minus";
}

std::string to_csv_row(const DecayRow& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g", r.k[0], r.k[1], r.k[2],
                  r.re_plus, r.im_plus, r.re_minus, r.im_minus);
    return buf;
}

namespace {

/// Unit vector orthogonal to k.
std::array<double, 3> polarisation(const std::array<int, 3>& m) {
    // Cross with the axis least aligned with k.
    int axis = 0;
    for (int a = 1; a < 3; ++a) {
        if (std::abs(m[a]) < std::abs(m[axis])) axis = a;
    }
    std::array<double, 3> e{0, 0, 0};
    e[axis] = 1.0;
    std::array<double, 3> v{m[1] * e[2] - m[2] * e[1], m[2] * e[0] - m[0] * e[2],
                            m[0] * e[1] - m[1] * e[0]};
    const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    for (auto& x : v) x /= len;
    return v;
}

}  // namespace

LinearValidation validate_simulator_linear(const std::vector<std::array<int, 3>>& modes,
                                           double T, double dt, const ModelConfig& cfg, int n) {
    ModelConfig c = cfg.normalized();
    c.nonlinear = false;
    const Grid grid(n, n, n);
    const Complex u_amp(1.0, 0.0), b_amp(0.3, 0.4);
    LinearValidation out;
    for (const auto& m : modes) {
        if (m == std::array<int, 3>{0, 0, 0}) throw ConfigError("validate: zero mode has no dynamics");
        const auto e = polarisation(m);
        State s = State::zero(grid);
        for (int a = 0; a < 3; ++a) {
            s.u[a].set_mode_pair(m, u_amp * e[a]);
            s.b[a].set_mode_pair(m, b_amp * e[a]);
        }
        RunOptions opts;
        opts.sample_every = 1 << 30;
        RunResult r = run(s, T, dt, c, opts);
        if (r.failure) {
            throw BlowUpError(r.failure->time, "linear validation blew up: " + r.failure->reason);
        }
        Complex su{}, sb{};
        for (int a = 0; a < 3; ++a) {
            su += r.final_state.u[a].at_mode(m) * e[a];
            sb += r.final_state.b[a].at_mode(m) * e[a];
        }
        const Mat2 prop = expm(linear_block({double(m[0]), double(m[1]), double(m[2])}, c), T);
        const Complex eu = prop[0][0] * u_amp + prop[0][1] * b_amp;
        const Complex eb = prop[1][0] * u_amp + prop[1][1] * b_amp;
        const double err = std::sqrt(std::norm(su - eu) + std::norm(sb - eb)) /
                           std::sqrt(std::norm(eu) + std::norm(eb));
        out.per_mode_error.push_back(err);
        out.max_relative_error = std::max(out.max_relative_error, err);
    }
    return out;
}

}  // namespace anisomhd
