#include "anisomhd/mhd.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/fft.hpp"
#include "anisomhd/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace anisomhd {

std::string to_string(Variant v) {
    switch (v) {
        case Variant::perturbation: return "perturbation";
        case Variant::full_b: return "full-b";
        case Variant::navier_stokes_only: return "navier-stokes-only";
        case Variant::wu_zhu: return "wu-zhu";
    }
    return "unknown";
}

Variant parse_variant(const std::string& name) {
    if (name == "perturbation") return Variant::perturbation;
    if (name == "full-b" || name == "full_b") return Variant::full_b;
    if (name == "navier-stokes-only" || name == "navier_stokes_only") {
        return Variant::navier_stokes_only;
    }
    if (name == "wu-zhu" || name == "wu_zhu") return Variant::wu_zhu;
    throw ConfigError("unknown model variant '" + name + "'");
}

ModelConfig ModelConfig::normalized() const {
    ModelConfig c = *this;
    switch (variant) {
        case Variant::navier_stokes_only:
            c.coupling = false;
            break;
        case Variant::wu_zhu:
            c.nu = {1.0, 1.0, 0.0};
            c.eta = {0.0, 0.0, 1.0};
            c.background_axis = 1;
            break;
        case Variant::full_b:
            // The background enters through the mean of B in the products.
            c.coupling = false;
            break;
        case Variant::perturbation:
            break;
    }
    return c;
}

void ModelConfig::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (!(nu[a] >= 0.0) || !(eta[a] >= 0.0)) {
            throw ConfigError("model: viscosity and diffusion coefficients must be non-negative");
        }
    }
    if (background_axis < 1 || background_axis > 3) {
        throw ConfigError("model: background_axis must be 1, 2 or 3");
    }
    if (!(cfl > 0.0)) throw ConfigError("model: cfl must be positive");
    if (variant == Variant::full_b && !nonlinear) {
        throw ConfigError("model: full-b variant needs the nonlinear terms (coupling lives there)");
    }
}

namespace {

constexpr int kComponents = 6;  // u0 u1 u2 b0 b1 b2

using Buffer = std::vector<Complex>;
using Block = std::array<Buffer, kComponents>;

}  // namespace

struct Integrator::Impl {
    Grid grid;
    ModelConfig cfg;
    bool magnetic;
    std::size_t size;
    FftEngine fft;
    std::vector<double> lin_u, lin_b;        // -(sum nu_i k_i^2), -(sum eta_i k_i^2)
    std::vector<double> h4_weight;
    double cached_h = -1.0;
    std::vector<double> eu_full, eb_full, eu_half, eb_half;

    // Mode sets the per-mode loops run over. Dealiased products and the
    // diagonal/coupling terms never leave the 2/3-rule set, so a state
    // supported there stays there and the rest of the spectrum is skipped.
    struct ModeSet {
        std::vector<std::size_t> index;
        std::vector<double> q0, q1, q2;  // odd-symbol wavenumbers
    };
    ModeSet all_modes, retained_modes;
    const ModeSet* active = nullptr;

    std::array<AlignedReal, kComponents> phys;
    AlignedReal work;
    std::array<Buffer, 6> flux;  // spectra of u_a u_b - b_a b_b, a <= b
    std::array<Buffer, 3> emf;   // spectra of (u x b)_c
    Block y, k1, k2, k3, k4, stage;

    Impl(const Grid& g, const ModelConfig& c)
        : grid(g), cfg(c), magnetic(c.variant != Variant::navier_stokes_only),
          size(g.size()), fft(g) {
        lin_u.resize(size);
        lin_b.resize(size);
        h4_weight.resize(size);
        for_each_mode(g, [&](std::size_t idx, int i0, int i1, int i2) {
            const double q[3] = {g.wavenumber(0, i0), g.wavenumber(1, i1), g.wavenumber(2, i2)};
            double lu = 0.0, lb = 0.0;
            for (int a = 0; a < 3; ++a) {
                lu -= cfg.nu[a] * q[a] * q[a];
                lb -= cfg.eta[a] * q[a] * q[a];
            }
            lin_u[idx] = lu;
            lin_b[idx] = magnetic ? lb : 0.0;
            h4_weight[idx] = std::pow(1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2], 4);
            const double o[3] = {g.odd_wavenumber(0, i0), g.odd_wavenumber(1, i1),
                                 g.odd_wavenumber(2, i2)};
            const bool keep = g.retained(0, i0) && g.retained(1, i1) && g.retained(2, i2);
            for (ModeSet* set : {&all_modes, &retained_modes}) {
                if (set == &retained_modes && !keep) continue;
                set->index.push_back(idx);
                set->q0.push_back(o[0]);
                set->q1.push_back(o[1]);
                set->q2.push_back(o[2]);
            }
        });
        active = &all_modes;
        for (auto& p : phys) p.resize(size);
        work.resize(size);
        for (auto& f : flux) f.assign(size, Complex{});
        for (auto& f : emf) f.assign(size, Complex{});
        for (Block* b : {&y, &k1, &k2, &k3, &k4, &stage}) {
            for (auto& c : *b) c.assign(size, Complex{});
        }
    }

    /// Copies s into y and picks the mode set. Moving to the retained set
    /// clears every work block so skipped entries read as zero.
    void load(const State& s) {
        for (int a = 0; a < 3; ++a) {
            std::copy(s.u[a].coeffs().begin(), s.u[a].coeffs().end(), y[a].begin());
            if (magnetic) {
                std::copy(s.b[a].coeffs().begin(), s.b[a].coeffs().end(), y[a + 3].begin());
            } else {
                std::fill(y[a + 3].begin(), y[a + 3].end(), Complex{});
            }
        }
        bool supported = true;
        for_each_mode(grid, [&](std::size_t idx, int i0, int i1, int i2) {
            if (!supported || (grid.retained(0, i0) && grid.retained(1, i1) && grid.retained(2, i2))) {
                return;
            }
            for (int c = 0; c < kComponents; ++c) {
                if (y[c][idx] != Complex{}) {
                    supported = false;
                    return;
                }
            }
        });
        const ModeSet* want = supported ? &retained_modes : &all_modes;
        if (want != active && want == &retained_modes) {
            for (Block* b : {&k1, &k2, &k3, &k4, &stage}) {
                for (auto& c : *b) std::fill(c.begin(), c.end(), Complex{});
            }
        }
        active = want;
    }

    State unload(const Block& in, double t) const {
        State s = State::zero(grid);
        for (int a = 0; a < 3; ++a) {
            std::copy(in[a].begin(), in[a].end(), s.u[a].coeffs().begin());
            std::copy(in[a + 3].begin(), in[a + 3].end(), s.b[a].coeffs().begin());
        }
        s.t = t;
        return s;
    }

    void set_step(double h) {
        if (h == cached_h) return;
        eu_full.resize(size);
        eb_full.resize(size);
        eu_half.resize(size);
        eb_half.resize(size);
        for (std::size_t i = 0; i < size; ++i) {
            eu_full[i] = std::exp(lin_u[i] * h);
            eb_full[i] = std::exp(lin_b[i] * h);
            eu_half[i] = std::exp(lin_u[i] * 0.5 * h);
            eb_half[i] = std::exp(lin_b[i] * 0.5 * h);
        }
        cached_h = h;
    }

    const std::vector<double>& factor(int comp, bool half) const {
        if (comp < 3) return half ? eu_half : eu_full;
        return half ? eb_half : eb_full;
    }

    /// Leray projection in place on components [first, first + 3).
    void project(Block& v, int first) const {
        const ModeSet& ms = *active;
        for (std::size_t j = 0; j < ms.index.size(); ++j) {
            const double q0 = ms.q0[j], q1 = ms.q1[j], q2 = ms.q2[j];
            const double ksq = q0 * q0 + q1 * q1 + q2 * q2;
            if (ksq == 0.0) continue;
            const std::size_t idx = ms.index[j];
            Complex& a = v[first][idx];
            Complex& b = v[first + 1][idx];
            Complex& c = v[first + 2][idx];
            const Complex kv = (q0 * a + q1 * b + q2 * c) / ksq;
            a -= q0 * kv;
            b -= q1 * kv;
            c -= q2 * kv;
        }
    }

    /// Everything except the diagonal dissipation; returns max(|u|, |b|) over
    /// the physical grid when the nonlinear terms are active, else 0.
    ///
    /// The quadratic terms are formed in divergence form: the six entries of
    /// the symmetric flux u u - b b and the three of the electromotive force
    /// u x b are transformed, then a single pass over the modes applies the
    /// derivatives, the background coupling and the Leray projection.
    double explicit_terms(const Block& in, Block& out) {
        double speed = 0.0;
        const bool quad = cfg.nonlinear;
        if (quad) {
            const int ncomp = magnetic ? 6 : 3;
            for (int c = 0; c < ncomp; ++c) fft.to_physical(in[c], phys[c]);
            for (std::size_t i = 0; i < size; ++i) {
                const double su = phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] +
                                  phys[2][i] * phys[2][i];
                speed = std::max(speed, su);
                if (magnetic) {
                    const double sb = phys[3][i] * phys[3][i] + phys[4][i] * phys[4][i] +
                                      phys[5][i] * phys[5][i];
                    speed = std::max(speed, sb);
                }
            }
            speed = std::sqrt(speed);
            int slot = 0;
            for (int a = 0; a < 3; ++a)
                for (int b = a; b < 3; ++b, ++slot) {
                    const auto& ua = phys[a];
                    const auto& ub = phys[b];
                    if (magnetic) {
                        const auto& ba = phys[a + 3];
                        const auto& bb = phys[b + 3];
                        for (std::size_t i = 0; i < size; ++i) work[i] = ua[i] * ub[i] - ba[i] * bb[i];
                    } else {
                        for (std::size_t i = 0; i < size; ++i) work[i] = ua[i] * ub[i];
                    }
                    fft.to_spectral(work, flux[slot], true);
                }
            if (magnetic) {
                for (int c = 0; c < 3; ++c) {
                    const int p = (c + 1) % 3, q = (c + 2) % 3;
                    for (std::size_t i = 0; i < size; ++i) {
                        work[i] = phys[p][i] * phys[q + 3][i] - phys[q][i] * phys[p + 3][i];
                    }
                    fft.to_spectral(work, emf[c], true);
                }
            }
        }
        const bool couple = cfg.coupling && magnetic;
        const int bg = cfg.background_axis - 1;
        // i*z without a general complex product
        const auto I = [](Complex z) { return Complex(-z.imag(), z.real()); };
        const ModeSet& ms = *active;
        for (std::size_t j = 0; j < ms.index.size(); ++j) {
            const std::size_t idx = ms.index[j];
            const double q[3] = {ms.q0[j], ms.q1[j], ms.q2[j]};
            Complex du[3] = {}, db[3] = {};
            if (quad) {
                // flux slots: 00 01 02 11 12 22
                const Complex t00 = flux[0][idx], t01 = flux[1][idx], t02 = flux[2][idx];
                const Complex t11 = flux[3][idx], t12 = flux[4][idx], t22 = flux[5][idx];
                du[0] = -I(q[0] * t00 + q[1] * t01 + q[2] * t02);
                du[1] = -I(q[0] * t01 + q[1] * t11 + q[2] * t12);
                du[2] = -I(q[0] * t02 + q[1] * t12 + q[2] * t22);
                if (magnetic) {
                    // curl of the electromotive force: i q x A
                    const Complex a0 = emf[0][idx], a1 = emf[1][idx], a2 = emf[2][idx];
                    db[0] = I(q[1] * a2 - q[2] * a1);
                    db[1] = I(q[2] * a0 - q[0] * a2);
                    db[2] = I(q[0] * a1 - q[1] * a0);
                }
            }
            if (couple) {
                for (int a = 0; a < 3; ++a) {
                    du[a] += q[bg] * I(in[a + 3][idx]);
                    db[a] += q[bg] * I(in[a][idx]);
                }
            }
            const double ksq = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
            if (ksq > 0.0) {
                const Complex pu = (q[0] * du[0] + q[1] * du[1] + q[2] * du[2]) / ksq;
                for (int a = 0; a < 3; ++a) du[a] -= q[a] * pu;
                if (magnetic) {
                    const Complex pb = (q[0] * db[0] + q[1] * db[1] + q[2] * db[2]) / ksq;
                    for (int a = 0; a < 3; ++a) db[a] -= q[a] * pb;
                }
            }
            for (int a = 0; a < 3; ++a) {
                out[a][idx] = du[a];
                out[a + 3][idx] = db[a];
            }
        }
        return speed;
    }

    double dissipation(const Block& v) const {
        double s = 0.0;
        for (std::size_t i : active->index) {
            s += lin_u[i] * (std::norm(v[0][i]) + std::norm(v[1][i]) + std::norm(v[2][i]));
            if (magnetic) {
                s += lin_b[i] * (std::norm(v[3][i]) + std::norm(v[4][i]) + std::norm(v[5][i]));
            }
        }
        return -2.0 * s * grid.volume();
    }

    double h4_size(const Block& v) const {
        double su = 0.0, sb = 0.0;
        for (std::size_t i : active->index) {
            su += h4_weight[i] * (std::norm(v[0][i]) + std::norm(v[1][i]) + std::norm(v[2][i]));
            sb += h4_weight[i] * (std::norm(v[3][i]) + std::norm(v[4][i]) + std::norm(v[5][i]));
        }
        return std::sqrt(su * grid.volume()) + std::sqrt(sb * grid.volume());
    }

    bool all_finite(const Block& v) const {
        for (std::size_t i : active->index) {
            for (const auto& c : v) {
                if (!std::isfinite(c[i].real()) || !std::isfinite(c[i].imag())) return false;
            }
        }
        return true;
    }
};

Integrator::Integrator(const Grid& g, const ModelConfig& c)
    : grid_(g), cfg_(c.normalized()) {
    cfg_.validate();
    impl_ = std::make_unique<Impl>(g, cfg_);
}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

Rhs Integrator::rhs(const State& s) {
    require_consistent(s);
    if (!(s.grid() == grid_)) throw ConfigError("rhs: state grid differs from integrator grid");
    Impl& m = *impl_;
    m.load(s);
    m.explicit_terms(m.y, m.k1);
    for (std::size_t i : m.active->index) {
        for (int c = 0; c < 3; ++c) m.k1[c][i] += m.lin_u[i] * m.y[c][i];
        if (m.magnetic) {
            for (int c = 3; c < 6; ++c) m.k1[c][i] += m.lin_b[i] * m.y[c][i];
        }
    }
    State out = m.unload(m.k1, s.t);
    out.u.divergence_free = out.b.divergence_free = true;
    return {std::move(out.u), std::move(out.b)};
}

State Integrator::step(const State& s, double h) {
    require_consistent(s);
    if (!(s.grid() == grid_)) throw ConfigError("step: state grid differs from integrator grid");
    if (!(h > 0.0)) throw UsageError("step: dt must be positive");
    Impl& m = *impl_;
    m.set_step(h);
    m.load(s);
    const auto& modes = m.active->index;

    const double speed = m.explicit_terms(m.y, m.k1);
    if (cfg_.nonlinear) {
        double dx = grid_.spacing(0);
        for (int a = 1; a < 3; ++a) dx = std::min(dx, grid_.spacing(a));
        const double limit = cfg_.cfl * dx / std::max(speed, 1.0);
        if (h > limit * (1 + 1e-12)) {
            throw UsageError("step: dt = " + std::to_string(h) + " exceeds the CFL limit " +
                             std::to_string(limit) + " at t = " + std::to_string(s.t));
        }
    }
    const double d1 = m.dissipation(m.y);

    // y_a = E_{h/2} (y + h/2 k1)
    for (int c = 0; c < kComponents; ++c) {
        const auto& e = m.factor(c, true);
        for (std::size_t i : modes) m.stage[c][i] = e[i] * (m.y[c][i] + 0.5 * h * m.k1[c][i]);
    }
    const double d2 = m.dissipation(m.stage);
    m.explicit_terms(m.stage, m.k2);

    // y_b = E_{h/2} y + h/2 k2
    for (int c = 0; c < kComponents; ++c) {
        const auto& e = m.factor(c, true);
        for (std::size_t i : modes) m.stage[c][i] = e[i] * m.y[c][i] + 0.5 * h * m.k2[c][i];
    }
    const double d3 = m.dissipation(m.stage);
    m.explicit_terms(m.stage, m.k3);

    // y_c = E_h y + h E_{h/2} k3
    for (int c = 0; c < kComponents; ++c) {
        const auto& e = m.factor(c, false);
        const auto& eh = m.factor(c, true);
        for (std::size_t i : modes) m.stage[c][i] = e[i] * m.y[c][i] + h * eh[i] * m.k3[c][i];
    }
    const double d4 = m.dissipation(m.stage);
    m.explicit_terms(m.stage, m.k4);

    for (int c = 0; c < kComponents; ++c) {
        const auto& e = m.factor(c, false);
        const auto& eh = m.factor(c, true);
        for (std::size_t i : modes) {
            m.stage[c][i] = e[i] * m.y[c][i] +
                            h / 6.0 * (e[i] * m.k1[c][i] + 2.0 * eh[i] * (m.k2[c][i] + m.k3[c][i]) +
                                       m.k4[c][i]);
        }
    }
    m.project(m.stage, 0);
    m.project(m.stage, 3);
    last_dissipation_ = h / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);

    const double t_new = s.t + h;
    if (!m.all_finite(m.stage)) {
        throw BlowUpError(t_new, "non-finite coefficient at t = " + std::to_string(t_new));
    }
    const double size = m.h4_size(m.stage);
    if (size > blowup_threshold) {
        throw BlowUpError(t_new, "H4 size " + std::to_string(size) + " exceeds " +
                                     std::to_string(blowup_threshold) + " at t = " +
                                     std::to_string(t_new));
    }
    return m.unload(m.stage, t_new);
}

State step(const State& s, double dt, const ModelConfig& c) {
    Integrator integ(s.grid(), c);
    return integ.step(s, dt);
}

Rhs rhs(const State& s, const ModelConfig& c) {
    Integrator integ(s.grid(), c);
    return integ.rhs(s);
}

double cfl_limit(const State& s, const ModelConfig& c) {
    const Grid& g = s.grid();
    double speed = 0.0;
    std::array<PhysicalField, 3> pu, pb;
    for (int a = 0; a < 3; ++a) {
        pu[a] = to_physical(s.u[a]);
        pb[a] = to_physical(s.b[a]);
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        double su = 0.0, sb = 0.0;
        for (int a = 0; a < 3; ++a) {
            su += pu[a].values[i] * pu[a].values[i];
            sb += pb[a].values[i] * pb[a].values[i];
        }
        speed = std::max({speed, su, sb});
    }
    double dx = g.spacing(0);
    for (int a = 1; a < 3; ++a) dx = std::min(dx, g.spacing(a));
    return c.cfl * dx / std::max(std::sqrt(speed), 1.0);
}

double dissipation_rate(const State& s, const ModelConfig& cfg) {
    const ModelConfig c = cfg.normalized();
    double r = 0.0;
    for (int a = 0; a < 3; ++a) {
        if (c.nu[a] != 0.0) r += c.nu[a] * l2_norm_sq(derivative(s.u, a));
        if (c.eta[a] != 0.0 && c.variant != Variant::navier_stokes_only) {
            r += c.eta[a] * l2_norm_sq(derivative(s.b, a));
        }
    }
    return 2.0 * r;
}

RunResult run(const State& s0, double duration, double dt, const ModelConfig& c,
              const RunOptions& opts) {
    if (!(duration >= 0.0)) throw UsageError("run: duration must be non-negative");
    if (!(dt > 0.0)) throw UsageError("run: dt must be positive");
    if (opts.sample_every < 1) throw UsageError("run: sample_every must be positive");
    require_consistent(s0);

    Integrator integ(s0.grid(), c);
    integ.blowup_threshold = opts.blowup_threshold;
    RunResult result;

    EnergyReport report = opts.resume_from ? *opts.resume_from : initial_report(s0, opts.form);
    if (opts.resume_from) report = update_report(report, s0);
    double dissipated = 0.0;
    auto record = [&](const State& s, long step_index) {
        Sample smp;
        smp.report = report;
        smp.max_divergence = max_relative_divergence(s);
        smp.l2_energy = l2_norm_sq(s.u) + l2_norm_sq(s.b);
        smp.dissipated_l2 = dissipated;
        smp.step = step_index;
        if (opts.keep_snapshots) smp.snapshot = std::make_shared<const State>(s);
        result.series.push_back(std::move(smp));
    };

    State s = s0;
    long step_index = opts.first_step;
    record(s, step_index);
    const double t_end = s0.t + duration;
    // Step targets are anchored to a fixed origin so that a run resumed from
    // step k lands on exactly the same instants as an uninterrupted one.
    const double origin = opts.time_origin ? *opts.time_origin : s0.t;
    const long last_step =
        duration > 0.0 ? static_cast<long>(std::ceil((t_end - origin) / dt - 1e-9)) : step_index;
    const long nsteps = std::max(0L, last_step - step_index);
    for (long j = 1; j <= nsteps; ++j) {
        const long global = step_index + 1;
        const double target = j == nsteps ? t_end : origin + static_cast<double>(global) * dt;
        const double h = target - s.t;
        try {
            State next = integ.step(s, h);
            next.t = target;
            s = std::move(next);
        } catch (const BlowUpError& e) {
            result.failure = BlowUpRecord{e.time(), e.what()};
            break;
        } catch (const UsageError& e) {
            result.failure = BlowUpRecord{s.t + h, e.what()};
            break;
        }
        ++step_index;
        dissipated += integ.last_dissipation();
        const bool sample = step_index % opts.sample_every == 0 || j == nsteps;
        // The report integrates only at sampled instants.
        if (sample) {
            report = update_report(report, s);
            record(s, step_index);
        }
        if (opts.on_step) opts.on_step(s, step_index);
    }
    result.final_state = std::move(s);
    return result;
}

}  // namespace anisomhd
