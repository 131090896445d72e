#pragma once

#include "anisomhd/energy.hpp"
#include "anisomhd/state.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace anisomhd {

enum class Variant {
    perturbation,        ///< perturbation about B0 = e_bg, coupling terms explicit
    full_b,              ///< b holds the total field B (its mean is the background)
    navier_stokes_only,  ///< b == 0, one-directional viscosity only
    wu_zhu,              ///< horizontal viscosity, vertical diffusion, B0 = e1
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct ModelConfig {
    std::array<double, 3> nu{1.0, 0.0, 0.0};   ///< viscosity per direction on u
    std::array<double, 3> eta{1.0, 1.0, 0.0};  ///< diffusion per direction on b
    bool coupling = true;                      ///< the d_bg b / d_bg u background terms
    int background_axis = 2;                   ///< 1-based direction of B0
    Variant variant = Variant::perturbation;
    bool nonlinear = true;                     ///< quadratic terms on/off
    double cfl = 0.5;

    /// Copy with the variant's forced settings applied.
    ModelConfig normalized() const;
    void validate() const;
};

/// Time derivative of a state under a model.
struct Rhs {
    VectorField du;
    VectorField db;
};

/// du = P[-u.grad u + b.grad b + d_bg b] + sum nu_i d_i^2 u,
/// db = -u.grad b + b.grad u + d_bg u + sum eta_i d_i^2 b.
Rhs rhs(const State& s, const ModelConfig& c);

/// Reusable stepping kernel: caches the transform engine, the dissipation
/// symbols and the integrating factors for the last step size.
///
/// Lawson-type integrating-factor RK4: the diagonal dissipation is applied
/// through exact exponentials, nonlinear and coupling terms explicitly.
/// Alongside the state it integrates, with the same RK4 weights, the
/// dissipated L^2 energy 2 (sum nu_i ||d_i u||^2 + sum eta_i ||d_i b||^2).
class Integrator {
public:
    Integrator(const Grid& g, const ModelConfig& c);
    ~Integrator();
    Integrator(Integrator&&) noexcept;
    Integrator& operator=(Integrator&&) noexcept;

    const ModelConfig& config() const { return cfg_; }
    const Grid& grid() const { return grid_; }

    Rhs rhs(const State& s);

    /// Advances by dt. Throws BlowUpError on non-finite coefficients or when
    /// ||u||_{H^4} + ||b||_{H^4} exceeds blowup_threshold; UsageError when dt
    /// breaks the advective CFL bound.
    State step(const State& s, double dt);

    /// Dissipated L^2 energy over the most recent step.
    double last_dissipation() const { return last_dissipation_; }

    double blowup_threshold = 1e6;

private:
    struct Impl;
    Grid grid_;
    ModelConfig cfg_;
    std::unique_ptr<Impl> impl_;
    double last_dissipation_ = 0.0;
};

/// One-shot convenience wrapper around Integrator::step.
State step(const State& s, double dt, const ModelConfig& c);

/// Largest dt admitted by the advective CFL estimate
/// cfl * min(dx_i) / max(|u|, |b|, 1).
double cfl_limit(const State& s, const ModelConfig& c);

/// L^2 dissipation rate 2 (sum nu_i ||d_i u||^2 + sum eta_i ||d_i b||^2).
double dissipation_rate(const State& s, const ModelConfig& c);

struct Sample {
    EnergyReport report;
    double max_divergence = 0.0;
    double l2_energy = 0.0;       ///< ||u||^2 + ||b||^2
    double dissipated_l2 = 0.0;   ///< accumulated 2 int (...) since the run start
    long step = 0;
    std::shared_ptr<const State> snapshot;  ///< set when RunOptions::keep_snapshots
};

struct BlowUpRecord {
    double time = 0.0;
    std::string reason;
};

struct RunOptions {
    int sample_every = 1;
    bool keep_snapshots = false;
    SobolevForm form = SobolevForm::multiplier;
    /// Continue accumulating from this report instead of starting fresh.
    std::optional<EnergyReport> resume_from;
    /// Step index of the initial state (non-zero when resuming).
    long first_step = 0;
    /// Time of step 0; step k targets origin + k dt. Defaults to s0.t.
    std::optional<double> time_origin;
    /// Called after every step with the new state and its step index.
    std::function<void(const State&, long)> on_step;
    double blowup_threshold = 1e6;
};

struct RunResult {
    std::vector<Sample> series;
    std::optional<BlowUpRecord> failure;
    State final_state;
};

/// Steps from s0.t to s0.t + duration. A blow-up ends the series early and is
/// recorded in `failure`; it is not thrown. The last step is shortened to land
/// exactly on the end time, which is always sampled.
RunResult run(const State& s0, double duration, double dt, const ModelConfig& c,
              const RunOptions& opts = {});

}  // namespace anisomhd
