#include "anisomhd/harness/experiment.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/harness/checkpoint.hpp"
#include "anisomhd/harness/initial.hpp"
#include "anisomhd/spectral.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace anisomhd {

using nlohmann::json;

std::string summary_to_json(const ExperimentSummary& s) {
    json j;
    j["sup_E"] = s.sup_E;
    j["E0"] = s.E0;
    j["fitted_C0"] = std::isfinite(s.fitted_C0) ? json(s.fitted_C0) : json(nullptr);
    j["blow_up_time"] = s.blow_up_time ? json(*s.blow_up_time) : json(nullptr);
    if (s.blow_up_time) j["blow_up_reason"] = s.blow_up_reason;
    j["max_divergence"] = s.max_divergence;
    j["final_t"] = s.final_t;
    j["steps"] = s.steps;
    j["seed_used"] = s.seed_used;
    j["l2_initial"] = s.l2_initial;
    j["l2_final"] = s.l2_final;
    j["dissipated_l2"] = s.dissipated_l2;
    return j.dump(2) + "\n";
}

ExperimentSummary summary_from_json(const std::string& text) {
    const json j = json::parse(text);
    ExperimentSummary s;
    s.sup_E = j.at("sup_E").get<double>();
    s.E0 = j.at("E0").get<double>();
    s.fitted_C0 = j.at("fitted_C0").is_null() ? INFINITY : j.at("fitted_C0").get<double>();
    if (!j.at("blow_up_time").is_null()) {
        s.blow_up_time = j.at("blow_up_time").get<double>();
        s.blow_up_reason = j.value("blow_up_reason", "");
    }
    s.max_divergence = j.at("max_divergence").get<double>();
    s.final_t = j.value("final_t", 0.0);
    s.steps = j.value("steps", 0L);
    s.seed_used = j.value("seed_used", std::uint64_t{0});
    s.l2_initial = j.value("l2_initial", 0.0);
    s.l2_final = j.value("l2_final", 0.0);
    s.dissipated_l2 = j.value("dissipated_l2", 0.0);
    return s;
}

std::filesystem::path checkpoint_file(const ExperimentConfig& cfg, long step) {
    std::string p = cfg.outputs.checkpoint_path.string();
    const auto at = p.find("{step}");
    if (at != std::string::npos) p.replace(at, 6, std::to_string(step));
    return p;
}

namespace {

void ensure_parent(const std::filesystem::path& p) {
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
    }
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    ensure_parent(p);
    std::ofstream out(p, std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + p.string());
}

std::vector<EnergyReport> read_series(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open series " + p.string());
    std::string line;
    if (!std::getline(in, line) || line != energy_csv_header()) {
        throw IoError(p.string() + ": missing or unexpected CSV header");
    }
    std::vector<EnergyReport> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            rows.push_back(parse_csv_row(line));
        } catch (const std::exception& e) {
            throw IoError(p.string() + ": " + e.what());
        }
    }
    return rows;
}

RunOptions run_options(const ExperimentConfig& cfg, long first_step) {
    RunOptions o;
    o.sample_every = cfg.time.sample_every;
    o.first_step = first_step;
    o.time_origin = 0.0;
    o.blowup_threshold = cfg.blowup_threshold;
    if (!cfg.outputs.checkpoint_path.empty() && cfg.outputs.checkpoint_every > 0) {
        const long every = cfg.outputs.checkpoint_every;
        o.on_step = [&cfg, every](const State& s, long step) {
            if (step % every == 0) {
                const auto path = checkpoint_file(cfg, step);
                ensure_parent(path);
                write_checkpoint(path, s);
            }
        };
    }
    return o;
}

double series_C0(const std::vector<double>& energies) {
    if (energies.empty() || !(energies.front() > 0.0)) return 1.0;
    for (double e : energies)
        if (!std::isfinite(e)) return INFINITY;
    return fit_bootstrap_constant(energies);
}

/// Writes rows and the final checkpoint, then fills in the summary fields
/// derived from the complete series.
ExperimentSummary finish(const ExperimentConfig& cfg, const RunResult& rr,
                         const std::vector<EnergyReport>& earlier, double prior_divergence,
                         std::ios::openmode mode) {
    const auto& series_path = cfg.outputs.series_path;
    ensure_parent(series_path);
    {
        std::ofstream out(series_path, mode);
        if (!out) throw IoError("cannot open series " + series_path.string() + " for writing");
        if (!(mode & std::ios::app)) out << energy_csv_header() << '\n';
        // When appending, the first sample repeats the checkpoint row.
        const std::size_t skip = (mode & std::ios::app) ? 1 : 0;
        for (std::size_t i = skip; i < rr.series.size(); ++i) out << to_csv_row(rr.series[i].report) << '\n';
        if (!out) throw IoError("write failed: " + series_path.string());
    }

    const Sample& last = rr.series.back();
    if (!cfg.outputs.checkpoint_path.empty()) {
        const auto path = checkpoint_file(cfg, last.step);
        ensure_parent(path);
        write_checkpoint(path, rr.final_state);
    }

    std::vector<double> energies;
    for (const auto& r : earlier) energies.push_back(r.e);
    for (std::size_t i = earlier.empty() ? 0 : 1; i < rr.series.size(); ++i) {
        energies.push_back(rr.series[i].report.e);
    }

    ExperimentSummary s;
    s.E0 = energies.front();
    s.sup_E = *std::max_element(energies.begin(), energies.end());
    s.fitted_C0 = series_C0(energies);
    if (rr.failure) {
        s.blow_up_time = rr.failure->time;
        s.blow_up_reason = rr.failure->reason;
    }
    s.max_divergence = prior_divergence;
    for (const auto& smp : rr.series) s.max_divergence = std::max(s.max_divergence, smp.max_divergence);
    s.final_t = last.report.t;
    s.steps = last.step;
    s.l2_initial = rr.series.front().l2_energy;
    s.l2_final = last.l2_energy;
    s.dissipated_l2 = last.dissipated_l2;
    return s;
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    GeneratedInitial init = generate_initial(cfg.init, cfg.grid);
    const ModelConfig model = cfg.model.normalized();
    if (model.variant == Variant::full_b) {
        // b carries the total field: add the unit background as its mean.
        init.state.b[model.background_axis - 1].at_mode({0, 0, 0}) += 1.0;
    }
    if (cfg.time.T > 0.0) {
        const double limit = cfl_limit(init.state, model);
        if (cfg.time.dt > limit) {
            throw ConfigError("time.dt = " + std::to_string(cfg.time.dt) +
                              " exceeds the CFL limit " + std::to_string(limit) + " at t = 0");
        }
    }
    const RunResult rr = run(init.state, cfg.time.T, cfg.time.dt, model, run_options(cfg, 0));
    ExperimentSummary s = finish(cfg, rr, {}, 0.0, std::ios::trunc);
    s.seed_used = init.seed_used;
    write_text(cfg.summary_path(), summary_to_json(s));
    return s;
}

ExperimentSummary resume_experiment(const ExperimentConfig& cfg,
                                    const std::filesystem::path& checkpoint) {
    cfg.validate();
    const State start = read_checkpoint(checkpoint);
    if (!(start.grid() == cfg.grid)) {
        throw ConfigError("checkpoint " + checkpoint.string() + " was written on a different grid");
    }
    const ModelConfig model = cfg.model.normalized();
    std::vector<EnergyReport> rows = read_series(cfg.outputs.series_path);

    // Keep rows up to the checkpoint time; the checkpoint must coincide with one.
    const double tol = 1e-9 * std::max(1.0, std::abs(start.t));
    auto match = std::find_if(rows.begin(), rows.end(),
                              [&](const EnergyReport& r) { return std::abs(r.t - start.t) <= tol; });
    if (match == rows.end()) {
        throw IoError(cfg.outputs.series_path.string() + ": no row at checkpoint time " +
                      std::to_string(start.t));
    }
    rows.erase(match + 1, rows.end());
    EnergyReport report = rows.back();
    report.form = SobolevForm::multiplier;
    report.sup_h4 = 0.0;
    for (const auto& r : rows) report.sup_h4 = std::max(report.sup_h4, r.h4_u + r.h4_b);
    report.t = start.t;

    double prior_divergence = 0.0;
    if (std::ifstream prev(cfg.summary_path()); prev) {
        std::stringstream buf;
        buf << prev.rdbuf();
        try {
            prior_divergence = summary_from_json(buf.str()).max_divergence;
        } catch (const std::exception&) {
            prior_divergence = 0.0;
        }
    }

    {
        // Rewrite the truncated series, then append the continuation.
        std::ostringstream text;
        text << energy_csv_header() << '\n';
        for (const auto& r : rows) text << to_csv_row(r) << '\n';
        write_text(cfg.outputs.series_path, text.str());
    }

    const long first_step = std::lround(start.t / cfg.time.dt);
    RunOptions opts = run_options(cfg, first_step);
    opts.resume_from = report;
    const double remaining = std::max(0.0, cfg.time.T - start.t);
    const RunResult rr = run(start, remaining, cfg.time.dt, model, opts);
    ExperimentSummary s = finish(cfg, rr, rows, prior_divergence, std::ios::app);
    s.seed_used = cfg.init.seed;
    write_text(cfg.summary_path(), summary_to_json(s));
    return s;
}

}  // namespace anisomhd
