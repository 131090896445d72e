#include "anisomhd/harness/campaign.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/harness/experiment.hpp"
#include "anisomhd/inequalities.hpp"
#include "anisomhd/waves.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

namespace anisomhd {

using nlohmann::json;

std::string to_string(CampaignKind k) {
    switch (k) {
        case CampaignKind::stability_sweep: return "stability_sweep";
        case CampaignKind::coupling_ablation: return "coupling_ablation";
        case CampaignKind::linear_validation: return "linear_validation";
        case CampaignKind::inequality_audit: return "inequality_audit";
        case CampaignKind::energy_budget: return "energy_budget";
    }
    return "unknown";
}

CampaignKind parse_campaign(const std::string& name) {
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    for (auto k : {CampaignKind::stability_sweep, CampaignKind::coupling_ablation,
                   CampaignKind::linear_validation, CampaignKind::inequality_audit,
                   CampaignKind::energy_budget}) {
        if (to_string(k) == key) return k;
    }
    throw ConfigError("unknown campaign '" + name +
                      "' (expected stability_sweep, coupling_ablation, linear_validation, "
                      "inequality_audit or energy_budget)");
}

CampaignSettings campaign_settings_from(const KeyValues& kv) {
    CampaignSettings s;
    auto number = [](const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
        }
    };
    for (const auto& [key, value] : kv) {
        if (key.rfind("campaign.", 0) != 0) continue;
        if (key == "campaign.output_dir") {
            s.output_dir = value;
        } else if (key == "campaign.workers") {
            s.workers = static_cast<int>(number(key, value));
        } else if (key == "campaign.epsilons") {
            s.epsilons.clear();
            std::istringstream in(value);
            std::string cell;
            while (std::getline(in, cell, ',')) {
                cell.erase(0, cell.find_first_not_of(" \t"));
                cell.erase(cell.find_last_not_of(" \t") + 1);
                if (!cell.empty()) s.epsilons.push_back(number(key, cell));
            }
        } else if (key == "campaign.samples") {
            s.samples = static_cast<int>(number(key, value));
        } else if (key == "campaign.seed") {
            s.seed = static_cast<std::uint64_t>(number(key, value));
        } else if (key == "campaign.audit_n") {
            s.audit_n = static_cast<int>(number(key, value));
        } else if (key == "campaign.audit_band") {
            s.audit_band = static_cast<int>(number(key, value));
        } else if (key != "campaign.name") {
            throw ConfigError("config: unknown key '" + key + "'");
        }
    }
    if (s.workers < 1) throw ConfigError("campaign.workers must be >= 1");
    if (s.samples < 0) throw ConfigError("campaign.samples must be >= 0");
    for (double e : s.epsilons)
        if (!(e > 0.0)) throw ConfigError("campaign.epsilons must be positive");
    return s;
}

int effective_workers(int requested) {
    int w = std::max(1, requested);
    if (const char* env = std::getenv("ANISOMHD_WORKERS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && cap > 0) w = std::min<long>(w, cap);
    }
    return w;
}

std::vector<std::string> run_indexed(int count, int workers, const std::function<void(int)>& job) {
    std::vector<std::string> errors(static_cast<std::size_t>(std::max(0, count)));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(i)] = e.what();
                if (errors[static_cast<std::size_t>(i)].empty()) errors[static_cast<std::size_t>(i)] = "error";
            }
        }
    };
    const int threads = std::min(std::max(1, workers), std::max(1, count));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return errors;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_opt(const std::optional<double>& x) { return x ? fmt(*x) : std::string(); }

json opt_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

class Writer {
public:
    Writer(CampaignKind kind, const CampaignSettings& s)
        : dir_(s.output_dir), name_(to_string(kind)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
    }

    std::filesystem::path run_dir(int i) const { return dir_ / ("run-" + std::to_string(i)); }

    CampaignOutcome finish(const std::string& header, const std::vector<std::string>& rows,
                           json summary, const std::vector<std::string>& errors,
                           const std::vector<std::string>& labels) {
        CampaignOutcome out;
        out.csv_path = dir_ / (name_ + ".csv");
        out.json_path = dir_ / (name_ + ".json");
        out.runs = static_cast<int>(errors.size());
        json failures = json::array();
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (errors[i].empty()) continue;
            failures.push_back({{"run_index", i}, {"label", labels[i]}, {"error", errors[i]}});
            ++out.failures;
        }
        std::ostringstream csv;
        csv << header << '\n';
        for (const auto& r : rows) csv << r << '\n';
        write(out.csv_path, csv.str());
        summary["campaign"] = name_;
        summary["runs"] = out.runs;
        summary["failures"] = out.failures;
        write(out.json_path, summary.dump(2) + "\n");
        if (out.failures > 0) {
            out.failure_manifest = dir_ / "failures.json";
            write(out.failure_manifest, failures.dump(2) + "\n");
        } else {
            std::error_code ec;
            std::filesystem::remove(dir_ / "failures.json", ec);
        }
        return out;
    }

private:
    static void write(const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::trunc);
        if (!f) throw IoError("cannot open " + p.string() + " for writing");
        f << text;
        if (!f) throw IoError("write failed: " + p.string());
    }

    std::filesystem::path dir_;
    std::string name_;
};

ExperimentConfig per_run(const ExperimentConfig& base, const std::filesystem::path& dir) {
    ExperimentConfig c = base;
    c.outputs.series_path = dir / "series.csv";
    c.outputs.summary_path = dir / "summary.json";
    if (!base.outputs.checkpoint_path.empty()) {
        c.outputs.checkpoint_path = dir / base.outputs.checkpoint_path.filename();
    }
    return c;
}

CampaignOutcome stability_or_budget(CampaignKind kind, const ExperimentConfig& base,
                                    const CampaignSettings& s) {
    Writer w(kind, s);
    const int count = static_cast<int>(s.epsilons.size());
    std::vector<std::optional<ExperimentSummary>> results(s.epsilons.size());
    std::vector<std::string> labels;
    for (double e : s.epsilons) labels.push_back("epsilon=" + fmt(e));
    const auto errors = run_indexed(count, effective_workers(s.workers), [&](int i) {
        ExperimentConfig c = per_run(base, w.run_dir(i));
        c.init.epsilon = s.epsilons[static_cast<std::size_t>(i)];
        results[static_cast<std::size_t>(i)] = run_experiment(c);
    });

    std::vector<std::string> rows;
    json runs = json::array();
    if (kind == CampaignKind::stability_sweep) {
        // sup_E / E0 should not decrease as epsilon grows; a violation is a
        // finding to flag, not a failure.
        json violations = json::array();
        std::optional<std::pair<double, double>> prev;
        for (int i = 0; i < count; ++i) {
            const auto& r = results[static_cast<std::size_t>(i)];
            if (!r) continue;
            const double eps = s.epsilons[static_cast<std::size_t>(i)];
            const double ratio = r->E0 > 0.0 ? r->sup_E / r->E0 : INFINITY;
            rows.push_back(std::to_string(i) + "," + fmt(eps) + "," + fmt(r->E0) + "," +
                           fmt(r->sup_E) + "," + fmt(ratio) + "," + fmt(r->fitted_C0) + "," +
                           fmt_opt(r->blow_up_time) + "," + fmt(r->max_divergence));
            runs.push_back({{"run_index", i}, {"epsilon", eps}, {"E0", r->E0}, {"sup_E", r->sup_E},
                            {"ratio", finite_or_null(ratio)}, {"fitted_C0", finite_or_null(r->fitted_C0)},
                            {"blow_up_time", opt_json(r->blow_up_time)}});
            if (prev && eps > prev->first && ratio < prev->second) {
                violations.push_back({{"epsilon", eps}, {"ratio", ratio}, {"previous_ratio", prev->second}});
            }
            prev = std::make_pair(eps, ratio);
        }
        json summary = {{"runs_detail", runs}, {"monotone", violations.empty()}, {"violations", violations}};
        return w.finish("run_index,epsilon,E0,sup_E,sup_over_E0,fitted_C0,blow_up_time,max_divergence",
                        rows, summary, errors, labels);
    }

    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        const auto& r = results[static_cast<std::size_t>(i)];
        if (!r) continue;
        const double eps = s.epsilons[static_cast<std::size_t>(i)];
        const double balance = r->l2_initial > 0.0
            ? (r->l2_final + r->dissipated_l2 - r->l2_initial) / r->l2_initial
            : 0.0;
        worst = std::max(worst, std::abs(balance));
        rows.push_back(std::to_string(i) + "," + fmt(eps) + "," + fmt(r->l2_initial) + "," +
                       fmt(r->l2_final) + "," + fmt(r->dissipated_l2) + "," + fmt(balance) + "," +
                       fmt(r->E0) + "," + fmt(r->sup_E) + "," + fmt(r->fitted_C0));
        runs.push_back({{"run_index", i}, {"epsilon", eps}, {"relative_balance", balance},
                        {"sup_E_over_E0", r->E0 > 0.0 ? r->sup_E / r->E0 : 0.0}});
    }
    json summary = {{"runs_detail", runs}, {"max_relative_balance", worst}};
    return w.finish("run_index,epsilon,l2_initial,l2_final,dissipated_l2,relative_balance,E0,sup_E,fitted_C0",
                    rows, summary, errors, labels);
}

CampaignOutcome coupling_ablation(const ExperimentConfig& base, const CampaignSettings& s) {
    Writer w(CampaignKind::coupling_ablation, s);
    struct Arm {
        std::string label;
        Variant variant;
        bool coupling;
    };
    const std::vector<Arm> arms{{"coupled", Variant::perturbation, true},
                                {"navier-stokes-only", Variant::navier_stokes_only, false}};
    std::vector<std::optional<ExperimentSummary>> results(arms.size());
    std::vector<std::string> labels;
    for (const auto& a : arms) labels.push_back(a.label);
    const auto errors = run_indexed(static_cast<int>(arms.size()), effective_workers(s.workers), [&](int i) {
        const Arm& a = arms[static_cast<std::size_t>(i)];
        ExperimentConfig c = per_run(base, w.run_dir(i));
        c.model.variant = a.variant;
        c.model.coupling = a.coupling;
        results[static_cast<std::size_t>(i)] = run_experiment(c);
    });
    std::vector<std::string> rows;
    json runs = json::array();
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const auto& r = results[i];
        if (!r) continue;
        rows.push_back(std::to_string(i) + "," + arms[i].label + "," + fmt(r->E0) + "," + fmt(r->sup_E) + "," +
                       fmt(r->fitted_C0) + "," + fmt_opt(r->blow_up_time) + "," + fmt(r->max_divergence));
        runs.push_back({{"label", arms[i].label}, {"E0", r->E0}, {"sup_E", r->sup_E},
                        {"fitted_C0", finite_or_null(r->fitted_C0)}, {"blow_up_time", opt_json(r->blow_up_time)}});
    }
    return w.finish("run_index,label,E0,sup_E,fitted_C0,blow_up_time,max_divergence", rows,
                    json{{"runs_detail", runs}}, errors, labels);
}

CampaignOutcome linear_validation(const ExperimentConfig& base, const CampaignSettings& s) {
    Writer w(CampaignKind::linear_validation, s);
    const std::vector<std::array<int, 3>> modes{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {0, 1, 1}, {0, 0, 1}};
    ModelConfig model = base.model;
    model.variant = Variant::perturbation;
    const double T = base.time.T;
    const double dt = base.time.dt;
    std::vector<double> errs(modes.size(), 0.0);
    std::vector<std::string> labels;
    for (const auto& m : modes) labels.push_back(std::to_string(m[0]) + "," + std::to_string(m[1]) + "," + std::to_string(m[2]));
    const auto errors = run_indexed(static_cast<int>(modes.size()), effective_workers(s.workers), [&](int i) {
        const auto v = validate_simulator_linear({modes[static_cast<std::size_t>(i)]}, T, dt, model);
        errs[static_cast<std::size_t>(i)] = v.max_relative_error;
    });
    std::vector<std::string> rows;
    double worst = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (!errors[i].empty()) continue;
        worst = std::max(worst, errs[i]);
        rows.push_back(labels[i] + "," + fmt(errs[i]));
    }
    json summary = {{"T", T}, {"dt", dt}, {"max_error", worst}, {"within_1e-8", worst <= 1e-8}};
    return w.finish("k1,k2,k3,max_relative_error", rows, summary, errors, labels);
}

CampaignOutcome inequality_audit(const ExperimentConfig&, const CampaignSettings& s) {
    Writer w(CampaignKind::inequality_audit, s);
    const std::vector<InequalityVariant> variants{InequalityVariant::triple_111, InequalityVariant::triple_mixed,
                                                  InequalityVariant::product_l2, InequalityVariant::quadruple};
    const Grid g(s.audit_n, s.audit_n, s.audit_n);
    std::vector<SweepResult> results(variants.size());
    std::vector<std::string> labels;
    for (auto v : variants) labels.push_back(to_string(v));
    // Parallelism lives inside each sweep; variants run one after another.
    std::vector<std::string> errors(variants.size());
    for (std::size_t i = 0; i < variants.size(); ++i) {
        try {
            results[i] = constant_sweep(variants[i], s.samples, g, s.seed, effective_workers(s.workers), false, 10,
                                        s.audit_band);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    }
    std::vector<std::string> rows;
    json per_variant = json::object();
    for (std::size_t i = 0; i < variants.size(); ++i) {
        if (!errors[i].empty()) continue;
        for (const auto& smp : results[i].samples) rows.push_back(labels[i] + "," + to_csv_row(smp));
        per_variant[labels[i]] = {{"samples", results[i].samples.size()},
                                  {"max_ratio", finite_or_null(results[i].max_ratio)},
                                  {"histogram", results[i].histogram}};
    }
    json summary = {{"grid_n", s.audit_n}, {"band", s.audit_band}, {"samples_per_variant", s.samples}, {"variants", per_variant}};
    return w.finish("variant," + sweep_csv_header(), rows, summary, errors, labels);
}

}  // namespace

CampaignOutcome run_campaign(CampaignKind kind, const ExperimentConfig& base,
                             const CampaignSettings& settings) {
    switch (kind) {
        case CampaignKind::stability_sweep:
        case CampaignKind::energy_budget: return stability_or_budget(kind, base, settings);
        case CampaignKind::coupling_ablation: return coupling_ablation(base, settings);
        case CampaignKind::linear_validation: return linear_validation(base, settings);
        case CampaignKind::inequality_audit: return inequality_audit(base, settings);
    }
    throw UsageError("run_campaign: unhandled campaign kind");
}

}  // namespace anisomhd
