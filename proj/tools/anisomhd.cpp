// Command-line front end. Every config key doubles as a flag:
//   anisomhd run --config base.cfg --time.dt 5e-4 --init.seed=7
#include "anisomhd/errors.hpp"
#include "anisomhd/harness/campaign.hpp"
#include "anisomhd/harness/config.hpp"
#include "anisomhd/harness/experiment.hpp"
#include "anisomhd/inequalities.hpp"
#include "anisomhd/waves.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace anisomhd;

/// Turns leftover "--dotted.key value" / "--dotted.key=value" arguments into
/// assignments layered over the config file.
KeyValues overrides_from(const std::vector<std::string>& extras) {
    KeyValues kv;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const std::string& arg = extras[i];
        if (arg.rfind("--", 0) != 0 || arg.size() == 2) {
            throw ConfigError("unexpected argument '" + arg + "'");
        }
        const std::string body = arg.substr(2);
        if (const auto eq = body.find('='); eq != std::string::npos) {
            kv[body.substr(0, eq)] = body.substr(eq + 1);
        } else if (i + 1 < extras.size()) {
            kv[body] = extras[++i];
        } else {
            throw ConfigError("flag '" + arg + "' needs a value");
        }
    }
    return kv;
}

KeyValues load(const std::string& config_path, const std::vector<std::string>& extras) {
    KeyValues kv = config_path.empty() ? KeyValues{} : read_key_values(config_path);
    for (auto& [k, v] : overrides_from(extras)) kv[k] = v;
    return kv;
}

void print_summary(const ExperimentSummary& s) {
    std::cout << summary_to_json(s);
}

std::array<int, 3> parse_triple(const std::string& text) {
    std::array<int, 3> out{};
    if (std::sscanf(text.c_str(), "%d,%d,%d", &out[0], &out[1], &out[2]) != 3) {
        throw ConfigError("expected three comma-separated integers, got '" + text + "'");
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anisotropic MHD spectral simulator"};
    app.require_subcommand(1);

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "key = value config file");
        sub->allow_extras();
    };

    auto* run_cmd = app.add_subcommand("run", "run one experiment");
    add_config(run_cmd);

    auto* resume_cmd = app.add_subcommand("resume", "continue an experiment from a checkpoint");
    std::string checkpoint;
    add_config(resume_cmd);
    resume_cmd->add_option("--checkpoint", checkpoint, "checkpoint file")->required();

    auto* campaign_cmd = app.add_subcommand("campaign", "run a named campaign");
    std::string campaign_name;
    campaign_cmd->add_option("name", campaign_name,
                             "stability_sweep | coupling_ablation | linear_validation | "
                             "inequality_audit | energy_budget")
        ->required();
    add_config(campaign_cmd);

    auto* ineq_cmd = app.add_subcommand("check-inequalities", "sample the trilinear inequalities");
    std::string variant_name = "triple-111";
    int samples = 100;
    int grid_n = 32;
    std::uint64_t seed = 1;
    int workers = 1;
    int band = 4;
    std::string csv_out;
    bool zero = false;
    ineq_cmd->add_option("--variant", variant_name, "triple-111 | triple-mixed | product-L2 | quadruple");
    ineq_cmd->add_option("--samples", samples)->check(CLI::NonNegativeNumber);
    ineq_cmd->add_option("--n", grid_n, "grid points per axis");
    ineq_cmd->add_option("--seed", seed);
    ineq_cmd->add_option("--band", band, "largest |m_a| of the random fields")->check(CLI::PositiveNumber);
    ineq_cmd->add_option("--workers", workers)->check(CLI::PositiveNumber);
    ineq_cmd->add_option("--csv", csv_out, "write per-sample rows here");
    ineq_cmd->add_flag("--zero", zero, "use zero fields (degenerate case)");

    auto* decay_cmd = app.add_subcommand("decay-map", "tabulate the linear dispersion roots");
    std::string lo = "0,0,0", hi = "4,4,4", decay_out;
    add_config(decay_cmd);
    decay_cmd->add_option("--lo", lo, "lowest wavevector, e.g. 0,0,0");
    decay_cmd->add_option("--hi", hi, "highest wavevector, e.g. 4,4,4");
    decay_cmd->add_option("-o,--output", decay_out, "CSV path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const auto cfg = experiment_config_from(load(config_path, run_cmd->remaining()));
            print_summary(run_experiment(cfg));
        } else if (resume_cmd->parsed()) {
            const auto cfg = experiment_config_from(load(config_path, resume_cmd->remaining()));
            print_summary(resume_experiment(cfg, checkpoint));
        } else if (campaign_cmd->parsed()) {
            const KeyValues kv = load(config_path, campaign_cmd->remaining());
            const auto outcome = run_campaign(parse_campaign(campaign_name), experiment_config_from(kv),
                                              campaign_settings_from(kv));
            std::cout << outcome.csv_path.string() << '\n' << outcome.json_path.string() << '\n';
            if (outcome.failures > 0) {
                std::cerr << outcome.failures << " of " << outcome.runs
                          << " runs failed; see " << outcome.failure_manifest.string() << '\n';
                return 3;
            }
        } else if (ineq_cmd->parsed()) {
            const auto result = constant_sweep(parse_inequality_variant(variant_name), samples,
                                               Grid(grid_n, grid_n, grid_n), seed,
                                               effective_workers(workers), zero, 10, band);
            if (!csv_out.empty()) {
                std::ofstream out(csv_out);
                if (!out) throw IoError("cannot open " + csv_out + " for writing");
                out << sweep_csv_header() << '\n';
                for (const auto& smp : result.samples) out << to_csv_row(smp) << '\n';
            }
            std::cout << "variant=" << variant_name << " samples=" << result.samples.size()
                      << " max_ratio=" << result.max_ratio << '\n';
        } else if (decay_cmd->parsed()) {
            const auto cfg = experiment_config_from(load(config_path, decay_cmd->remaining()));
            const auto rows = decay_map(parse_triple(lo), parse_triple(hi), cfg.model.normalized());
            std::ofstream file;
            if (!decay_out.empty()) {
                file.open(decay_out);
                if (!file) throw IoError("cannot open " + decay_out + " for writing");
            }
            std::ostream& out = decay_out.empty() ? std::cout : file;
            out << decay_csv_header() << '\n';
            for (const auto& r : rows) out << to_csv_row(r) << '\n';
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
