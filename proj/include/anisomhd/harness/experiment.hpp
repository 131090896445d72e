#pragma once

#include "anisomhd/harness/config.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace anisomhd {

struct ExperimentSummary {
    double sup_E = 0.0;
    double E0 = 0.0;
    double fitted_C0 = 1.0;
    std::optional<double> blow_up_time;
    std::string blow_up_reason;
    double max_divergence = 0.0;
    double final_t = 0.0;
    long steps = 0;
    std::uint64_t seed_used = 0;
    double l2_initial = 0.0;
    double l2_final = 0.0;
    double dissipated_l2 = 0.0;  ///< covers only the stretch run by this invocation
};

std::string summary_to_json(const ExperimentSummary& s);
ExperimentSummary summary_from_json(const std::string& text);

/// Generates the initial state, integrates to time.T and writes the series
/// CSV, the checkpoints and the summary JSON. A blow-up is recorded in the
/// summary and does not throw. I/O problems raise IoError naming the path.
///
/// A checkpoint path containing "{step}" gets the step index substituted,
/// so every checkpoint is kept; otherwise each write replaces the previous.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

/// Continues an experiment from `checkpoint`: series rows after the
/// checkpoint time are dropped, the energy report is rebuilt from the
/// remaining rows, and the run proceeds to cfg.time.T appending rows.
ExperimentSummary resume_experiment(const ExperimentConfig& cfg,
                                    const std::filesystem::path& checkpoint);

std::filesystem::path checkpoint_file(const ExperimentConfig& cfg, long step);

}  // namespace anisomhd
