#pragma once

#include "anisomhd/harness/config.hpp"

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace anisomhd {

enum class CampaignKind {
    stability_sweep,
    coupling_ablation,
    linear_validation,
    inequality_audit,
    energy_budget,
};

std::string to_string(CampaignKind k);
CampaignKind parse_campaign(const std::string& name);

/// Campaign-only settings, read from the "campaign.*" keys:
///   campaign.output_dir   directory for per-run and aggregated files
///   campaign.workers      concurrent runs (further capped by ANISOMHD_WORKERS)
///   campaign.epsilons     comma list, stability_sweep / energy_budget
///   campaign.samples      samples per variant, inequality_audit
///   campaign.seed         base seed, inequality_audit
///   campaign.audit_n      grid points per axis, inequality_audit
///   campaign.audit_band   band of the random fields, inequality_audit
struct CampaignSettings {
    std::filesystem::path output_dir = "campaign-out";
    int workers = 1;
    std::vector<double> epsilons{1e-3, 1e-2, 1e-1};
    int samples = 100;
    std::uint64_t seed = 1;
    int audit_n = 32;
    int audit_band = 4;
};

CampaignSettings campaign_settings_from(const KeyValues& kv);

/// min(requested, ANISOMHD_WORKERS if set and positive), at least 1.
int effective_workers(int requested);

struct CampaignOutcome {
    std::filesystem::path csv_path;
    std::filesystem::path json_path;
    std::filesystem::path failure_manifest;  ///< empty when every run succeeded
    int runs = 0;
    int failures = 0;
};

/// Runs a campaign. Per-run work executes on a pool of worker threads and
/// results are aggregated in run-index order by the calling thread, so the
/// aggregated files do not depend on scheduling. Failed runs are left out of
/// the CSV and listed in failures.json.
CampaignOutcome run_campaign(CampaignKind kind, const ExperimentConfig& base,
                             const CampaignSettings& settings);

/// Executes job(i) for i in [0, count) on up to `workers` threads and
/// returns the error message of each failed job ("" on success).
std::vector<std::string> run_indexed(int count, int workers, const std::function<void(int)>& job);

}  // namespace anisomhd
