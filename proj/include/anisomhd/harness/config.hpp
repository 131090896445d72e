#pragma once

#include "anisomhd/grid.hpp"
#include "anisomhd/mhd.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace anisomhd {

/// Flat `dotted.key = value` settings. Lines starting with '#' and blank
/// lines are ignored; a later assignment to the same key wins.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text, const std::string& origin = "<string>");
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

enum class InitKind { random_band_limited, named_mode_list };

/// One named initial mode: field 'u' or 'b', integer wavevector,
/// polarisation (projected onto the solenoidal plane) and amplitude of the
/// real cosine it represents.
struct NamedMode {
    char field = 'u';
    std::array<int, 3> m{};
    std::array<double, 3> polarisation{};
    double amplitude = 1.0;
};

struct InitSpec {
    InitKind kind = InitKind::random_band_limited;
    double epsilon = 1e-2;        ///< target ||u0||_{H^4} + ||b0||_{H^4}
    int band = 8;                 ///< max |m_a| of excited modes
    std::uint64_t seed = 1;
    double b_fraction = 0.5;      ///< share of epsilon carried by b (random kind)
    std::vector<NamedMode> modes; ///< named-mode-list kind
};

struct TimeSpec {
    double T = 1.0;
    double dt = 1e-3;
    int sample_every = 1;
};

struct OutputSpec {
    std::filesystem::path series_path = "series.csv";
    std::filesystem::path checkpoint_path;  ///< empty: no checkpoints
    long checkpoint_every = 0;              ///< steps; 0 writes only the final state
    std::filesystem::path summary_path;     ///< empty: series_path + ".summary.json"
};

struct ExperimentConfig {
    Grid grid;
    ModelConfig model;
    InitSpec init;
    TimeSpec time;
    OutputSpec outputs;
    double blowup_threshold = 1e6;

    /// Checks every field-level invariant that does not need the initial
    /// state (epsilon > 0, band fits the dealiased set, cadences positive).
    void validate() const;

    std::filesystem::path summary_path() const;
};

/// Builds a config from defaults overlaid with `kv`. Unknown keys are
/// rejected so typos surface early. Keys starting with "campaign." are
/// ignored here (the campaign driver reads them).
ExperimentConfig experiment_config_from(const KeyValues& kv);

/// Inverse of experiment_config_from for the keys it understands.
KeyValues to_key_values(const ExperimentConfig& cfg);

std::vector<NamedMode> parse_named_modes(const std::string& text);

}  // namespace anisomhd
