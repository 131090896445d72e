#include "anisomhd/harness/config.hpp"

#include "anisomhd/errors.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace anisomhd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, sep)) out.push_back(trim(cell));
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::string s = trim(v);
    // "2pi" / "pi" shorthand for box lengths.
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        const std::string head = trim(s.substr(0, s.size() - 2));
        const double mult = head.empty() ? 1.0 : to_double(key, head);
        return mult * std::numbers::pi;
    }
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(trim(v), &used);
        if (used != trim(v).size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    const std::string s = trim(v);
    if (s == "true" || s == "on" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "off" || s == "0" || s == "no") return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

template <class T, class Conv>
std::array<T, 3> to_triple(const std::string& key, const std::string& v, Conv conv) {
    const auto parts = split(v, ',');
    if (parts.size() == 1) {
        const T x = conv(key, parts[0]);
        return {x, x, x};
    }
    if (parts.size() != 3) throw ConfigError("config: " + key + " expects 1 or 3 values");
    return {conv(key, parts[0]), conv(key, parts[1]), conv(key, parts[2])};
}

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class T>
std::string fmt3(const std::array<T, 3>& a) {
    std::ostringstream out;
    for (int i = 0; i < 3; ++i) {
        if (i) out << ',';
        if constexpr (std::is_floating_point_v<T>) {
            out << fmt(a[i]);
        } else {
            out << a[i];
        }
    }
    return out.str();
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "grid.n",          "grid.length",         "model.nu",           "model.eta",
        "model.coupling",  "model.background_axis", "model.variant",    "model.nonlinear",
        "model.cfl",       "model.blowup_threshold", "init.kind",       "init.epsilon",
        "init.band",       "init.seed",           "init.b_fraction",    "init.modes",
        "time.T",          "time.dt",             "time.sample_every",  "outputs.series_path",
        "outputs.checkpoint_path", "outputs.checkpoint_every", "outputs.summary_path"};
    return keys;
}

}  // namespace

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = trim(s.substr(eq + 1));
    }
    return kv;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str(), path.string());
}

std::string format_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

std::vector<NamedMode> parse_named_modes(const std::string& text) {
    std::vector<NamedMode> modes;
    for (const auto& entry : split(text, ';')) {
        if (entry.empty()) continue;
        const auto parts = split(entry, ':');
        if (parts.size() != 4 || (parts[0] != "u" && parts[0] != "b")) {
            throw ConfigError("init.modes: expected 'u|b:m1,m2,m3:p1,p2,p3:amplitude', got '" +
                              entry + "'");
        }
        NamedMode m;
        m.field = parts[0][0];
        m.m = to_triple<int>("init.modes", parts[1],
                             [](const std::string& k, const std::string& v) {
                                 return static_cast<int>(to_long(k, v));
                             });
        m.polarisation = to_triple<double>("init.modes", parts[2], to_double);
        m.amplitude = to_double("init.modes", parts[3]);
        modes.push_back(m);
    }
    return modes;
}

void ExperimentConfig::validate() const {
    grid.validate();
    model.validate();
    if (!(init.epsilon > 0.0)) throw ConfigError("init.epsilon must be positive");
    if (init.kind == InitKind::random_band_limited) {
        if (init.band < 1) throw ConfigError("init.band must be >= 1");
        for (int a = 0; a < 3; ++a) {
            if (3 * init.band >= grid.n[a]) {
                throw ConfigError("init.band = " + std::to_string(init.band) +
                                  " leaves the dealiased set of a " + std::to_string(grid.n[a]) +
                                  "-mode axis (need 3*band < n)");
            }
        }
        if (!(init.b_fraction >= 0.0 && init.b_fraction <= 1.0)) {
            throw ConfigError("init.b_fraction must lie in [0, 1]");
        }
    } else if (init.modes.empty()) {
        throw ConfigError("init.modes is empty for a named-mode-list initial state");
    }
    if (!(time.T >= 0.0)) throw ConfigError("time.T must be non-negative");
    if (!(time.dt > 0.0)) throw ConfigError("time.dt must be positive");
    if (time.sample_every < 1) throw ConfigError("time.sample_every must be >= 1");
    if (outputs.checkpoint_every < 0) throw ConfigError("outputs.checkpoint_every must be >= 0");
    if (outputs.checkpoint_every > 0 && outputs.checkpoint_every % time.sample_every != 0) {
        throw ConfigError("outputs.checkpoint_every must be a multiple of time.sample_every");
    }
    if (!(blowup_threshold > 0.0)) throw ConfigError("model.blowup_threshold must be positive");
}

std::filesystem::path ExperimentConfig::summary_path() const {
    if (!outputs.summary_path.empty()) return outputs.summary_path;
    return outputs.series_path.string() + ".summary.json";
}

ExperimentConfig experiment_config_from(const KeyValues& kv) {
    ExperimentConfig c;
    for (const auto& [key, value] : kv) {
        if (key.rfind("campaign.", 0) == 0) continue;
        if (!known_keys().contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    }
    auto get = [&](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto to_int = [](const std::string& k, const std::string& v) {
        return static_cast<int>(to_long(k, v));
    };
    if (auto v = get("grid.n")) c.grid.n = to_triple<int>("grid.n", *v, to_int);
    if (auto v = get("grid.length")) c.grid.length = to_triple<double>("grid.length", *v, to_double);
    if (auto v = get("model.nu")) c.model.nu = to_triple<double>("model.nu", *v, to_double);
    if (auto v = get("model.eta")) c.model.eta = to_triple<double>("model.eta", *v, to_double);
    if (auto v = get("model.coupling")) c.model.coupling = to_bool("model.coupling", *v);
    if (auto v = get("model.background_axis")) {
        c.model.background_axis = to_int("model.background_axis", *v);
    }
    if (auto v = get("model.variant")) c.model.variant = parse_variant(trim(*v));
    if (auto v = get("model.nonlinear")) c.model.nonlinear = to_bool("model.nonlinear", *v);
    if (auto v = get("model.cfl")) c.model.cfl = to_double("model.cfl", *v);
    if (auto v = get("model.blowup_threshold")) {
        c.blowup_threshold = to_double("model.blowup_threshold", *v);
    }
    if (auto v = get("init.kind")) {
        if (*v == "random-band-limited") {
            c.init.kind = InitKind::random_band_limited;
        } else if (*v == "named-mode-list") {
            c.init.kind = InitKind::named_mode_list;
        } else {
            throw ConfigError("init.kind must be random-band-limited or named-mode-list");
        }
    }
    if (auto v = get("init.epsilon")) c.init.epsilon = to_double("init.epsilon", *v);
    if (auto v = get("init.band")) c.init.band = to_int("init.band", *v);
    if (auto v = get("init.seed")) {
        const long s = to_long("init.seed", *v);
        if (s < 0) throw ConfigError("init.seed must be non-negative");
        c.init.seed = static_cast<std::uint64_t>(s);
    }
    if (auto v = get("init.b_fraction")) c.init.b_fraction = to_double("init.b_fraction", *v);
    if (auto v = get("init.modes")) c.init.modes = parse_named_modes(*v);
    if (auto v = get("time.T")) c.time.T = to_double("time.T", *v);
    if (auto v = get("time.dt")) c.time.dt = to_double("time.dt", *v);
    if (auto v = get("time.sample_every")) c.time.sample_every = to_int("time.sample_every", *v);
    if (auto v = get("outputs.series_path")) c.outputs.series_path = *v;
    if (auto v = get("outputs.checkpoint_path")) c.outputs.checkpoint_path = *v;
    if (auto v = get("outputs.checkpoint_every")) {
        c.outputs.checkpoint_every = to_long("outputs.checkpoint_every", *v);
    }
    if (auto v = get("outputs.summary_path")) c.outputs.summary_path = *v;
    return c;
}

KeyValues to_key_values(const ExperimentConfig& c) {
    KeyValues kv;
    kv["grid.n"] = fmt3(c.grid.n);
    kv["grid.length"] = fmt3(c.grid.length);
    kv["model.nu"] = fmt3(c.model.nu);
    kv["model.eta"] = fmt3(c.model.eta);
    kv["model.coupling"] = c.model.coupling ? "true" : "false";
    kv["model.background_axis"] = std::to_string(c.model.background_axis);
    kv["model.variant"] = to_string(c.model.variant);
    kv["model.nonlinear"] = c.model.nonlinear ? "true" : "false";
    kv["model.cfl"] = fmt(c.model.cfl);
    kv["model.blowup_threshold"] = fmt(c.blowup_threshold);
    kv["init.kind"] = c.init.kind == InitKind::random_band_limited ? "random-band-limited"
                                                                    : "named-mode-list";
    kv["init.epsilon"] = fmt(c.init.epsilon);
    kv["init.band"] = std::to_string(c.init.band);
    kv["init.seed"] = std::to_string(c.init.seed);
    kv["init.b_fraction"] = fmt(c.init.b_fraction);
    if (!c.init.modes.empty()) {
        std::string modes;
        for (const auto& m : c.init.modes) {
            if (!modes.empty()) modes += "; ";
            modes += std::string(1, m.field) + ":" + fmt3(m.m) + ":" + fmt3(m.polarisation) + ":" +
                     fmt(m.amplitude);
        }
        kv["init.modes"] = modes;
    }
    kv["time.T"] = fmt(c.time.T);
    kv["time.dt"] = fmt(c.time.dt);
    kv["time.sample_every"] = std::to_string(c.time.sample_every);
    kv["outputs.series_path"] = c.outputs.series_path.string();
    if (!c.outputs.checkpoint_path.empty()) {
        kv["outputs.checkpoint_path"] = c.outputs.checkpoint_path.string();
    }
    kv["outputs.checkpoint_every"] = std::to_string(c.outputs.checkpoint_every);
    if (!c.outputs.summary_path.empty()) kv["outputs.summary_path"] = c.outputs.summary_path.string();
    return kv;
}

}  // namespace anisomhd
