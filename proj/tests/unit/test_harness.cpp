#include "support.hpp"

#include "anisomhd/errors.hpp"
#include "anisomhd/energy.hpp"
#include "anisomhd/harness/campaign.hpp"
#include "anisomhd/harness/checkpoint.hpp"
#include "anisomhd/harness/config.hpp"
#include "anisomhd/harness/experiment.hpp"
#include "anisomhd/harness/initial.hpp"
#include "anisomhd/spectral.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

using namespace anisomhd;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("anisomhd-unit-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

ExperimentConfig small_experiment(const fs::path& dir) {
    ExperimentConfig c = experiment_config_from(parse_key_values(R"(
        grid.n = 16
        init.band = 4
        init.epsilon = 1e-2
        time.T = 0.04
        time.dt = 0.01
        time.sample_every = 1
    )"));
    c.outputs.series_path = dir / "series.csv";
    return c;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("key-value parsing and overrides") {
    const KeyValues kv = parse_key_values("# comment\n grid.n = 16 \n\ntime.dt=1e-3\ntime.dt = 2e-3\n");
    CHECK(kv.at("grid.n") == "16");
    CHECK(kv.at("time.dt") == "2e-3");
    CHECK_THROWS_AS(parse_key_values("no equals sign"), ConfigError);
    const ExperimentConfig c = experiment_config_from(kv);
    CHECK(c.grid.n == std::array<int, 3>{16, 16, 16});
    CHECK(c.time.dt == 2e-3);
    CHECK_THROWS_AS(experiment_config_from(parse_key_values("grid.nn = 4")), ConfigError);
    CHECK_NOTHROW(experiment_config_from(parse_key_values("campaign.workers = 2")));
}

TEST_CASE("config values: triples, 2pi lengths, variants") {
    const ExperimentConfig c = experiment_config_from(parse_key_values(
        "grid.n = 8, 16, 32\ngrid.length = 2pi, 1, 4pi\nmodel.variant = wu-zhu\nmodel.nonlinear = false\n"));
    CHECK(c.grid.n == std::array<int, 3>{8, 16, 32});
    CHECK(c.grid.length[0] == doctest::Approx(2 * std::numbers::pi));
    CHECK(c.grid.length[2] == doctest::Approx(4 * std::numbers::pi));
    CHECK(c.model.variant == Variant::wu_zhu);
    CHECK_FALSE(c.model.nonlinear);
    CHECK_THROWS_AS(experiment_config_from(parse_key_values("time.dt = fast")), ConfigError);
}

TEST_CASE("config round-trips through key-values") {
    ExperimentConfig c = experiment_config_from(parse_key_values(
        "grid.n = 16\ninit.kind = named-mode-list\ninit.modes = u:1,0,0:0,1,0:1.0; b:0,1,1:1,0,0:0.5\n"));
    const ExperimentConfig back = experiment_config_from(to_key_values(c));
    CHECK(format_key_values(to_key_values(back)) == format_key_values(to_key_values(c)));
    REQUIRE(back.init.modes.size() == 2);
    CHECK(back.init.modes[1].field == 'b');
    CHECK(back.init.modes[1].m == std::array<int, 3>{0, 1, 1});
}

TEST_CASE("invariants of the experiment config") {
    ExperimentConfig c;
    c.init.epsilon = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.init.epsilon = 1e-2;
    c.grid = Grid(24, 24, 24);
    c.init.band = 8;  // 3 * 8 = 24 is not < 24
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.grid = Grid(32, 32, 32);
    CHECK_NOTHROW(c.validate());
    c.outputs.checkpoint_every = 5;
    c.time.sample_every = 2;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("initial data: size, divergence, determinism, grid independence") {
    InitSpec spec;
    spec.band = 4;
    spec.seed = 17;
    const Grid g16(16, 16, 16), g24(24, 24, 24);
    const GeneratedInitial a = generate_initial(spec, g16);
    CHECK(rel_diff(h4_size(a.state), spec.epsilon) < 1e-12);
    CHECK(max_relative_divergence(a.state) < 1e-12);
    CHECK(hermitian_defect(a.state.u) < 1e-15);
    const GeneratedInitial b = generate_initial(spec, g16);
    CHECK(a.state.u == b.state.u);
    const GeneratedInitial c = generate_initial(spec, g24);
    CHECK(c.state.u[2].at_mode({1, -3, 2}) == a.state.u[2].at_mode({1, -3, 2}));
    spec.epsilon = 0.0;
    CHECK_THROWS_AS(generate_initial(spec, g16), ConfigError);
    // b_fraction splits the size between the fields
    InitSpec split;
    split.band = 4;
    split.b_fraction = 0.25;
    const State s = generate_initial(split, g16).state;
    const double nb = std::sqrt(sobolev_norm_sq(s.b, {4, SobolevForm::multiplier}));
    CHECK(rel_diff(nb, 0.25 * split.epsilon) < 1e-12);
}

TEST_CASE("named-mode initial data") {
    InitSpec spec;
    spec.kind = InitKind::named_mode_list;
    spec.modes = parse_named_modes("u:1,0,0:1,1,0:1.0");
    const State s = generate_initial(spec, Grid(8, 8, 8)).state;
    // the x1 part of the polarisation is projected away
    CHECK(std::abs(s.u[0].at_mode({1, 0, 0})) < 1e-18);
    CHECK(std::abs(s.u[1].at_mode({1, 0, 0})) > 0.0);
    CHECK(rel_diff(h4_size(s), spec.epsilon) < 1e-12);
    spec.modes = parse_named_modes("u:1,0,0:1,0,0:1.0");
    CHECK_THROWS_AS(generate_initial(spec, Grid(8, 8, 8)), ConfigError);
}

TEST_CASE("checkpoint round trip is bit-exact and the layout is fixed") {
    const fs::path dir = scratch_dir("ckpt");
    const Grid g({8, 6, 4}, {1.0, 2.0, 3.0});
    State s(random_solenoidal(g, 1, 3), random_solenoidal(g, 1, 4), 0.125);
    write_checkpoint(dir / "a.bin", s);
    const State back = read_checkpoint(dir / "a.bin");
    CHECK(back.t == s.t);
    CHECK(back.u == s.u);
    CHECK(back.b == s.b);
    const std::string bytes = slurp(dir / "a.bin");
    CHECK(bytes.size() == 4 + 4 + 12 + 24 + 8 + 6 * g.size() * 16);
    CHECK(bytes.substr(0, 4) == "AMHD");
    CHECK(bytes[4] == 1);
    CHECK(bytes[8] == 8);
    // first coefficient block starts right after the header with u1(0,0,0)
    double re = 0.0;
    std::memcpy(&re, bytes.data() + 52 + 16, sizeof re);
    CHECK(re == s.u[0][1].real());
    std::ofstream(dir / "bad.bin") << "NOPE";
    CHECK_THROWS_AS(read_checkpoint(dir / "bad.bin"), IoError);
    CHECK_THROWS_AS(read_checkpoint(dir / "missing.bin"), IoError);
    std::string truncated = bytes.substr(0, 100);
    std::ofstream(dir / "short.bin", std::ios::binary) << truncated;
    CHECK_THROWS_AS(read_checkpoint(dir / "short.bin"), IoError);
}

TEST_CASE("T = 0 gives a single row and sup_E = E0") {
    const fs::path dir = scratch_dir("t0");
    ExperimentConfig c = small_experiment(dir);
    c.time.T = 0.0;
    const ExperimentSummary s = run_experiment(c);
    CHECK(s.sup_E == s.E0);
    std::ifstream in(c.outputs.series_path);
    std::string line;
    int rows = -1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 1);
    const auto j = nlohmann::json::parse(slurp(c.summary_path()));
    CHECK(j.at("blow_up_time").is_null());
    CHECK(j.at("sup_E").get<double>() == j.at("E0").get<double>());
}

TEST_CASE("blow-up is a finding, not an error") {
    const fs::path dir = scratch_dir("blowup");
    ExperimentConfig c = small_experiment(dir);
    c.blowup_threshold = 1e-6;
    ExperimentSummary s;
    CHECK_NOTHROW(s = run_experiment(c));
    REQUIRE(s.blow_up_time);
    CHECK(*s.blow_up_time == doctest::Approx(0.01));
}

TEST_CASE("unwritable outputs name the path") {
    ExperimentConfig c = small_experiment("/proc/definitely/not/here");
    try {
        run_experiment(c);
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("/proc/definitely") != std::string::npos);
    }
}

TEST_CASE("identical seeds give identical series files") {
    const fs::path d1 = scratch_dir("det1"), d2 = scratch_dir("det2");
    run_experiment(small_experiment(d1));
    run_experiment(small_experiment(d2));
    CHECK(slurp(d1 / "series.csv") == slurp(d2 / "series.csv"));
}

TEST_CASE("resume from a mid-run checkpoint reproduces the direct run") {
    const fs::path dir = scratch_dir("resume");
    ExperimentConfig c = small_experiment(dir);
    c.time.T = 0.06;
    c.outputs.checkpoint_path = dir / "ck-{step}.bin";
    c.outputs.checkpoint_every = 3;
    const ExperimentSummary direct = run_experiment(c);
    const std::string direct_csv = slurp(c.outputs.series_path);
    CHECK(fs::exists(dir / "ck-3.bin"));
    CHECK(fs::exists(dir / "ck-6.bin"));
    const ExperimentSummary resumed = resume_experiment(c, dir / "ck-3.bin");
    CHECK(slurp(c.outputs.series_path) == direct_csv);
    CHECK(rel_diff(resumed.sup_E, direct.sup_E) < 1e-10);
    CHECK(rel_diff(resumed.fitted_C0, direct.fitted_C0) < 1e-10);
    ExperimentConfig other = c;
    other.grid = Grid(24, 24, 24);
    CHECK_THROWS_AS(resume_experiment(other, dir / "ck-3.bin"), ConfigError);
}

TEST_CASE("worker cap from the environment") {
    ::setenv("ANISOMHD_WORKERS", "2", 1);
    CHECK(effective_workers(8) == 2);
    CHECK(effective_workers(1) == 1);
    ::setenv("ANISOMHD_WORKERS", "junk", 1);
    CHECK(effective_workers(3) == 3);
    ::unsetenv("ANISOMHD_WORKERS");
}

TEST_CASE("indexed pool reports failures per job and keeps going") {
    std::vector<int> done(7, 0);
    const auto errors = run_indexed(7, 3, [&](int i) {
        if (i == 4) throw std::runtime_error("boom");
        done[static_cast<std::size_t>(i)] = 1;
    });
    CHECK(errors[4] == "boom");
    CHECK(done == std::vector<int>{1, 1, 1, 1, 0, 1, 1});
}

TEST_CASE("campaign names and settings") {
    CHECK(parse_campaign("energy-budget") == CampaignKind::energy_budget);
    CHECK_THROWS_AS(parse_campaign("everything"), ConfigError);
    const CampaignSettings s = campaign_settings_from(
        parse_key_values("campaign.epsilons = 1e-3, 1e-2\ncampaign.workers = 3\ncampaign.name = x\n"));
    CHECK(s.epsilons == std::vector<double>{1e-3, 1e-2});
    CHECK(s.workers == 3);
    CHECK_THROWS_AS(campaign_settings_from(parse_key_values("campaign.wrokers = 1")), ConfigError);
}

TEST_CASE("inequality audit with zero samples writes only the header") {
    CampaignSettings s;
    s.output_dir = scratch_dir("audit0");
    s.samples = 0;
    s.audit_n = 16;
    const CampaignOutcome o = run_campaign(CampaignKind::inequality_audit, ExperimentConfig{}, s);
    CHECK(slurp(o.csv_path) == "variant,sample_index,seed,lhs,rhs_factor,ratio\n");
    CHECK(o.failures == 0);
}

TEST_CASE("stability sweep: ordered rows, monotonicity flag, failure manifest") {
    const fs::path dir = scratch_dir("sweep");
    ExperimentConfig base = small_experiment(dir);
    base.time.T = 0.02;
    CampaignSettings s;
    s.output_dir = dir / "out";
    s.workers = 3;
    s.epsilons = {1e-3, 1e-2, 1e-1};
    const CampaignOutcome o = run_campaign(CampaignKind::stability_sweep, base, s);
    CHECK(o.failures == 0);
    std::istringstream csv(slurp(o.csv_path));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "run_index,epsilon,E0,sup_E,sup_over_E0,fitted_C0,blow_up_time,max_divergence");
    for (int i = 0; i < 3; ++i) {
        REQUIRE(std::getline(csv, line));
        CHECK(line.rfind(std::to_string(i) + ",", 0) == 0);
    }
    const auto j = nlohmann::json::parse(slurp(o.json_path));
    CHECK(j.contains("monotone"));

    // A time step far beyond the CFL limit fails every run.
    ExperimentConfig broken = base;
    broken.init.epsilon = 1e-2;
    broken.time.dt = 100.0;
    broken.time.T = 100.0;
    s.epsilons = {1e-3, 1e3};
    const CampaignOutcome f = run_campaign(CampaignKind::stability_sweep, broken, s);
    CHECK(f.failures >= 1);
    CHECK(fs::exists(f.failure_manifest));
}

TEST_CASE("linear validation campaign stays within 1e-8") {
    ExperimentConfig base;
    base.time.T = 0.1;
    base.time.dt = 1e-3;
    CampaignSettings s;
    s.output_dir = scratch_dir("linval");
    const CampaignOutcome o = run_campaign(CampaignKind::linear_validation, base, s);
    const auto j = nlohmann::json::parse(slurp(o.json_path));
    CHECK(j.at("max_error").get<double>() <= 1e-8);
}

}
