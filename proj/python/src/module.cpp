#include "anisomhd/errors.hpp"
#include "anisomhd/harness/campaign.hpp"
#include "anisomhd/harness/experiment.hpp"
#include "anisomhd/inequalities.hpp"
#include "anisomhd/waves.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace anisomhd;

namespace {

KeyValues to_key_values(const py::dict& d) {
    KeyValues kv;
    for (auto item : d) kv[py::str(item.first)] = py::str(item.second);
    return kv;
}

py::dict to_dict(const ExperimentSummary& s) {
    py::dict d;
    d["sup_E"] = s.sup_E;
    d["E0"] = s.E0;
    d["fitted_C0"] = s.fitted_C0;
    d["blow_up_time"] = s.blow_up_time ? py::object(py::float_(*s.blow_up_time)) : py::object(py::none());
    d["blow_up_reason"] = s.blow_up_reason;
    d["max_divergence"] = s.max_divergence;
    d["final_t"] = s.final_t;
    d["steps"] = s.steps;
    d["seed_used"] = s.seed_used;
    d["l2_initial"] = s.l2_initial;
    d["l2_final"] = s.l2_final;
    d["dissipated_l2"] = s.dissipated_l2;
    return d;
}

ModelConfig model_from(const py::dict& config) {
    return experiment_config_from(to_key_values(config)).model;
}

}  // namespace

PYBIND11_MODULE(_anisomhd, m) {
    m.doc() = "Bindings for the anisotropic MHD simulator";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    m.def(
        "run_experiment",
        [](const py::dict& config) {
            const ExperimentConfig cfg = experiment_config_from(to_key_values(config));
            ExperimentSummary s;
            {
                py::gil_scoped_release release;
                s = run_experiment(cfg);
            }
            return to_dict(s);
        },
        py::arg("config"), "Run one experiment; writes the series CSV and summary JSON and returns the summary.");

    m.def(
        "resume_experiment",
        [](const py::dict& config, const std::filesystem::path& checkpoint) {
            const ExperimentConfig cfg = experiment_config_from(to_key_values(config));
            ExperimentSummary s;
            {
                py::gil_scoped_release release;
                s = resume_experiment(cfg, checkpoint);
            }
            return to_dict(s);
        },
        py::arg("config"), py::arg("checkpoint"));

    m.def(
        "run_campaign",
        [](const std::string& name, const py::dict& config) {
            const KeyValues kv = to_key_values(config);
            const CampaignKind kind = parse_campaign(name);
            const ExperimentConfig cfg = experiment_config_from(kv);
            const CampaignSettings settings = campaign_settings_from(kv);
            CampaignOutcome o;
            {
                py::gil_scoped_release release;
                o = run_campaign(kind, cfg, settings);
            }
            py::dict d;
            d["csv"] = o.csv_path;
            d["json"] = o.json_path;
            d["failure_manifest"] = o.failure_manifest.empty() ? py::object(py::none()) : py::cast(o.failure_manifest);
            d["runs"] = o.runs;
            d["failures"] = o.failures;
            return d;
        },
        py::arg("name"), py::arg("config"));

    m.def(
        "dispersion_roots",
        [](const std::array<double, 3>& k) {
            const WaveMode w = dispersion_roots(k);
            return py::make_tuple(w.plus, w.minus);
        },
        py::arg("k"), "Roots (larger real part first) of the per-mode characteristic polynomial.");

    m.def(
        "decay_map",
        [](const std::array<int, 3>& lo, const std::array<int, 3>& hi, const py::dict& config) {
            py::list rows;
            for (const DecayRow& r : decay_map(lo, hi, model_from(config))) {
                rows.append(py::make_tuple(py::make_tuple(r.k[0], r.k[1], r.k[2]), r.re_plus, r.im_plus,
                                           r.re_minus, r.im_minus));
            }
            return rows;
        },
        py::arg("lo"), py::arg("hi"), py::arg("config") = py::dict(),
        "Rows (k, Re plus, Im plus, Re minus, Im minus) in lexicographic order of k.");

    m.def(
        "validate_simulator_linear",
        [](const std::vector<std::array<int, 3>>& modes, double T, double dt, int n) {
            LinearValidation v;
            {
                py::gil_scoped_release release;
                v = validate_simulator_linear(modes, T, dt, ModelConfig{}, n);
            }
            return py::make_tuple(v.max_relative_error, v.per_mode_error);
        },
        py::arg("modes"), py::arg("T") = 1.0, py::arg("dt") = 1e-3, py::arg("n") = 8);

    m.def(
        "check_interp_1d",
        [](const std::vector<double>& samples, double length) {
            const Interp1dResult r = check_interp_1d(samples, length);
            return py::make_tuple(r.lhs, r.rhs, r.ratio);
        },
        py::arg("samples"), py::arg("length"), "(max|f|, sqrt(2)|f|^1/2 |f'|^1/2, ratio)");

    m.def(
        "constant_sweep",
        [](const std::string& variant, int n_samples, int n, std::uint64_t seed, int workers, bool zero_fields,
           int band) {
            const InequalityVariant v = parse_inequality_variant(variant);
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = constant_sweep(v, n_samples, Grid(n, n, n), seed, effective_workers(workers), zero_fields, 10, band);
            }
            std::vector<double> ratios;
            for (const auto& s : r.samples) ratios.push_back(s.result.ratio);
            py::dict d;
            d["max_ratio"] = r.max_ratio;
            d["ratios"] = ratios;
            d["histogram"] = r.histogram;
            return d;
        },
        py::arg("variant"), py::arg("n_samples"), py::arg("n") = 32, py::arg("seed") = 1, py::arg("workers") = 1,
        py::arg("zero_fields") = false, py::arg("band") = 4);

    m.def("energy_csv_header", &energy_csv_header);
}
