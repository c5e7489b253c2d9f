// Python extension. Configs and reports cross the boundary as JSON text;
// the package __init__ turns them into dicts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minmax_lab/checks.hpp"
#include "minmax_lab/config_io.hpp"
#include "minmax_lab/records_io.hpp"

namespace py = pybind11;
using namespace minmax_lab;

namespace {

ExperimentConfig parse_config(const std::string& text) {
  return config_from_json(nlohmann::json::parse(text), base_config());
}

GanParams make_params(const Mat& V, const Mat& W, double a, double b, double tau_b, double Lambda) {
  GanParams p;
  p.V = V;
  p.W = W;
  p.a = a;
  p.b = b;
  p.tau_b = tau_b;
  p.Lambda = Lambda;
  return p;
}

py::dict bundle_dict(const GradientBundle& g) {
  py::dict out;
  out["V"] = g.g_V;
  out["W"] = g.g_W;
  out["a"] = g.g_a;
  out["b"] = g.g_b;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-player GAN optimizer laboratory (C++ core).";

  py::register_exception<std::invalid_argument>(m, "ConfigError", PyExc_ValueError);

  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (auto p : all_presets()) names.push_back(to_string(p));
    return names;
  });
  m.def("preset", [](const std::string& name) { return to_json(preset(preset_from_string(name))).dump(); },
        py::arg("name"));
  m.def("base_config", [](int d) { return to_json(base_config(d)).dump(); }, py::arg("d") = 100);
  m.def("normalize_config", [](const std::string& text) { return to_json(parse_config(text)).dump(); },
        py::arg("config_json"));

  m.def(
      "train",
      [](const std::string& text) {
        const ExperimentConfig cfg = parse_config(text);
        RunRecord rec;
        {
          py::gil_scoped_release release;
          rec = train(cfg);
        }
        return py::make_tuple(verdict_json(rec).dump(), run_csv(rec));
      },
      py::arg("config_json"), "Returns (verdict_json, run_csv).");

  m.def(
      "sweep",
      [](const std::string& text, int threads) {
        const SweepSpec spec = sweep_from_json(nlohmann::json::parse(text));
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = sweep(spec, threads);
        }
        return py::make_tuple(sweep_csv(result), sweep_summary_csv(result));
      },
      py::arg("sweep_json"), py::arg("threads") = 1, "Returns (sweep_csv, summary_csv).");

  m.def(
      "gradcheck",
      [](int samples, std::uint64_t seed, bool flip_b) {
        GradcheckOptions opt;
        opt.samples = samples;
        opt.seed = seed;
        opt.flip_b = flip_b;
        const GradcheckReport r = gradcheck(opt);
        py::dict out;
        out["pass"] = r.pass;
        out["samples"] = r.samples;
        out["failures"] = r.failures;
        out["max_rel_error"] = r.max_rel_error;
        out["max_abs_error"] = r.max_abs_error;
        out["worst_component"] = r.worst_component;
        out["worst_config"] = r.worst_config;
        return out;
      },
      py::arg("samples") = 100, py::arg("seed") = 0, py::arg("flip_b") = false);

  m.def(
      "oracle",
      [](const std::string& text, int snapshots, long draws) {
        const ExperimentConfig cfg = parse_config(text);
        OracleOptions opt;
        opt.snapshots = snapshots;
        opt.draws = draws;
        opt.seed = cfg.seed;
        OracleReport r;
        {
          py::gil_scoped_release release;
          r = oracle_check(cfg, opt);
        }
        py::dict out;
        out["pass"] = r.pass;
        out["snapshots"] = r.snapshots;
        out["components_checked"] = r.components_checked;
        out["violations"] = r.violations;
        out["max_z"] = r.max_z;
        out["worst_component"] = r.worst_component;
        return out;
      },
      py::arg("config_json"), py::arg("snapshots") = 10, py::arg("draws") = 100000);

  m.def("sigma", &sigma, py::arg("z"), py::arg("Lambda"));
  m.def("sigma_prime", &sigma_prime, py::arg("z"), py::arg("Lambda"));
  m.def(
      "loss",
      [](const Mat& V, const Mat& W, double a, double b, double tau_b, double Lambda, const Vec& X, const Vec& z) {
        return loss(make_params(V, W, a, b, tau_b, Lambda), X, z);
      },
      py::arg("V"), py::arg("W"), py::arg("a"), py::arg("b"), py::arg("tau_b"), py::arg("Lambda"), py::arg("X"),
      py::arg("z"));
  m.def(
      "sample_gradient",
      [](const Mat& V, const Mat& W, double a, double b, double tau_b, double Lambda, const Vec& X, const Vec& z) {
        return bundle_dict(sample_gradient(make_params(V, W, a, b, tau_b, Lambda), X, z));
      },
      py::arg("V"), py::arg("W"), py::arg("a"), py::arg("b"), py::arg("tau_b"), py::arg("Lambda"), py::arg("X"),
      py::arg("z"));
}
