#include "minmax_lab/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace minmax_lab {

using nlohmann::json;

namespace {

std::string variant_name(DataVariant v) {
  return v == DataVariant::CorrelatedModes ? "CorrelatedModes" : "CorrelatedCoefficients";
}

DataVariant variant_from_name(const std::string& s) {
  if (s == "CorrelatedModes") return DataVariant::CorrelatedModes;
  if (s == "CorrelatedCoefficients") return DataVariant::CorrelatedCoefficients;
  throw std::invalid_argument("unknown data_variant: " + s);
}

std::string stop_kind_name(StopKind k) { return k == StopKind::GradNorm ? "GradNorm" : "FixedBudget"; }

StopKind stop_kind_from_name(const std::string& s) {
  if (s == "GradNorm") return StopKind::GradNorm;
  if (s == "FixedBudget") return StopKind::FixedBudget;
  throw std::invalid_argument("unknown stop.kind: " + s);
}

json real_to_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real_from_json(const json& j, const std::string& key) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    throw std::invalid_argument(key + ": expected a number or \"inf\"");
  }
  if (!j.is_number()) throw std::invalid_argument(key + ": expected a number");
  return j.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " + where);
    }
  }
}

// Reads j[key] into out when present.
template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    if constexpr (std::is_same_v<T, double>) {
      out = real_from_json(j.at(key), where + "." + key);
    } else {
      out = j.at(key).get<T>();
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + "." + key + ": " + e.what());
  }
}

std::vector<double> grid_from_json(const json& j, const std::string& key) {
  if (j.is_array()) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(real_from_json(x, key));
    return out;
  }
  if (j.is_object() && j.contains("log_space") && j.size() == 1) {
    const auto& ls = j.at("log_space");
    if (!ls.is_array() || ls.size() != 3) throw std::invalid_argument(key + ".log_space: need [lo, hi, n]");
    return log_space(ls[0].get<double>(), ls[1].get<double>(), ls[2].get<int>());
  }
  throw std::invalid_argument(key + ": expected a list or {\"log_space\": [lo, hi, n]}");
}

}  // namespace

json to_json(const ExperimentConfig& cfg) {
  const auto& o = cfg.optimizer;
  return json{
      {"d", cfg.d},
      {"m_D", cfg.m_D},
      {"m_G", cfg.m_G},
      {"gamma", cfg.gamma},
      {"data_variant", variant_name(cfg.data_variant)},
      {"p_pair", cfg.p_pair},
      {"Lambda", real_to_json(cfg.Lambda)},
      {"tau_b", cfg.tau_b},
      {"init_variances", {{"a_var", cfg.init.a_var}, {"w_var", cfg.init.w_var}, {"v_var", cfg.init.v_var}}},
      {"optimizer",
       {{"kind", to_string(o.kind)},
        {"scope", to_string(o.scope)},
        {"eta_D", o.eta_D},
        {"eta_G", o.eta_G},
        {"beta1", o.beta1},
        {"beta2", o.beta2},
        {"epsilon", o.epsilon},
        {"norm_epsilon", o.norm_epsilon},
        {"lagged_magnitude", o.lagged_magnitude}}},
      {"max_iters", cfg.max_iters},
      {"stop", {{"kind", stop_kind_name(cfg.stop.kind)}, {"tol", cfg.stop.tol}, {"T1", cfg.stop.T1}}},
      {"metric_stride", cfg.metric_stride},
      {"seed", cfg.seed},
      {"thresholds",
       {{"near_mode", cfg.thresholds.near_mode},
        {"collapse_cos", cfg.thresholds.collapse_cos},
        {"noise_cos", cfg.thresholds.noise_cos}}},
      {"regime_margin", cfg.regime_margin},
      {"record_basis", cfg.record_basis},
  };
}

ExperimentConfig config_from_json(const json& j, const ExperimentConfig& defaults) {
  const std::string top = "config";
  reject_unknown(j,
                 {"d", "m_D", "m_G", "gamma", "data_variant", "p_pair", "Lambda", "tau_b", "init_variances",
                  "optimizer", "max_iters", "stop", "metric_stride", "seed", "thresholds", "regime_margin",
                  "record_basis"},
                 top);
  ExperimentConfig cfg = defaults;
  read(j, "d", cfg.d, top);
  read(j, "m_D", cfg.m_D, top);
  read(j, "m_G", cfg.m_G, top);
  read(j, "gamma", cfg.gamma, top);
  if (j.contains("data_variant")) cfg.data_variant = variant_from_name(j.at("data_variant").get<std::string>());
  read(j, "p_pair", cfg.p_pair, top);
  read(j, "Lambda", cfg.Lambda, top);
  read(j, "tau_b", cfg.tau_b, top);
  if (j.contains("init_variances")) {
    const auto& iv = j.at("init_variances");
    reject_unknown(iv, {"a_var", "w_var", "v_var"}, "init_variances");
    read(iv, "a_var", cfg.init.a_var, "init_variances");
    read(iv, "w_var", cfg.init.w_var, "init_variances");
    read(iv, "v_var", cfg.init.v_var, "init_variances");
  }
  if (j.contains("optimizer")) {
    const auto& oj = j.at("optimizer");
    const std::string where = "optimizer";
    reject_unknown(oj,
                   {"kind", "scope", "eta_D", "eta_G", "beta1", "beta2", "epsilon", "norm_epsilon",
                    "lagged_magnitude"},
                   where);
    auto& o = cfg.optimizer;
    if (oj.contains("kind")) o.kind = optimizer_kind_from_string(oj.at("kind").get<std::string>());
    if (oj.contains("scope")) o.scope = norm_scope_from_string(oj.at("scope").get<std::string>());
    read(oj, "eta_D", o.eta_D, where);
    read(oj, "eta_G", o.eta_G, where);
    read(oj, "beta1", o.beta1, where);
    read(oj, "beta2", o.beta2, where);
    read(oj, "epsilon", o.epsilon, where);
    read(oj, "norm_epsilon", o.norm_epsilon, where);
    read(oj, "lagged_magnitude", o.lagged_magnitude, where);
  }
  read(j, "max_iters", cfg.max_iters, top);
  if (j.contains("stop")) {
    const auto& sj = j.at("stop");
    reject_unknown(sj, {"kind", "tol", "T1"}, "stop");
    if (sj.contains("kind")) cfg.stop.kind = stop_kind_from_name(sj.at("kind").get<std::string>());
    read(sj, "tol", cfg.stop.tol, "stop");
    read(sj, "T1", cfg.stop.T1, "stop");
  }
  read(j, "metric_stride", cfg.metric_stride, top);
  read(j, "seed", cfg.seed, top);
  if (j.contains("thresholds")) {
    const auto& tj = j.at("thresholds");
    reject_unknown(tj, {"near_mode", "collapse_cos", "noise_cos"}, "thresholds");
    read(tj, "near_mode", cfg.thresholds.near_mode, "thresholds");
    read(tj, "collapse_cos", cfg.thresholds.collapse_cos, "thresholds");
    read(tj, "noise_cos", cfg.thresholds.noise_cos, "thresholds");
  }
  read(j, "regime_margin", cfg.regime_margin, top);
  read(j, "record_basis", cfg.record_basis, top);
  cfg.validate();
  return cfg;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override must look like key.path=value: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &doc;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
    if (!node->is_object()) throw std::invalid_argument("override path is not an object: " + path);
    node = &(*node)[parts[k]];
    if (node->is_null()) *node = json::object();
  }
  if (!node->is_object()) throw std::invalid_argument("override path is not an object: " + path);
  (*node)[parts.back()] = value;
}

json to_json(const SweepSpec& spec) {
  return json{{"base", to_json(spec.base)},
              {"eta_D_grid", spec.eta_D_grid},
              {"eta_G_grid", spec.eta_G_grid},
              {"seeds", spec.seeds}};
}

SweepSpec sweep_from_json(const json& j) {
  reject_unknown(j, {"base", "preset", "eta_D_grid", "eta_G_grid", "seeds"}, "sweep");
  SweepSpec spec;
  ExperimentConfig defaults = base_config();
  if (j.contains("preset")) defaults = preset(preset_from_string(j.at("preset").get<std::string>()));
  spec.base = j.contains("base") ? config_from_json(j.at("base"), defaults) : defaults;
  if (!j.contains("eta_D_grid") || !j.contains("eta_G_grid") || !j.contains("seeds")) {
    throw std::invalid_argument("sweep: eta_D_grid, eta_G_grid and seeds are required");
  }
  spec.eta_D_grid = grid_from_json(j.at("eta_D_grid"), "eta_D_grid");
  spec.eta_G_grid = grid_from_json(j.at("eta_G_grid"), "eta_G_grid");
  spec.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (spec.eta_D_grid.empty() || spec.eta_G_grid.empty() || spec.seeds.empty()) {
    throw std::invalid_argument("sweep: grids and seeds must be nonempty");
  }
  return spec;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace minmax_lab
