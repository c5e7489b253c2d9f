#include "minmax_lab/records_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace minmax_lab {

using nlohmann::json;

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string run_csv_header(int m_D, int m_G) {
  std::string h = "t,loss_exp,a,b,rel_update_D,rel_update_G,grad_ratio";
  for (int i = 0; i < m_D; ++i)
    for (int l = 1; l <= 2; ++l) h += ",corr_w_" + std::to_string(i) + "_" + std::to_string(l);
  for (int j = 0; j < m_G; ++j)
    for (int l = 1; l <= 2; ++l) h += ",corr_v_" + std::to_string(j) + "_" + std::to_string(l);
  return h;
}

std::string run_csv(const RunRecord& rec) {
  std::string out = run_csv_header(rec.config.m_D, rec.config.m_G) + "\n";
  for (const auto& row : rec.rows) {
    out += std::to_string(row.t);
    for (double x : {row.loss_exp, row.a, row.b, row.rel_update_D, row.rel_update_G, row.grad_ratio}) {
      out += "," + format_real(x);
    }
    for (Eigen::Index i = 0; i < row.corr_w.rows(); ++i)
      for (int l = 0; l < 2; ++l) out += "," + format_real(row.corr_w(i, l));
    for (Eigen::Index j = 0; j < row.corr_v.rows(); ++j)
      for (int l = 0; l < 2; ++l) out += "," + format_real(row.corr_v(j, l));
    out += "\n";
  }
  return out;
}

json verdict_json(const RunRecord& rec) {
  const auto& v = rec.verdict;
  json j{{"label", to_string(v.label)},
         {"per_mode_coverage", {v.per_mode_coverage[0], v.per_mode_coverage[1]}},
         {"collapse_cosine", v.collapse_cosine},
         {"max_mode_cosine", v.max_mode_cosine},
         {"regime", to_string(v.regime)},
         {"regime_A", rec.regime.A},
         {"regime_B", rec.regime.B},
         {"excluded_latents", v.excluded_latents},
         {"stop_reason", to_string(rec.stop_reason)},
         {"stop_iteration", rec.stop_iteration},
         {"seed", rec.config.seed}};
  if (v.noise_residual) j["noise_residual"] = *v.noise_residual;
  if (!rec.rows.empty()) {
    j["final_grad_ratio"] = rec.rows.back().grad_ratio;
    j["final_grad_norm"] = rec.rows.back().grad_norm;
  }
  return j;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out =
      "eta_D,eta_G,seed,verdict,collapse_cosine,coverage_u1,coverage_u2,final_grad_ratio,stop_reason\n";
  for (const auto& cell : result.cells) {
    out += format_real(cell.eta_D) + "," + format_real(cell.eta_G) + "," + std::to_string(cell.seed) + ",";
    if (!cell.record) {
      out += "Error,nan,nan,nan,nan,Error\n";
      continue;
    }
    const auto& r = *cell.record;
    out += to_string(r.verdict.label) + "," + format_real(r.verdict.collapse_cosine) + "," +
           format_real(r.verdict.per_mode_coverage[0]) + "," + format_real(r.verdict.per_mode_coverage[1]) +
           "," + format_real(r.rows.back().grad_ratio) + "," + to_string(r.stop_reason) + "\n";
  }
  return out;
}

std::string sweep_summary_csv(const SweepResult& result) {
  std::string out = "eta_D,eta_G,majority_verdict,regime,mean_final_grad_ratio,runs,failures\n";
  for (const auto& a : result.aggregates) {
    out += format_real(a.eta_D) + "," + format_real(a.eta_G) + "," + to_string(a.majority) + "," +
           to_string(a.regime) + "," + format_real(a.mean_final_grad_ratio) + "," + std::to_string(a.runs) +
           "," + std::to_string(a.failures) + "\n";
  }
  return out;
}

int CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return static_cast<int>(k);
  }
  return -1;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw std::invalid_argument("csv: row has " + std::to_string(cells.size()) + " cells, header has " +
                                  std::to_string(table.header.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
      } catch (const std::exception&) {
        row.push_back(std::nan(""));
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace minmax_lab
