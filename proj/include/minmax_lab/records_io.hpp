#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "minmax_lab/harness.hpp"

namespace minmax_lab {

// run_<seed>.csv: t,loss_exp,a,b,rel_update_D,rel_update_G,grad_ratio,
// corr_w_<i>_<l>...,corr_v_<j>_<l>... with l in {1, 2}. Numbers use %.17g so
// equal runs give equal bytes.
std::string run_csv_header(int m_D, int m_G);
std::string run_csv(const RunRecord& rec);

nlohmann::json verdict_json(const RunRecord& rec);

// One row per cell: eta_D,eta_G,seed,verdict,collapse_cosine,coverage_u1,
// coverage_u2,final_grad_ratio,stop_reason. Failed cells report verdict
// "Error".
std::string sweep_csv(const SweepResult& result);
// One row per (eta_D, eta_G): majority verdict, majority regime, mean final
// gradient ratio, runs, failures.
std::string sweep_summary_csv(const SweepResult& result);

std::string format_real(double x);

// Minimal CSV reader for numeric tables written by this library.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  // Index of a column or -1.
  int column(const std::string& name) const;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

}  // namespace minmax_lab
