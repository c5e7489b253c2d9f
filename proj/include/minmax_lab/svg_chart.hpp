#pragma once

#include <string>
#include <vector>

namespace minmax_lab {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct ChartOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  int width = 800;
  int height = 600;
};

// Standalone SVG line chart: linear axes with auto range, one polyline per
// series, legend in the top right. Non-finite points are skipped.
std::string render_line_chart(const std::vector<Series>& series, const ChartOptions& options = {});

}  // namespace minmax_lab
