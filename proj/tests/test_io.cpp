#include <doctest.h>

#include <cmath>
#include <limits>
#include <regex>
#include <vector>

#include "minmax_lab/checks.hpp"
#include "minmax_lab/config_io.hpp"
#include "minmax_lab/records_io.hpp"
#include "minmax_lab/svg_chart.hpp"

using namespace minmax_lab;
using nlohmann::json;

namespace {

// Single root element and properly nested tags.
bool well_formed(const std::string& svg) {
  std::vector<std::string> stack;
  int roots = 0;
  const std::regex tag(R"(<(/?)([A-Za-z][\w:-]*)[^>]*?(/?)>)");
  std::string body = std::regex_replace(svg, std::regex(R"(<\?xml[^>]*\?>)"), "");
  for (std::sregex_iterator it(body.begin(), body.end(), tag), end; it != end; ++it) {
    const bool closing = (*it)[1].length() > 0;
    const bool self_closing = (*it)[3].length() > 0;
    const std::string name = (*it)[2];
    if (closing) {
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      if (stack.empty()) ++roots;
      if (!self_closing) stack.push_back(name);
    }
  }
  return stack.empty() && roots == 1;
}

}  // namespace

TEST_CASE("config JSON round trip") {
  ExperimentConfig c = preset(PresetName::AdaNsgda);
  c.seed = 12;
  c.optimizer.scope = NormScope::LayerWise;
  c.data_variant = DataVariant::CorrelatedModes;
  const json j = to_json(c);
  const ExperimentConfig back = config_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.seed == 12);
  CHECK(back.optimizer.kind == OptimizerKind::AdaNSGDA);
}

TEST_CASE("config JSON: missing keys keep defaults, unknown keys fail") {
  const ExperimentConfig c = config_from_json(json{{"d", 30}, {"optimizer", {{"eta_D", 0.5}}}});
  CHECK(c.d == 30);
  CHECK(c.optimizer.eta_D == 0.5);
  CHECK(c.m_G == base_config().m_G);
  CHECK_THROWS_AS(config_from_json(json{{"dd", 3}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"optimizer", {{"lr", 0.1}}}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"optimizer", {{"kind", "rmsprop"}}}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(json{{"d", 1}}), std::invalid_argument);
}

TEST_CASE("config JSON accepts an infinite Lambda") {
  const ExperimentConfig c = config_from_json(json{{"Lambda", "inf"}});
  CHECK(std::isinf(c.Lambda));
  CHECK(to_json(c)["Lambda"] == "inf");
}

TEST_CASE("dotted overrides") {
  json doc = json::object();
  apply_override(doc, "optimizer.eta_D=0.02");
  apply_override(doc, "optimizer.kind=nsgda");
  apply_override(doc, "seed=4");
  const ExperimentConfig c = config_from_json(doc);
  CHECK(c.optimizer.eta_D == 0.02);
  CHECK(c.optimizer.kind == OptimizerKind::NSGDA);
  CHECK(c.seed == 4);
  CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), std::invalid_argument);
}

TEST_CASE("sweep spec JSON") {
  const json j = {{"preset", "SgdaBalanced"},
                  {"eta_D_grid", {{"log_space", {1e-4, 1e-2, 3}}}},
                  {"eta_G_grid", {0.1, 0.2}},
                  {"seeds", {0, 1}}};
  const SweepSpec s = sweep_from_json(j);
  CHECK(s.eta_D_grid.size() == 3);
  CHECK(s.eta_D_grid[1] == doctest::Approx(1e-3));
  CHECK(s.eta_G_grid == std::vector<double>{0.1, 0.2});
  CHECK(s.seeds.size() == 2);
  CHECK(s.base.optimizer.kind == OptimizerKind::SGDA);
  CHECK_THROWS_AS(sweep_from_json(json{{"grid", 1}}), std::invalid_argument);
}

TEST_CASE("format_real is exact and handles non-finite values") {
  CHECK(std::stod(format_real(0.1)) == 0.1);
  CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("run CSV header layout") {
  CHECK(run_csv_header(1, 2) ==
        "t,loss_exp,a,b,rel_update_D,rel_update_G,grad_ratio,corr_w_0_1,corr_w_0_2,corr_v_0_1,corr_v_0_2,"
        "corr_v_1_1,corr_v_1_2");
}

TEST_CASE("run CSV parses back") {
  ExperimentConfig c = base_config(20);
  c.max_iters = 200;
  c.metric_stride = 50;
  const RunRecord r = train(c);
  const CsvTable t = parse_csv(run_csv(r));
  CHECK(t.rows.size() == r.rows.size());
  CHECK(t.column("grad_ratio") == 6);
  CHECK(t.column("missing") == -1);
  CHECK(t.rows.back()[0] == 200.0);
  CHECK(t.rows.back()[2] == r.rows.back().a);
  const json v = verdict_json(r);
  for (const char* key : {"label", "per_mode_coverage", "collapse_cosine", "regime", "stop_reason", "seed"}) {
    CHECK(v.contains(key));
  }
}

TEST_CASE("SVG chart is well formed and has one polyline per series") {
  std::vector<Series> s{{"one", {0, 1, 2}, {0, 1, 4}},
                        {"two", {0, 1, 2}, {1, std::numeric_limits<double>::quiet_NaN(), 0}}};
  const std::string svg = render_line_chart(s, {"title <&>", "t", "y", 800, 600});
  CHECK(well_formed(svg));
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
    ++count;
  }
  CHECK(count == 2);
  CHECK(svg.find("title &lt;&amp;&gt;") != std::string::npos);
  CHECK(svg.find("width=\"800\"") != std::string::npos);
  CHECK(well_formed(render_line_chart({})));
}

TEST_CASE("gradcheck default passes") {
  const GradcheckReport r = gradcheck();
  CHECK(r.pass);
  CHECK(r.samples == 100);
  CHECK(r.max_rel_error < 1e-6);
}

TEST_CASE("gradcheck catches a sign flip in g_b") {
  GradcheckOptions o;
  o.flip_b = true;
  o.samples = 4;
  const GradcheckReport r = gradcheck(o);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_component == "b");
}

TEST_CASE("gradcheck with one sample is deterministic") {
  GradcheckOptions o;
  o.samples = 1;
  o.seed = 9;
  const auto a = gradcheck(o), b = gradcheck(o);
  CHECK(a.max_abs_error == b.max_abs_error);
  CHECK(a.worst_config == b.worst_config);
}

TEST_CASE("oracle check passes on a small problem") {
  ExperimentConfig c = base_config(20);
  OracleOptions o;
  o.snapshots = 2;
  o.draws = 20000;
  const auto r = oracle_check(c, o);
  CHECK(r.pass);
  CHECK(r.components_checked > 0);
  const auto again = oracle_check(c, o);
  CHECK(again.max_z == r.max_z);
}
