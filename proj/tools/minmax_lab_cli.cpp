// Command-line front end: run, sweep, gradcheck, oracle, plot, preset.
//
// Exit codes: 0 success, 1 check failure, 2 usage or config error,
// 3 run diverged.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "minmax_lab/checks.hpp"
#include "minmax_lab/config_io.hpp"
#include "minmax_lab/records_io.hpp"
#include "minmax_lab/svg_chart.hpp"

namespace fs = std::filesystem;
using namespace minmax_lab;

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kDiverged = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::string preset;
  std::string out = ".";
  std::vector<std::string> overrides;
  long long seed = -1;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_out = true) {
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--preset", f.preset, "Start from a named preset");
  if (with_out) cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--set", f.overrides, "Override key.path=value (repeatable)");
  cmd->add_option("--seed", f.seed, "Override the seed");
  cmd->add_flag("--quiet", f.quiet, "Only print errors");
}

// Resolves --preset/--config/--set/--seed into one experiment config.
ExperimentConfig load_config(const CommonFlags& f, bool required) {
  ExperimentConfig defaults = base_config();
  if (!f.preset.empty()) defaults = preset(preset_from_string(f.preset));
  nlohmann::json doc = nlohmann::json::object();
  if (!f.config.empty()) {
    doc = read_json_file(f.config);
  } else if (f.preset.empty() && required) {
    throw UsageError("--config or --preset is required");
  }
  for (const auto& o : f.overrides) apply_override(doc, o);
  if (f.seed >= 0) doc["seed"] = f.seed;
  return config_from_json(doc, defaults);
}

int thread_budget() {
  int n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("MINMAX_LAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

int cmd_run(const CommonFlags& f) {
  const ExperimentConfig cfg = load_config(f, true);
  const RunRecord rec = train(cfg);
  fs::create_directories(f.out);
  write_text_file((fs::path(f.out) / ("run_" + std::to_string(cfg.seed) + ".csv")).string(), run_csv(rec));
  write_text_file((fs::path(f.out) / "verdict.json").string(), verdict_json(rec).dump(2) + "\n");
  if (!f.quiet) {
    const auto& v = rec.verdict;
    std::printf("verdict=%s coverage=(%.3f, %.3f) collapse_cosine=%.4f max_mode_cosine=%.4f regime=%s\n",
                to_string(v.label).c_str(), v.per_mode_coverage[0], v.per_mode_coverage[1], v.collapse_cosine,
                v.max_mode_cosine, to_string(v.regime).c_str());
    std::printf("stop=%s at t=%ld, final grad_ratio=%.4g, wall %.2fs\n", to_string(rec.stop_reason).c_str(),
                rec.stop_iteration, rec.rows.back().grad_ratio, rec.wall_time);
  }
  return rec.stop_reason == StopReason::Diverged ? kDiverged : kOk;
}

int cmd_sweep(const CommonFlags& f, int threads) {
  if (f.config.empty()) throw UsageError("sweep needs --config <sweep.json>");
  nlohmann::json doc = read_json_file(f.config);
  if (!f.preset.empty()) doc["preset"] = f.preset;
  for (const auto& o : f.overrides) apply_override(doc, o);
  if (f.seed >= 0) doc["seeds"] = {f.seed};
  const SweepSpec spec = sweep_from_json(doc);
  const int n = threads > 0 ? std::min(threads, thread_budget()) : thread_budget();
  const SweepResult result = sweep(spec, n);
  fs::create_directories(f.out);
  write_text_file((fs::path(f.out) / "sweep.csv").string(), sweep_csv(result));
  write_text_file((fs::path(f.out) / "sweep_summary.csv").string(), sweep_summary_csv(result));
  int failures = 0;
  for (const auto& c : result.cells) {
    if (!c.record) {
      ++failures;
      std::fprintf(stderr, "cell eta_D=%g eta_G=%g seed=%llu failed: %s\n", c.eta_D, c.eta_G,
                   static_cast<unsigned long long>(c.seed), c.error.c_str());
    }
  }
  if (!f.quiet) {
    for (const auto& a : result.aggregates) {
      std::printf("eta_D=%-10.4g eta_G=%-10.4g majority=%-13s regime=%-18s mean_grad_ratio=%.4g\n", a.eta_D,
                  a.eta_G, to_string(a.majority).c_str(), to_string(a.regime).c_str(), a.mean_final_grad_ratio);
    }
  }
  return failures ? kCheckFailed : kOk;
}

int cmd_gradcheck(int samples, long long seed, bool flip_b, bool quiet) {
  if (samples < 1) throw UsageError("--samples must be >= 1");
  GradcheckOptions opt;
  opt.samples = samples;
  opt.seed = seed < 0 ? 0 : static_cast<std::uint64_t>(seed);
  opt.flip_b = flip_b;
  const GradcheckReport rep = gradcheck(opt);
  if (!quiet || !rep.pass) {
    std::printf("gradcheck %s: %d samples, %d failing, max rel error %.3e, max abs error %.3e (%.2fs)\n",
                rep.pass ? "PASS" : "FAIL", rep.samples, rep.failures, rep.max_rel_error, rep.max_abs_error,
                rep.seconds);
    std::printf("worst component %s: analytic %.12g, fd %.12g; %s\n", rep.worst_component.c_str(),
                rep.worst_analytic, rep.worst_fd, rep.worst_config.c_str());
  }
  return rep.pass ? kOk : kCheckFailed;
}

int cmd_oracle(const CommonFlags& f, int snapshots, long draws) {
  const ExperimentConfig cfg = load_config(f, false);
  OracleOptions opt;
  opt.snapshots = snapshots;
  opt.draws = draws;
  opt.seed = cfg.seed;
  const OracleReport rep = oracle_check(cfg, opt);
  if (!f.quiet || !rep.pass) {
    std::printf("oracle %s: %d snapshots x %ld draws, %ld/%ld components beyond %.0f SE, max z %.3f at %s "
                "(snapshot %d) (%.2fs)\n",
                rep.pass ? "PASS" : "FAIL", rep.snapshots, draws, rep.violations, rep.components_checked,
                opt.se_multiple, rep.max_z, rep.worst_component.c_str(), rep.worst_snapshot, rep.seconds);
  }
  return rep.pass ? kOk : kCheckFailed;
}

// Expands "corr_v_*" style prefixes against the header.
std::vector<std::string> expand_columns(const std::vector<std::string>& requested, const CsvTable& table) {
  std::vector<std::string> out;
  for (const auto& r : requested) {
    if (!r.empty() && r.back() == '*') {
      const std::string prefix = r.substr(0, r.size() - 1);
      bool any = false;
      for (const auto& h : table.header) {
        if (h.rfind(prefix, 0) == 0) {
          out.push_back(h);
          any = true;
        }
      }
      if (!any) throw UsageError("no column matches " + r);
    } else {
      if (table.column(r) < 0) throw UsageError("missing column: " + r);
      out.push_back(r);
    }
  }
  return out;
}

int cmd_plot(const std::string& csv, const std::vector<std::string>& columns, const std::string& x_column,
             const std::string& out, const std::string& title) {
  if (columns.empty()) throw UsageError("--columns is required");
  const CsvTable table = read_csv_file(csv);
  if (table.header.empty() || table.rows.empty()) throw UsageError("empty csv: " + csv);
  const int xc = table.column(x_column);
  if (xc < 0) throw UsageError("missing column: " + x_column);
  std::vector<Series> series;
  for (const auto& name : expand_columns(columns, table)) {
    const int c = table.column(name);
    Series s{name, {}, {}};
    for (const auto& row : table.rows) {
      s.x.push_back(row[static_cast<std::size_t>(xc)]);
      s.y.push_back(row[static_cast<std::size_t>(c)]);
    }
    series.push_back(std::move(s));
  }
  ChartOptions opt;
  opt.title = title.empty() ? fs::path(csv).filename().string() : title;
  opt.x_label = x_column;
  write_text_file(out, render_line_chart(series, opt));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-player GAN optimizer laboratory"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, oracle_flags;
  auto* run = app.add_subcommand("run", "Train one configuration");
  add_common(run, run_flags);

  auto* sweep_cmd = app.add_subcommand("sweep", "Grid over (eta_D, eta_G, seed)");
  add_common(sweep_cmd, sweep_flags);
  int threads = 0;
  sweep_cmd->add_option("--threads", threads, "Worker threads (capped by MINMAX_LAB_THREADS)");

  auto* gc = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
  int samples = 100;
  long long gc_seed = 0;
  bool flip_b = false, gc_quiet = false;
  gc->add_option("--samples", samples, "Number of random configurations");
  gc->add_option("--seed", gc_seed, "Seed");
  gc->add_flag("--flip-b", flip_b, "Test hook: negate the analytic b gradient");
  gc->add_flag("--quiet", gc_quiet, "Only print on failure");

  auto* oracle = app.add_subcommand("oracle", "Monte-Carlo vs exact expected gradient");
  add_common(oracle, oracle_flags, false);
  int snapshots = 10;
  long draws = 100000;
  oracle->add_option("--snapshots", snapshots, "Parameter snapshots");
  oracle->add_option("--draws", draws, "Monte-Carlo draws per snapshot");

  auto* plot = app.add_subcommand("plot", "SVG line chart from a run CSV");
  std::string csv, x_column = "t", svg_out = "chart.svg", title;
  std::vector<std::string> columns;
  plot->add_option("csv", csv, "Input CSV")->required();
  plot->add_option("--columns", columns, "Columns to draw; a trailing * matches a prefix")->delimiter(',');
  plot->add_option("--x", x_column, "x-axis column");
  plot->add_option("--out", svg_out, "Output SVG path");
  plot->add_option("--title", title, "Chart title");

  auto* preset_cmd = app.add_subcommand("preset", "Print a preset as JSON");
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sweep_cmd) return cmd_sweep(sweep_flags, threads);
    if (*gc) return cmd_gradcheck(samples, gc_seed, flip_b, gc_quiet);
    if (*oracle) return cmd_oracle(oracle_flags, snapshots, draws);
    if (*plot) return cmd_plot(csv, columns, x_column, svg_out, title);
    if (*preset_cmd) {
      std::cout << to_json(preset(preset_from_string(preset_name))).dump(2) << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kCheckFailed;
  }
  return kUsage;
}
