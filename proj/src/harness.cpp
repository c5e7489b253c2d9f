#include "minmax_lab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace minmax_lab {

void ExperimentConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(d >= 2, "d must be >= 2");
  require(m_D >= 1 && m_G >= 1, "m_D and m_G must be >= 1");
  require(m_D <= m_G && m_G <= d, "need m_D <= m_G <= d");
  require(gamma >= 0.0 && gamma <= 0.5, "gamma must lie in [0, 1/2]");
  require(p_pair >= 0.0 && p_pair <= 0.1, "p_pair must lie in [0, 0.1]");
  require(Lambda > 0.0, "Lambda must be positive");
  require(tau_b > 0.0 && std::isfinite(tau_b), "tau_b must be positive");
  require(init.a_var > 0.0 && init.w_var > 0.0 && init.v_var > 0.0, "init variances must be positive");
  require(max_iters >= 0, "max_iters must be >= 0");
  require(metric_stride >= 1, "metric_stride must be >= 1");
  require(stop.kind != StopKind::GradNorm || stop.tol > 0.0, "stop.tol must be positive");
  require(stop.kind != StopKind::FixedBudget || stop.T1 >= 0, "stop.T1 must be >= 0");
  require(thresholds.near_mode > 0.0 && thresholds.collapse_cos > 0.0 && thresholds.noise_cos > 0.0,
          "thresholds must be positive");
  require(regime_margin >= 1.0, "regime_margin must be >= 1");
  optimizer.validate();
}

std::string to_string(PresetName name) {
  switch (name) {
    case PresetName::SgdaBalanced: return "SgdaBalanced";
    case PresetName::SgdaDiscFast: return "SgdaDiscFast";
    case PresetName::SgdaGenFast: return "SgdaGenFast";
    case PresetName::Nsgda: return "Nsgda";
    case PresetName::AdamGames: return "AdamGames";
    case PresetName::AdaNsgda: return "AdaNsgda";
    case PresetName::AdaDir: return "AdaDir";
  }
  return "unknown";
}

std::vector<PresetName> all_presets() {
  return {PresetName::SgdaBalanced, PresetName::SgdaDiscFast, PresetName::SgdaGenFast, PresetName::Nsgda,
          PresetName::AdamGames,    PresetName::AdaNsgda,     PresetName::AdaDir};
}

PresetName preset_from_string(const std::string& name) {
  for (auto p : all_presets()) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown preset: " + name);
}

long fixed_budget(double eta_D, double multiplier) {
  if (!(eta_D > 0.0)) throw std::invalid_argument("fixed_budget: eta_D must be positive");
  return static_cast<long>(std::ceil(multiplier / eta_D));
}

ExperimentConfig base_config(int d) {
  ExperimentConfig cfg;
  const double ln_d = std::log(static_cast<double>(d));
  cfg.d = d;
  cfg.m_D = std::max(1, static_cast<int>(std::lround(ln_d)));
  cfg.m_G = 2 * cfg.m_D;
  cfg.gamma = 0.1;
  cfg.data_variant = DataVariant::CorrelatedCoefficients;
  cfg.p_pair = 0.05;
  cfg.Lambda = std::pow(static_cast<double>(d), 0.2);
  cfg.tau_b = 1.0 / (std::sqrt(static_cast<double>(d)) * ln_d);
  cfg.init.a_var = 1.0 / (cfg.m_D * ln_d * ln_d);
  cfg.init.w_var = 1.0 / d;
  cfg.init.v_var = 1.0 / (static_cast<double>(d) * d);
  cfg.regime_margin = ln_d;
  return cfg;
}

ExperimentConfig preset(PresetName name) {
  ExperimentConfig cfg = base_config(100);
  auto& opt = cfg.optimizer;
  auto sgda = [&](double eta_D, double eta_G) {
    opt.kind = OptimizerKind::SGDA;
    opt.eta_D = eta_D;
    opt.eta_G = eta_G;
    cfg.stop = {StopKind::GradNorm, 1e-6, 0};
    cfg.max_iters = 1000000;
    cfg.metric_stride = 1000;
  };
  auto budgeted = [&](OptimizerKind kind, double eta_D, double eta_G, double multiplier) {
    opt.kind = kind;
    opt.eta_D = eta_D;
    opt.eta_G = eta_G;
    const long T1 = fixed_budget(eta_D, multiplier);
    cfg.stop = {StopKind::FixedBudget, 1e-6, T1};
    cfg.max_iters = T1;
    cfg.metric_stride = std::max(1L, T1 / 200);
  };
  switch (name) {
    case PresetName::SgdaBalanced:
      sgda(3e-3, 6e-3);
      break;
    case PresetName::SgdaDiscFast:
      sgda(1e-2, 1e-4);
      break;
    case PresetName::SgdaGenFast:
      sgda(1e-4, 1e-1);
      break;
    case PresetName::Nsgda:
      budgeted(OptimizerKind::NSGDA, 5e-3, 1e-3, 250.0);
      break;
    case PresetName::AdamGames:
      budgeted(OptimizerKind::AdamGames, 1e-3, 5e-4, 10.0);
      break;
    case PresetName::AdaNsgda:
      budgeted(OptimizerKind::AdaNSGDA, 1e-2, 5e-3, 50.0);
      break;
    case PresetName::AdaDir:
      budgeted(OptimizerKind::AdaDir, 10.0, 10.0, 1000.0);
      break;
  }
  return cfg;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Converged: return "Converged";
    case StopReason::BudgetExhausted: return "BudgetExhausted";
    case StopReason::Diverged: return "Diverged";
  }
  return "unknown";
}

Problem make_problem(const ExperimentConfig& cfg) {
  RngStream rng(cfg.seed, kModesStream);
  Modes modes = make_modes(cfg.d, cfg.gamma, cfg.data_variant, rng);
  DataDistribution data(modes.u1, modes.u2, cfg.gamma, cfg.data_variant);
  LatentDistribution latent(cfg.m_G, cfg.p_pair);
  OutcomeTable data_table = enumerate_data(data);
  OutcomeTable latent_table = enumerate_latent(latent);
  return {std::move(modes), std::move(data), latent, std::move(data_table), std::move(latent_table)};
}

GanParams init_params(const ExperimentConfig& cfg, RngStream& rng) {
  GanParams p;
  p.W = Mat(cfg.m_D, cfg.d);
  p.V = Mat(cfg.m_G, cfg.d);
  for (int i = 0; i < cfg.m_D; ++i) p.W.row(i) = gaussian_vec(rng, cfg.d, cfg.init.w_var).transpose();
  for (int j = 0; j < cfg.m_G; ++j) p.V.row(j) = gaussian_vec(rng, cfg.d, cfg.init.v_var).transpose();
  p.a = std::sqrt(cfg.init.a_var) * rng.normal();
  p.b = 0.0;
  p.tau_b = cfg.tau_b;
  p.Lambda = cfg.Lambda;
  return p;
}

double global_grad_norm(const GradientBundle& g) {
  return grad_norms(g, NormGrouping::Global).front().second;
}

namespace {

MetricsRow make_row(long t, const GanParams& p, const GradientBundle& eg, const GradientBundle& g0,
                    const ExperimentConfig& cfg, const Problem& pb, const GanParams& init) {
  MetricsRow row;
  row.t = t;
  ModeCorrelations corr = mode_correlations(p, pb.modes);
  row.corr_w = std::move(corr.corr_w);
  row.corr_v = std::move(corr.corr_v);
  std::tie(row.rel_update_D, row.rel_update_G) = relative_updates(p, eg, cfg.optimizer);
  try {
    row.grad_ratio = gradient_ratio(eg, g0);
  } catch (const std::invalid_argument&) {
    row.grad_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  row.loss_exp = expected_loss(p, pb.data_table, pb.latent_table);
  row.grad_norm = global_grad_norm(eg);
  row.a = p.a;
  row.b = p.b;
  if (cfg.record_basis) row.basis = basis_coefficients(p, init, pb.modes);
  return row;
}

}  // namespace

RunRecord train(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.config = cfg;
  const Problem pb = make_problem(cfg);
  RngStream init_rng(cfg.seed, kInitStream);
  RngStream sample_rng(cfg.seed, kSamplingStream);

  GanParams p = init_params(cfg, init_rng);
  rec.init_params = p;
  rec.regime = classify_regime(cfg.optimizer, p, pb.modes, cfg.regime_margin);
  const GradientBundle g0 = expected_gradient(p, pb.data_table, pb.latent_table);
  Stepper stepper(cfg.optimizer, p);

  long budget = cfg.max_iters;
  if (cfg.stop.kind == StopKind::FixedBudget) budget = std::min(budget, cfg.stop.T1);

  for (long t = 0;; ++t) {
    const bool stride_row = t % cfg.metric_stride == 0;
    if (stride_row || t >= budget) {
      const GradientBundle eg = expected_gradient(p, pb.data_table, pb.latent_table);
      rec.rows.push_back(make_row(t, p, eg, g0, cfg, pb, rec.init_params));
      if (cfg.stop.kind == StopKind::GradNorm && rec.rows.back().grad_norm <= cfg.stop.tol) {
        rec.stop_reason = StopReason::Converged;
        rec.stop_iteration = t;
        break;
      }
    }
    if (t >= budget) {
      rec.stop_reason = StopReason::BudgetExhausted;
      rec.stop_iteration = t;
      break;
    }
    const Vec X = sample_data(pb.data, sample_rng);
    const Vec z = sample_latent(pb.latent, sample_rng);
    GanParams next = stepper.step(p, sample_gradient(p, X, z));
    if (!next.all_finite()) {
      rec.stop_reason = StopReason::Diverged;
      rec.stop_iteration = t + 1;
      break;
    }
    p = std::move(next);
  }

  rec.final_params = p;
  rec.verdict = classify_run(p, pb.modes, pb.latent_table, cfg.thresholds, &rec.init_params);
  rec.verdict.regime = rec.regime.regime;
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<double> log_space(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > 0.0) || n < 1) throw std::invalid_argument("log_space: bad range");
  std::vector<double> out;
  if (n == 1) return {lo};
  const double step = (std::log(hi) - std::log(lo)) / (n - 1);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(std::log(lo) + step * i));
  out.back() = hi;
  return out;
}

SweepResult sweep(const SweepSpec& spec, int threads) {
  if (spec.eta_D_grid.empty() || spec.eta_G_grid.empty() || spec.seeds.empty()) {
    throw std::invalid_argument("sweep: grids and seeds must be nonempty");
  }
  SweepResult result;
  for (double eta_D : spec.eta_D_grid)
    for (double eta_G : spec.eta_G_grid)
      for (auto seed : spec.seeds) result.cells.push_back({eta_D, eta_G, seed, std::nullopt, {}});

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < result.cells.size(); k = next++) {
      SweepCell& cell = result.cells[k];
      ExperimentConfig cfg = spec.base;
      cfg.optimizer.eta_D = cell.eta_D;
      cfg.optimizer.eta_G = cell.eta_G;
      cfg.seed = cell.seed;
      try {
        cell.record = train(cfg);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(threads, static_cast<int>(result.cells.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::size_t per_cell = spec.seeds.size();
  for (std::size_t base = 0; base < result.cells.size(); base += per_cell) {
    SweepAggregate agg;
    agg.eta_D = result.cells[base].eta_D;
    agg.eta_G = result.cells[base].eta_G;
    std::map<RunLabel, int> labels;
    std::map<Regime, int> regimes;
    double ratio_sum = 0.0;
    for (std::size_t k = base; k < base + per_cell; ++k) {
      const auto& cell = result.cells[k];
      if (!cell.record) {
        ++agg.failures;
        continue;
      }
      ++agg.runs;
      ++labels[cell.record->verdict.label];
      ++regimes[cell.record->regime.regime];
      ratio_sum += cell.record->rows.back().grad_ratio;
    }
    // Ties resolve to the first label in enum order.
    int best = -1;
    for (auto [label, count] : labels) {
      if (count > best) {
        best = count;
        agg.majority = label;
      }
    }
    best = -1;
    for (auto [regime, count] : regimes) {
      if (count > best) {
        best = count;
        agg.regime = regime;
      }
    }
    agg.mean_final_grad_ratio = agg.runs ? ratio_sum / agg.runs : std::numeric_limits<double>::quiet_NaN();
    result.aggregates.push_back(agg);
  }
  return result;
}

}  // namespace minmax_lab
