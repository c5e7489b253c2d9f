#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minmax_lab/analysis.hpp"

namespace minmax_lab {

struct InitVariances {
  double a_var = 0.0;
  double w_var = 0.0;
  double v_var = 0.0;
};

enum class StopKind { GradNorm, FixedBudget };

struct StopRule {
  StopKind kind = StopKind::GradNorm;
  double tol = 1e-6;  // GradNorm: global expected-gradient norm threshold
  long T1 = 0;        // FixedBudget: number of steps
};

struct ExperimentConfig {
  int d = 100;
  int m_D = 5;
  int m_G = 10;
  double gamma = 0.1;
  DataVariant data_variant = DataVariant::CorrelatedCoefficients;
  double p_pair = 0.05;
  double Lambda = 0.0;
  double tau_b = 0.0;
  InitVariances init;
  OptimizerConfig optimizer;
  long max_iters = 1000000;
  StopRule stop;
  long metric_stride = 100;
  std::uint64_t seed = 0;
  VerdictThresholds thresholds;
  double regime_margin = 0.0;
  bool record_basis = false;

  // Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

enum class PresetName { SgdaBalanced, SgdaDiscFast, SgdaGenFast, Nsgda, AdamGames, AdaNsgda, AdaDir };

std::string to_string(PresetName name);
PresetName preset_from_string(const std::string& name);
std::vector<PresetName> all_presets();

// Shared defaults for dimension d: m_D = round(ln d), m_G = 2 m_D,
// Lambda = d^0.2, tau_b = 1/(sqrt(d) ln d), a_var = 1/(m_D (ln d)^2),
// w_var = 1/d, v_var = 1/d^2.
ExperimentConfig base_config(int d = 100);
ExperimentConfig preset(PresetName name);

// Fixed-budget length ceil(multiplier / eta_D).
long fixed_budget(double eta_D, double multiplier);

enum class StopReason { Converged, BudgetExhausted, Diverged };
std::string to_string(StopReason reason);

// Every random draw of a run comes from one of these streams of the seed.
enum StreamId : std::uint64_t { kModesStream = 0, kInitStream = 1, kSamplingStream = 2 };

struct Problem {
  Modes modes;
  DataDistribution data;
  LatentDistribution latent;
  OutcomeTable data_table;
  OutcomeTable latent_table;
};

Problem make_problem(const ExperimentConfig& cfg);

// a ~ N(0, a_var), b = 0, w_i ~ N(0, w_var I), v_j ~ N(0, v_var I).
GanParams init_params(const ExperimentConfig& cfg, RngStream& rng);

struct RunRecord {
  ExperimentConfig config;
  std::vector<MetricsRow> rows;
  RunVerdict verdict;
  RegimeReport regime;
  StopReason stop_reason = StopReason::BudgetExhausted;
  long stop_iteration = 0;
  GanParams init_params;
  GanParams final_params;
  double wall_time = 0.0;
};

RunRecord train(const ExperimentConfig& cfg);

struct SweepSpec {
  std::vector<double> eta_D_grid;
  std::vector<double> eta_G_grid;
  std::vector<std::uint64_t> seeds;
  ExperimentConfig base;
};

std::vector<double> log_space(double lo, double hi, int n);

struct SweepCell {
  double eta_D = 0.0;
  double eta_G = 0.0;
  std::uint64_t seed = 0;
  std::optional<RunRecord> record;
  std::string error;  // non-empty when train() threw
};

struct SweepAggregate {
  double eta_D = 0.0;
  double eta_G = 0.0;
  RunLabel majority = RunLabel::Mixed;
  Regime regime = Regime::Balanced;  // majority over seeds
  double mean_final_grad_ratio = 0.0;
  int runs = 0;
  int failures = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // eta_D-major, then eta_G, then seed
  std::vector<SweepAggregate> aggregates;
};

// Runs every (eta_D, eta_G, seed) cell on up to `threads` workers. Results
// are stored by cell index, so the output does not depend on scheduling.
SweepResult sweep(const SweepSpec& spec, int threads = 1);

// Global norm used by the convergence test.
double global_grad_norm(const GradientBundle& g);

}  // namespace minmax_lab
