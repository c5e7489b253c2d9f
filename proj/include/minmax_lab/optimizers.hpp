#pragma once

#include <string>
#include <utility>

#include "minmax_lab/gradients.hpp"

namespace minmax_lab {

enum class OptimizerKind { SGDA, NSGDA, AdamGames, AdaNSGDA, AdaDir };

// Global: one group per player, {a, b, W} and {V}; the discriminator group
// norm is |.|_a + |.|_b + |.|_W,F. LayerWise: each of a, b, W, V alone.
enum class NormScope { Global, LayerWise };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::SGDA;
  NormScope scope = NormScope::Global;
  double eta_D = 0.01;
  double eta_G = 0.01;
  double beta1 = 0.0;
  double beta2 = 0.9;
  double epsilon = 1e-8;
  double norm_epsilon = 1e-8;
  // Ada-nSGDA magnitude from the Adam oracle before this step's gradient is
  // folded in, instead of after.
  bool lagged_magnitude = false;

  // Throws std::invalid_argument on out-of-range hyperparameters.
  void validate() const;
};

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_kind_from_string(const std::string& name);
std::string to_string(NormScope scope);
NormScope norm_scope_from_string(const std::string& name);

// First and second moment accumulators of the game version of Adam: no
// (1 - beta) weights and no bias correction.
struct AdamState {
  GradientBundle m1;
  GradientBundle m2;
  std::size_t step_count = 0;

  static AdamState zeros_like(const GanParams& params);
  // Elementwise m1 / sqrt(m2 + epsilon).
  GradientBundle oracle(double epsilon) const;
};

// Per-tensor group norms under the scope; in Global scope a, b and W all
// report the discriminator player norm.
struct GroupNorms {
  double a = 0.0;
  double b = 0.0;
  double W = 0.0;
  double V = 0.0;
};
GroupNorms group_norms(const GradientBundle& g, NormScope scope);

// Applies W-side += eta_D * dir, V -= eta_G * dir.
GanParams apply_direction(const GanParams& params, const GradientBundle& dir, double eta_D,
                          double eta_G);

GanParams sgda_step(const GanParams& params, const GradientBundle& g, const OptimizerConfig& cfg);

// Each group moves by exactly eta in its group norm; a zero-gradient group
// stays put.
GanParams nsgda_step(const GanParams& params, const GradientBundle& g, const OptimizerConfig& cfg);

std::pair<GanParams, AdamState> adam_games_step(const GanParams& params, const GradientBundle& g,
                                                const AdamState& state, const OptimizerConfig& cfg);

// Adam magnitude grafted onto the SGDA direction.
std::pair<GanParams, AdamState> ada_nsgda_step(const GanParams& params, const GradientBundle& g,
                                               const AdamState& state, const OptimizerConfig& cfg);

// SGDA magnitude grafted onto the Adam direction.
std::pair<GanParams, AdamState> adadir_step(const GanParams& params, const GradientBundle& g,
                                            const AdamState& state, const OptimizerConfig& cfg);

// Dispatches to the configured rule and owns the Adam state across steps.
class Stepper {
 public:
  Stepper(OptimizerConfig cfg, const GanParams& params);

  GanParams step(const GanParams& params, const GradientBundle& g);

  const OptimizerConfig& config() const { return cfg_; }
  const AdamState& state() const { return state_; }

 private:
  OptimizerConfig cfg_;
  AdamState state_;
};

}  // namespace minmax_lab
