#include "minmax_lab/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax_lab {
namespace {

double safe_inverse(double n) { return n > 0.0 ? 1.0 / n : 0.0; }

// Scales every tensor of g by the factor chosen for its group.
GradientBundle scale_groups(const GradientBundle& g, const GroupNorms& factor) {
  GradientBundle out = g;
  out.g_a *= factor.a;
  out.g_b *= factor.b;
  out.g_W *= factor.W;
  out.g_V *= factor.V;
  return out;
}

template <typename Fn>
GroupNorms map_groups(const GroupNorms& x, const GroupNorms& y, Fn fn) {
  return {fn(x.a, y.a), fn(x.b, y.b), fn(x.W, y.W), fn(x.V, y.V)};
}

void expect_kind(const OptimizerConfig& cfg, OptimizerKind kind, const char* who) {
  if (cfg.kind != kind) throw std::invalid_argument(std::string(who) + ": optimizer kind mismatch");
}

AdamState advance(const AdamState& state, const GradientBundle& g, const OptimizerConfig& cfg) {
  AdamState next = state;
  next.m1 = cfg.beta1 * state.m1 + g;
  GradientBundle sq = g;
  sq.g_V = g.g_V.cwiseProduct(g.g_V);
  sq.g_W = g.g_W.cwiseProduct(g.g_W);
  sq.g_a = g.g_a * g.g_a;
  sq.g_b = g.g_b * g.g_b;
  next.m2 = cfg.beta2 * state.m2 + sq;
  ++next.step_count;
  return next;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (!(eta_D >= 0.0) || !(eta_G >= 0.0) || !std::isfinite(eta_D) || !std::isfinite(eta_G)) {
    throw std::invalid_argument("optimizer: step sizes must be finite and non-negative");
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("optimizer: beta1, beta2 must lie in [0, 1)");
  }
  if (!(epsilon > 0.0) || !(norm_epsilon > 0.0)) {
    throw std::invalid_argument("optimizer: epsilon and norm_epsilon must be positive");
  }
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::SGDA: return "sgda";
    case OptimizerKind::NSGDA: return "nsgda";
    case OptimizerKind::AdamGames: return "adam";
    case OptimizerKind::AdaNSGDA: return "ada_nsgda";
    case OptimizerKind::AdaDir: return "adadir";
  }
  return "unknown";
}

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  if (name == "sgda") return OptimizerKind::SGDA;
  if (name == "nsgda") return OptimizerKind::NSGDA;
  if (name == "adam") return OptimizerKind::AdamGames;
  if (name == "ada_nsgda") return OptimizerKind::AdaNSGDA;
  if (name == "adadir") return OptimizerKind::AdaDir;
  throw std::invalid_argument("unknown optimizer kind: " + name);
}

std::string to_string(NormScope scope) {
  return scope == NormScope::Global ? "global" : "layerwise";
}

NormScope norm_scope_from_string(const std::string& name) {
  if (name == "global") return NormScope::Global;
  if (name == "layerwise") return NormScope::LayerWise;
  throw std::invalid_argument("unknown normalization scope: " + name);
}

AdamState AdamState::zeros_like(const GanParams& params) {
  return {GradientBundle::zeros_like(params), GradientBundle::zeros_like(params), 0};
}

GradientBundle AdamState::oracle(double epsilon) const {
  GradientBundle a = m1;
  a.g_V = m1.g_V.array() / (m2.g_V.array() + epsilon).sqrt();
  a.g_W = m1.g_W.array() / (m2.g_W.array() + epsilon).sqrt();
  a.g_a = m1.g_a / std::sqrt(m2.g_a + epsilon);
  a.g_b = m1.g_b / std::sqrt(m2.g_b + epsilon);
  return a;
}

GroupNorms group_norms(const GradientBundle& g, NormScope scope) {
  if (scope == NormScope::LayerWise) {
    return {std::abs(g.g_a), std::abs(g.g_b), g.g_W.norm(), g.g_V.norm()};
  }
  const double d = discriminator_norm(g);
  return {d, d, d, generator_norm(g)};
}

GanParams apply_direction(const GanParams& params, const GradientBundle& dir, double eta_D,
                          double eta_G) {
  GanParams out = params;
  out.W += eta_D * dir.g_W;
  out.a += eta_D * dir.g_a;
  out.b += eta_D * dir.g_b;
  out.V -= eta_G * dir.g_V;
  return out;
}

GanParams sgda_step(const GanParams& params, const GradientBundle& g, const OptimizerConfig& cfg) {
  expect_kind(cfg, OptimizerKind::SGDA, "sgda_step");
  return apply_direction(params, g, cfg.eta_D, cfg.eta_G);
}

GanParams nsgda_step(const GanParams& params, const GradientBundle& g, const OptimizerConfig& cfg) {
  expect_kind(cfg, OptimizerKind::NSGDA, "nsgda_step");
  const GroupNorms n = group_norms(g, cfg.scope);
  const GroupNorms inv{safe_inverse(n.a), safe_inverse(n.b), safe_inverse(n.W), safe_inverse(n.V)};
  return apply_direction(params, scale_groups(g, inv), cfg.eta_D, cfg.eta_G);
}

std::pair<GanParams, AdamState> adam_games_step(const GanParams& params, const GradientBundle& g,
                                                const AdamState& state,
                                                const OptimizerConfig& cfg) {
  expect_kind(cfg, OptimizerKind::AdamGames, "adam_games_step");
  AdamState next = advance(state, g, cfg);
  const GradientBundle A = next.oracle(cfg.epsilon);
  return {apply_direction(params, A, cfg.eta_D, cfg.eta_G), std::move(next)};
}

std::pair<GanParams, AdamState> ada_nsgda_step(const GanParams& params, const GradientBundle& g,
                                               const AdamState& state,
                                               const OptimizerConfig& cfg) {
  expect_kind(cfg, OptimizerKind::AdaNSGDA, "ada_nsgda_step");
  AdamState next = advance(state, g, cfg);
  const GradientBundle A = cfg.lagged_magnitude ? state.oracle(cfg.epsilon) : next.oracle(cfg.epsilon);
  const GroupNorms factor =
      map_groups(group_norms(A, cfg.scope), group_norms(g, cfg.scope),
                 [&](double a_norm, double g_norm) { return a_norm / (g_norm + cfg.norm_epsilon); });
  return {apply_direction(params, scale_groups(g, factor), cfg.eta_D, cfg.eta_G), std::move(next)};
}

std::pair<GanParams, AdamState> adadir_step(const GanParams& params, const GradientBundle& g,
                                            const AdamState& state, const OptimizerConfig& cfg) {
  expect_kind(cfg, OptimizerKind::AdaDir, "adadir_step");
  AdamState next = advance(state, g, cfg);
  const GradientBundle A = next.oracle(cfg.epsilon);
  const GroupNorms factor =
      map_groups(group_norms(g, cfg.scope), group_norms(A, cfg.scope),
                 [&](double g_norm, double a_norm) { return g_norm / (a_norm + cfg.norm_epsilon); });
  return {apply_direction(params, scale_groups(A, factor), cfg.eta_D, cfg.eta_G), std::move(next)};
}

Stepper::Stepper(OptimizerConfig cfg, const GanParams& params)
    : cfg_(cfg), state_(AdamState::zeros_like(params)) {
  cfg_.validate();
}

GanParams Stepper::step(const GanParams& params, const GradientBundle& g) {
  switch (cfg_.kind) {
    case OptimizerKind::SGDA:
      return sgda_step(params, g, cfg_);
    case OptimizerKind::NSGDA:
      return nsgda_step(params, g, cfg_);
    case OptimizerKind::AdamGames: {
      auto [p, s] = adam_games_step(params, g, state_, cfg_);
      state_ = std::move(s);
      return p;
    }
    case OptimizerKind::AdaNSGDA: {
      auto [p, s] = ada_nsgda_step(params, g, state_, cfg_);
      state_ = std::move(s);
      return p;
    }
    case OptimizerKind::AdaDir: {
      auto [p, s] = adadir_step(params, g, state_, cfg_);
      state_ = std::move(s);
      return p;
    }
  }
  throw std::logic_error("Stepper: unknown optimizer kind");
}

}  // namespace minmax_lab
