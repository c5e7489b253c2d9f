#include "minmax_lab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace minmax_lab {
namespace {

double safe_cosine(const Vec& x, const Vec& y, bool* zero) {
  if (!(x.norm() > 0.0)) {
    if (zero) *zero = true;
    return 0.0;
  }
  return cosine(x, y);
}

double signum(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

ModeCorrelations mode_correlations(const GanParams& params, const Modes& modes) {
  ModeCorrelations out;
  out.corr_w = Mat::Zero(params.m_D(), 2);
  out.corr_v = Mat::Zero(params.m_G(), 2);
  out.zero_w.assign(static_cast<std::size_t>(params.m_D()), false);
  out.zero_v.assign(static_cast<std::size_t>(params.m_G()), false);
  for (int i = 0; i < params.m_D(); ++i) {
    const Vec w = params.W.row(i).transpose();
    bool zero = false;
    out.corr_w(i, 0) = safe_cosine(w, modes.u1, &zero);
    out.corr_w(i, 1) = safe_cosine(w, modes.u2, &zero);
    out.zero_w[static_cast<std::size_t>(i)] = zero;
  }
  for (int j = 0; j < params.m_G(); ++j) {
    const Vec v = params.V.row(j).transpose();
    bool zero = false;
    out.corr_v(j, 0) = safe_cosine(v, modes.u1, &zero);
    out.corr_v(j, 1) = safe_cosine(v, modes.u2, &zero);
    out.zero_v[static_cast<std::size_t>(j)] = zero;
  }
  return out;
}

BasisSnapshot basis_coefficients(const GanParams& params, const GanParams& init,
                                 const Modes& modes) {
  std::vector<Vec> basis;
  std::vector<std::string> labels;
  for (int i = 0; i < init.m_D(); ++i) {
    basis.push_back(init.W.row(i).transpose());
    labels.push_back("w" + std::to_string(i));
  }
  for (int j = 0; j < init.m_G(); ++j) {
    basis.push_back(init.V.row(j).transpose());
    labels.push_back("v" + std::to_string(j));
  }
  basis.push_back(modes.u1);
  labels.push_back("u1");
  basis.push_back(modes.u2);
  labels.push_back("u2");

  BasisSnapshot snap;
  for (int i = 0; i < params.m_D(); ++i) {
    snap.w.push_back(decompose(params.W.row(i).transpose(), basis, labels));
  }
  for (int j = 0; j < params.m_G(); ++j) {
    snap.v.push_back(decompose(params.V.row(j).transpose(), basis, labels));
  }
  return snap;
}

double discriminator_param_norm(const GanParams& params) {
  return std::abs(params.a) + std::abs(params.b) + params.W.norm();
}

std::pair<double, double> relative_updates(const GanParams& params, const GradientBundle& g,
                                           const OptimizerConfig& cfg) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const double d_norm = discriminator_param_norm(params);
  const double g_norm = params.V.norm();
  const double rel_d = d_norm > 0.0 ? cfg.eta_D * discriminator_norm(g) / d_norm : kInf;
  const double rel_g = g_norm > 0.0 ? cfg.eta_G * generator_norm(g) / g_norm : kInf;
  return {rel_d, rel_g};
}

double gradient_ratio(const GradientBundle& g_t, const GradientBundle& g_0) {
  const double base_g = generator_norm(g_0);
  const double base_d = discriminator_norm(g_0);
  if (!(base_g > 0.0) || !(base_d > 0.0)) {
    throw std::invalid_argument("gradient_ratio: baseline gradient has a zero player norm");
  }
  return generator_norm(g_t) / base_g + discriminator_norm(g_t) / base_d;
}

std::string to_string(RunLabel label) {
  switch (label) {
    case RunLabel::ModeCollapse: return "ModeCollapse";
    case RunLabel::NoiseOnly: return "NoiseOnly";
    case RunLabel::ModeRecovery: return "ModeRecovery";
    case RunLabel::Mixed: return "Mixed";
  }
  return "Mixed";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::DiscriminatorFast: return "DiscriminatorFast";
    case Regime::Balanced: return "Balanced";
    case Regime::GeneratorFast: return "GeneratorFast";
  }
  return "Balanced";
}

RunLabel run_label_from_string(const std::string& s) {
  for (auto l : {RunLabel::ModeCollapse, RunLabel::NoiseOnly, RunLabel::ModeRecovery, RunLabel::Mixed}) {
    if (to_string(l) == s) return l;
  }
  throw std::invalid_argument("unknown run label: " + s);
}

Regime regime_from_string(const std::string& s) {
  for (auto r : {Regime::DiscriminatorFast, Regime::Balanced, Regime::GeneratorFast}) {
    if (to_string(r) == s) return r;
  }
  throw std::invalid_argument("unknown regime: " + s);
}

RunVerdict classify_run(const GanParams& final_params, const Modes& modes,
                        const OutcomeTable& latent, const VerdictThresholds& thresholds,
                        const GanParams* init) {
  RunVerdict verdict;
  const Vec avg = (modes.u1 + modes.u2).normalized();
  const Vec* mode_vecs[2] = {&modes.u1, &modes.u2};

  std::vector<Vec> noise_basis;
  if (init) {
    for (int i = 0; i < init->m_D(); ++i) noise_basis.push_back(init->W.row(i).transpose());
  }

  for (const auto& o : latent) {
    const Vec G = generator_forward(final_params, o.value);
    const double n = G.norm();
    if (!(n > 0.0)) {
      ++verdict.excluded_latents;
      continue;
    }
    const Vec g_hat = G / n;
    for (int l = 0; l < 2; ++l) {
      if ((g_hat - *mode_vecs[l]).norm() <= thresholds.near_mode) {
        verdict.per_mode_coverage[l] += o.probability;
      }
      verdict.max_mode_cosine = std::max(verdict.max_mode_cosine, std::abs(g_hat.dot(*mode_vecs[l])));
    }
    verdict.collapse_cosine = std::max(verdict.collapse_cosine, g_hat.dot(avg));
    if (!noise_basis.empty()) {
      const double r = decompose(g_hat, noise_basis).residual_norm;
      verdict.noise_residual = std::max(verdict.noise_residual.value_or(0.0), r);
    }
  }
  for (double& c : verdict.per_mode_coverage) c = std::clamp(c, 0.0, 1.0);

  const double m_G = static_cast<double>(final_params.m_G());
  const double recovery_floor = 1.0 / (4.0 * m_G);
  const double c1 = verdict.per_mode_coverage[0];
  const double c2 = verdict.per_mode_coverage[1];
  if (c1 >= recovery_floor && c2 >= recovery_floor) {
    verdict.label = RunLabel::ModeRecovery;
  } else if (verdict.collapse_cosine >= thresholds.collapse_cos && c1 == 0.0 && c2 == 0.0) {
    verdict.label = RunLabel::ModeCollapse;
  } else if (verdict.max_mode_cosine <= thresholds.noise_cos) {
    verdict.label = RunLabel::NoiseOnly;
  } else {
    verdict.label = RunLabel::Mixed;
  }
  return verdict;
}

namespace {

double max_corr_w(const MetricsRow& row) { return row.corr_w.size() ? row.corr_w.maxCoeff() : 0.0; }

}  // namespace

std::vector<PhaseBoundary> detect_phases(const std::vector<MetricsRow>& series,
                                         const PhaseThresholds& thresholds) {
  if (series.empty()) throw std::invalid_argument("detect_phases: empty series");
  std::vector<PhaseBoundary> phases{{1, series.front().t}};

  double peak = -1.0;
  for (const auto& row : series) peak = std::max(peak, max_corr_w(row));

  std::size_t k = 0;
  for (; k < series.size(); ++k) {
    const auto& row = series[k];
    if (k > 0 && peak > 0.0 && max_corr_w(row) >= thresholds.peak_fraction * peak &&
        row.rel_update_G < thresholds.quiet_generator * row.rel_update_D) {
      phases.push_back({2, row.t});
      break;
    }
  }
  if (phases.size() < 2) return phases;
  for (++k; k < series.size(); ++k) {
    const auto& row = series[k];
    if (row.rel_update_G >= row.rel_update_D) {
      phases.push_back({3, row.t});
      break;
    }
  }
  return phases;
}

std::optional<FirstModeEvent> first_mode_learned(const std::vector<MetricsRow>& series,
                                                 double level) {
  for (const auto& row : series) {
    if (row.corr_w.size() == 0) continue;
    FirstModeEvent ev;
    ev.t = row.t;
    for (int l = 0; l < 2; ++l) ev.mode_above[l] = row.corr_w.col(l).maxCoeff() > level;
    if (ev.mode_above[0] || ev.mode_above[1]) return ev;
  }
  return std::nullopt;
}

RegimeReport classify_regime(const OptimizerConfig& cfg, const GanParams& init,
                             const Modes& modes, double margin) {
  RegimeReport r;
  r.A = -std::numeric_limits<double>::infinity();
  r.B = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < init.m_D(); ++i) {
    const Vec w = init.W.row(i).transpose();
    for (const Vec* u : {&modes.u1, &modes.u2}) {
      const double c = w.dot(*u);
      r.A = std::max(r.A, 0.5 * sigma_prime(c, init.Lambda) * signum(c));
    }
    for (int j = 0; j < init.m_G(); ++j) {
      const double c = w.dot(init.V.row(j).transpose());
      r.B = std::max(r.B, sigma_prime(c, init.Lambda) * signum(c) / init.m_G());
    }
  }
  const double disc = cfg.eta_D * r.A;
  const double gen = cfg.eta_G * r.B;
  if (gen < disc / margin) {
    r.regime = Regime::DiscriminatorFast;
  } else if (disc < gen) {
    r.regime = Regime::GeneratorFast;
  } else {
    r.regime = Regime::Balanced;
  }
  return r;
}

}  // namespace minmax_lab
