#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmax_lab/distributions.hpp"
#include "minmax_lab/gradients.hpp"
#include "minmax_lab/optimizers.hpp"

namespace minmax_lab {

// Cosine of every discriminator and generator row against u1 (column 0) and
// u2 (column 1). Zero rows report 0 and are listed in the *_zero masks.
struct ModeCorrelations {
  Mat corr_w;
  Mat corr_v;
  std::vector<bool> zero_w;
  std::vector<bool> zero_v;
};

ModeCorrelations mode_correlations(const GanParams& params, const Modes& modes);

// Coefficients of every weight row on the normalized initial rows and modes.
struct BasisSnapshot {
  std::vector<BasisDecomposition> w;
  std::vector<BasisDecomposition> v;
};

BasisSnapshot basis_coefficients(const GanParams& params, const GanParams& init,
                                 const Modes& modes);

struct MetricsRow {
  long t = 0;
  Mat corr_w;
  Mat corr_v;
  double rel_update_D = 0.0;
  double rel_update_G = 0.0;
  double grad_ratio = 0.0;
  double loss_exp = 0.0;
  double grad_norm = 0.0;  // Global norm of the expected gradient
  double a = 0.0;
  double b = 0.0;
  std::optional<BasisSnapshot> basis;
};

// |a| + |b| + |W|_F, the parameter-side counterpart of discriminator_norm.
double discriminator_param_norm(const GanParams& params);

// (eta_D |g_D| / |D|, eta_G |g_G| / |V|) with player norms. A zero parameter
// norm yields +infinity for that component.
std::pair<double, double> relative_updates(const GanParams& params, const GradientBundle& g,
                                           const OptimizerConfig& cfg);

// |g_G^t| / |g_G^0| + |g_D^t| / |g_D^0|. Throws std::invalid_argument when a
// baseline player norm is zero.
double gradient_ratio(const GradientBundle& g_t, const GradientBundle& g_0);

enum class RunLabel { ModeCollapse, NoiseOnly, ModeRecovery, Mixed };
enum class Regime { DiscriminatorFast, Balanced, GeneratorFast };

std::string to_string(RunLabel label);
std::string to_string(Regime regime);
RunLabel run_label_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

struct VerdictThresholds {
  double near_mode = 0.3;
  double collapse_cos = 0.95;
  double noise_cos = 0.4;
};

struct RunVerdict {
  RunLabel label = RunLabel::Mixed;
  double per_mode_coverage[2] = {0.0, 0.0};
  // max_z cos(G(z), u1 + u2)
  double collapse_cosine = -1.0;
  // max_{z,l} |cos(G(z), u_l)|
  double max_mode_cosine = 0.0;
  Regime regime = Regime::Balanced;
  // Latents with G(z) = 0, left out of every statistic.
  int excluded_latents = 0;
  // Largest residual of G(z) against span{w^(0)} relative to |G(z)|, when an
  // initial snapshot was supplied; diagnostic only.
  std::optional<double> noise_residual;
};

// Classifies the generator by where its normalized outputs point, using the
// exact latent support. The regime field is left at its default; callers that
// know the initialization fill it from classify_regime.
RunVerdict classify_run(const GanParams& final_params, const Modes& modes,
                        const OutcomeTable& latent, const VerdictThresholds& thresholds = {},
                        const GanParams* init = nullptr);

// Start iteration of each detected phase (1, 2, 3) in order.
struct PhaseBoundary {
  int phase;
  long t_start;
};

struct PhaseThresholds {
  double peak_fraction = 0.9;   // max corr_w must reach this share of its series peak
  double quiet_generator = 0.1; // rel_update_G below this multiple of rel_update_D
};

std::vector<PhaseBoundary> detect_phases(const std::vector<MetricsRow>& series,
                                         const PhaseThresholds& thresholds = {});

// First row at which some discriminator neuron's correlation with either
// mode exceeds level; reports which mode(s) were above level then.
struct FirstModeEvent {
  long t = -1;
  bool mode_above[2] = {false, false};
  bool exactly_one() const { return mode_above[0] != mode_above[1]; }
};

std::optional<FirstModeEvent> first_mode_learned(const std::vector<MetricsRow>& series,
                                                 double level = 0.9);

struct RegimeReport {
  double A = 0.0;
  double B = 0.0;
  Regime regime = Regime::Balanced;
};

// Compares eta_D A against eta_G B for the initial weights:
//   A = max_{i,l} 1/2 sigma'(<w_i,u_l>) sign(<w_i,u_l>)
//   B = max_{i,j} 1/m_G sigma'(<w_i,v_j>) sign(<w_i,v_j>)
// DiscriminatorFast if eta_G B < eta_D A / margin, GeneratorFast if
// eta_D A < eta_G B, Balanced in between.
RegimeReport classify_regime(const OptimizerConfig& cfg, const GanParams& init,
                             const Modes& modes, double margin);

}  // namespace minmax_lab
