#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "minmax_lab/distributions.hpp"
#include "minmax_lab/model.hpp"

namespace minmax_lab {

// Gradient of the 1-sample objective L with respect to every trainable
// symbol. Signs are those of L itself; the optimizers own ascent/descent.
struct GradientBundle {
  Mat g_V;
  Mat g_W;
  double g_a = 0.0;
  double g_b = 0.0;

  static GradientBundle zeros_like(const GanParams& params);

  GradientBundle& operator+=(const GradientBundle& o);
  GradientBundle& operator*=(double s);
  friend GradientBundle operator+(GradientBundle l, const GradientBundle& r) { return l += r; }
  friend GradientBundle operator*(double s, GradientBundle g) { return g *= s; }

  bool all_finite() const;
};

// Contribution of the real sample X (touches a, b, W only).
GradientBundle real_term_gradient(const GanParams& params, const Vec& X);
// Contribution of the latent z (touches a, b, W and the active rows of V).
GradientBundle fake_term_gradient(const GanParams& params, const Vec& z);

// Closed-form gradient of L(X, z); equals real_term + fake_term.
GradientBundle sample_gradient(const GanParams& params, const Vec& X, const Vec& z);

using Objective = std::function<double(const GanParams&)>;

// Central differences of an arbitrary objective over every scalar in
// (V, W, a, b). Throws std::invalid_argument unless step > 0.
GradientBundle fd_gradient(const Objective& objective, const GanParams& params, double step);

inline constexpr double kDefaultFdStep = 1e-5;

GradientBundle fd_gradient(const GanParams& params, const Vec& X, const Vec& z,
                           double step = kDefaultFdStep);

// Exact E_{X,z}[grad L] over the finite supports, X and z independent.
// Outcomes are summed in table order.
GradientBundle expected_gradient(const GanParams& params, const OutcomeTable& data,
                                 const OutcomeTable& latent);

double expected_loss(const GanParams& params, const OutcomeTable& data,
                     const OutcomeTable& latent);

enum class NormGrouping { Global, PerPlayer, PerLayer };

// PerPlayer: {discriminator, generator} where the discriminator norm is the
// sum |g_a| + |g_b| + |g_W|_F. PerLayer: {a, b, W, V}. Global: the sum of the
// two player norms.
std::vector<std::pair<std::string, double>> grad_norms(const GradientBundle& g,
                                                       NormGrouping grouping);

double discriminator_norm(const GradientBundle& g);
double generator_norm(const GradientBundle& g);

}  // namespace minmax_lab
