#include "minmax_lab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax_lab {

bool GanParams::all_finite() const {
  // Any inf or nan entry makes the sum non-finite.
  return std::isfinite(V.sum() + W.sum() + a + b);
}

double sigma(double z, double Lambda) {
  if (z > Lambda) return 3.0 * Lambda * Lambda * z - 2.0 * Lambda * Lambda * Lambda;
  if (z < -Lambda) return 3.0 * Lambda * Lambda * z + 2.0 * Lambda * Lambda * Lambda;
  return z * z * z;
}

double sigma_prime(double z, double Lambda) {
  if (std::abs(z) <= Lambda) return 3.0 * z * z;
  return 3.0 * Lambda * Lambda;
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double log_sigmoid(double t) {
  if (t >= 0.0) return -std::log1p(std::exp(-t));
  return t - std::log1p(std::exp(t));
}

Vec generator_forward(const GanParams& params, const Vec& z) {
  if (z.size() != params.V.rows()) {
    throw std::invalid_argument("generator_forward: latent size does not match m_G");
  }
  return params.V.transpose() * z;
}

ForwardTrace discriminator_forward(const GanParams& params, const Vec& X) {
  if (X.size() != params.W.cols()) {
    throw std::invalid_argument("discriminator_forward: input size does not match d");
  }
  ForwardTrace tr;
  tr.preacts = params.W * X;
  for (Eigen::Index i = 0; i < tr.preacts.size(); ++i) tr.h += sigma(tr.preacts[i], params.Lambda);
  tr.f = params.a * tr.h + params.tau_b * params.b;
  tr.D = sigmoid(tr.f);
  return tr;
}

double loss(const GanParams& params, const Vec& X, const Vec& z) {
  const double f_real = discriminator_forward(params, X).f;
  const double f_fake = discriminator_forward(params, generator_forward(params, z)).f;
  // 1 - sigmoid(t) = sigmoid(-t)
  return log_sigmoid(f_real) + log_sigmoid(-f_fake);
}

}  // namespace minmax_lab
