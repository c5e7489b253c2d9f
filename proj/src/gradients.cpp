#include "minmax_lab/gradients.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax_lab {

GradientBundle GradientBundle::zeros_like(const GanParams& params) {
  GradientBundle g;
  g.g_V = Mat::Zero(params.V.rows(), params.V.cols());
  g.g_W = Mat::Zero(params.W.rows(), params.W.cols());
  return g;
}

GradientBundle& GradientBundle::operator+=(const GradientBundle& o) {
  g_V += o.g_V;
  g_W += o.g_W;
  g_a += o.g_a;
  g_b += o.g_b;
  return *this;
}

GradientBundle& GradientBundle::operator*=(double s) {
  g_V *= s;
  g_W *= s;
  g_a *= s;
  g_b *= s;
  return *this;
}

bool GradientBundle::all_finite() const {
  return std::isfinite(g_V.sum() + g_W.sum() + g_a + g_b);
}

GradientBundle real_term_gradient(const GanParams& params, const Vec& X) {
  const ForwardTrace tr = discriminator_forward(params, X);
  // d/df log sigmoid(f) = sigmoid(-f)
  const double s = sigmoid(-tr.f);
  GradientBundle g = GradientBundle::zeros_like(params);
  g.g_a = s * tr.h;
  g.g_b = params.tau_b * s;
  for (int i = 0; i < params.m_D(); ++i) {
    const double c = s * params.a * sigma_prime(tr.preacts[i], params.Lambda);
    if (c != 0.0) g.g_W.row(i) = c * X.transpose();
  }
  return g;
}

GradientBundle fake_term_gradient(const GanParams& params, const Vec& z) {
  const Vec G = generator_forward(params, z);
  const ForwardTrace tr = discriminator_forward(params, G);
  // d/df log sigmoid(-f) = -sigmoid(f)
  const double s = sigmoid(tr.f);
  GradientBundle g = GradientBundle::zeros_like(params);
  g.g_a = -s * tr.h;
  g.g_b = -params.tau_b * s;

  Vec slopes(params.m_D());
  for (int i = 0; i < params.m_D(); ++i) {
    slopes[i] = sigma_prime(tr.preacts[i], params.Lambda);
    const double c = -s * params.a * slopes[i];
    if (c != 0.0) g.g_W.row(i) = c * G.transpose();
  }
  // dL/dG = -s a sum_i sigma'(<w_i,G>) w_i, routed to each active row of V.
  const Vec dG = -s * params.a * (params.W.transpose() * slopes);
  for (int j = 0; j < params.m_G(); ++j) {
    if (z[j] != 0.0) g.g_V.row(j) = z[j] * dG.transpose();
  }
  return g;
}

GradientBundle sample_gradient(const GanParams& params, const Vec& X, const Vec& z) {
  // Fused form of real_term_gradient + fake_term_gradient for the training loop.
  const Vec G = generator_forward(params, z);
  const ForwardTrace real = discriminator_forward(params, X);
  const ForwardTrace fake = discriminator_forward(params, G);
  const double s_real = sigmoid(-real.f);
  const double s_fake = sigmoid(fake.f);

  GradientBundle g;
  g.g_a = s_real * real.h - s_fake * fake.h;
  g.g_b = params.tau_b * (s_real - s_fake);
  Vec c_real(params.m_D()), slopes_fake(params.m_D());
  for (int i = 0; i < params.m_D(); ++i) {
    c_real[i] = s_real * params.a * sigma_prime(real.preacts[i], params.Lambda);
    slopes_fake[i] = sigma_prime(fake.preacts[i], params.Lambda);
  }
  const Vec c_fake = (-s_fake * params.a) * slopes_fake;
  g.g_W.noalias() = c_real * X.transpose();
  g.g_W.noalias() += c_fake * G.transpose();
  const Vec dG = params.W.transpose() * c_fake;
  g.g_V = Mat::Zero(params.m_G(), params.dim());
  for (int j = 0; j < params.m_G(); ++j) {
    if (z[j] != 0.0) g.g_V.row(j) = z[j] * dG.transpose();
  }
  return g;
}

GradientBundle fd_gradient(const Objective& objective, const GanParams& params, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("fd_gradient: step must be positive");
  GradientBundle g = GradientBundle::zeros_like(params);
  GanParams p = params;
  auto central = [&](double& slot) {
    const double orig = slot;
    slot = orig + step;
    const double up = objective(p);
    slot = orig - step;
    const double down = objective(p);
    slot = orig;
    return (up - down) / (2.0 * step);
  };
  for (Eigen::Index j = 0; j < p.V.cols(); ++j)
    for (Eigen::Index i = 0; i < p.V.rows(); ++i) g.g_V(i, j) = central(p.V(i, j));
  for (Eigen::Index j = 0; j < p.W.cols(); ++j)
    for (Eigen::Index i = 0; i < p.W.rows(); ++i) g.g_W(i, j) = central(p.W(i, j));
  g.g_a = central(p.a);
  g.g_b = central(p.b);
  return g;
}

GradientBundle fd_gradient(const GanParams& params, const Vec& X, const Vec& z, double step) {
  return fd_gradient([&](const GanParams& p) { return loss(p, X, z); }, params, step);
}

GradientBundle expected_gradient(const GanParams& params, const OutcomeTable& data,
                                 const OutcomeTable& latent) {
  // The sample gradient separates into a data-only and a latent-only term,
  // so the double sum over independent (X, z) collapses to two single sums.
  GradientBundle g = GradientBundle::zeros_like(params);
  for (const auto& o : data) g += o.probability * real_term_gradient(params, o.value);
  for (const auto& o : latent) g += o.probability * fake_term_gradient(params, o.value);
  return g;
}

double expected_loss(const GanParams& params, const OutcomeTable& data,
                     const OutcomeTable& latent) {
  double acc = 0.0;
  for (const auto& o : data) acc += o.probability * log_sigmoid(discriminator_forward(params, o.value).f);
  for (const auto& o : latent) {
    const Vec G = generator_forward(params, o.value);
    acc += o.probability * log_sigmoid(-discriminator_forward(params, G).f);
  }
  return acc;
}

double discriminator_norm(const GradientBundle& g) {
  return std::abs(g.g_a) + std::abs(g.g_b) + g.g_W.norm();
}

double generator_norm(const GradientBundle& g) { return g.g_V.norm(); }

std::vector<std::pair<std::string, double>> grad_norms(const GradientBundle& g,
                                                       NormGrouping grouping) {
  switch (grouping) {
    case NormGrouping::Global:
      return {{"global", discriminator_norm(g) + generator_norm(g)}};
    case NormGrouping::PerPlayer:
      return {{"discriminator", discriminator_norm(g)}, {"generator", generator_norm(g)}};
    case NormGrouping::PerLayer:
      return {{"a", std::abs(g.g_a)}, {"b", std::abs(g.g_b)}, {"W", g.g_W.norm()}, {"V", g.g_V.norm()}};
  }
  throw std::invalid_argument("grad_norms: unknown grouping");
}

}  // namespace minmax_lab
