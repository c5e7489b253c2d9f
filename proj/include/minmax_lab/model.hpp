#pragma once

#include "minmax_lab/numerics.hpp"

namespace minmax_lab {

// Trainable state of the two-player model. Rows of V are the generator
// neurons v_j, rows of W the discriminator neurons w_i. tau_b scales the
// bias inside the discriminator logit; Lambda truncates the cubic
// activation (+inf gives the plain cubic).
struct GanParams {
  Mat V;
  Mat W;
  double a = 0.0;
  double b = 0.0;
  double tau_b = 1.0;
  double Lambda = 1.0;

  int dim() const { return static_cast<int>(W.cols()); }
  int m_D() const { return static_cast<int>(W.rows()); }
  int m_G() const { return static_cast<int>(V.rows()); }
  bool all_finite() const;
};

struct ForwardTrace {
  Vec preacts;   // <w_i, X>
  double h = 0;  // sum_i sigma(<w_i, X>)
  double f = 0;  // a h + tau_b b
  double D = 0;  // sigmoid(f)
};

// Truncated cubic: z^3 on |z| <= Lambda, continued linearly (C^1) outside.
double sigma(double z, double Lambda);
double sigma_prime(double z, double Lambda);

double sigmoid(double t);
// log(sigmoid(t)) without overflow for large |t|.
double log_sigmoid(double t);

// G(z) = V^T z. Throws std::invalid_argument on a size mismatch.
Vec generator_forward(const GanParams& params, const Vec& z);

ForwardTrace discriminator_forward(const GanParams& params, const Vec& X);

// 1-sample GAN objective log D(X) + log(1 - D(G(z))).
double loss(const GanParams& params, const Vec& X, const Vec& z);

}  // namespace minmax_lab
