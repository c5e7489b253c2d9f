#pragma once

#include <vector>

#include "minmax_lab/numerics.hpp"

namespace minmax_lab {

enum class DataVariant { CorrelatedModes, CorrelatedCoefficients };

struct Modes {
  Vec u1;
  Vec u2;
};

// Target law over X. CorrelatedModes: X = u1 or u2 with probability 1/2 each,
// <u1,u2> = gamma. CorrelatedCoefficients: orthogonal modes and
// X = s1 u1 + s2 u2 with the symmetric coupling
//   both: gamma, only u1: 1/2 - gamma, only u2: 1/2 - gamma, neither: gamma.
class DataDistribution {
 public:
  // Validates unit norms, the variant's inner product and gamma in [0, 1/2].
  DataDistribution(Vec u1, Vec u2, double gamma, DataVariant variant);

  const Vec& u1() const { return u1_; }
  const Vec& u2() const { return u2_; }
  double gamma() const { return gamma_; }
  DataVariant variant() const { return variant_; }
  int dim() const { return static_cast<int>(u1_.size()); }
  Modes modes() const { return {u1_, u2_}; }

 private:
  Vec u1_;
  Vec u2_;
  double gamma_;
  DataVariant variant_;
};

// Sparse binary latent law on {0,1}^m_G: one-hot e_i (i uniform) with
// probability 1 - p_pair, two-hot e_i + e_j (unordered pair uniform) with
// probability p_pair.
class LatentDistribution {
 public:
  LatentDistribution(int m_G, double p_pair);

  int m_G() const { return m_G_; }
  double p_pair() const { return p_pair_; }
  double p_single() const { return 1.0 - p_pair_; }

 private:
  int m_G_;
  double p_pair_;
};

struct Outcome {
  Vec value;
  double probability;
};

using OutcomeTable = std::vector<Outcome>;

// Two unit vectors with <u1,u2> = gamma (CorrelatedModes) or 0
// (CorrelatedCoefficients), rotated into a random orientation.
Modes make_modes(int d, double gamma, DataVariant variant, RngStream& rng);

Vec sample_data(const DataDistribution& dist, RngStream& rng);
Vec sample_latent(const LatentDistribution& dist, RngStream& rng);

// Full finite supports. Zero-probability outcomes are omitted.
OutcomeTable enumerate_data(const DataDistribution& dist);
OutcomeTable enumerate_latent(const LatentDistribution& dist);

}  // namespace minmax_lab
