#include "minmax_lab/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace minmax_lab {
namespace {

constexpr double kUnitTol = 1e-12;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 0.5)) {
    throw std::invalid_argument("gamma must lie in [0, 1/2]");
  }
}

}  // namespace

DataDistribution::DataDistribution(Vec u1, Vec u2, double gamma, DataVariant variant)
    : u1_(std::move(u1)), u2_(std::move(u2)), gamma_(gamma), variant_(variant) {
  check_gamma(gamma_);
  if (u1_.size() != u2_.size() || u1_.size() < 2) {
    throw std::invalid_argument("DataDistribution: modes must share a dimension >= 2");
  }
  if (std::abs(u1_.norm() - 1.0) > kUnitTol || std::abs(u2_.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("DataDistribution: modes must have unit norm");
  }
  const double target = variant_ == DataVariant::CorrelatedModes ? gamma_ : 0.0;
  if (std::abs(u1_.dot(u2_) - target) > kUnitTol) {
    throw std::invalid_argument("DataDistribution: mode inner product does not match variant");
  }
}

LatentDistribution::LatentDistribution(int m_G, double p_pair) : m_G_(m_G), p_pair_(p_pair) {
  if (m_G_ < 1) throw std::invalid_argument("LatentDistribution: m_G must be >= 1");
  if (!(p_pair_ >= 0.0 && p_pair_ <= 0.1)) {
    throw std::invalid_argument("LatentDistribution: p_pair must lie in [0, 0.1]");
  }
  if (m_G_ < 2 && p_pair_ > 0.0) {
    throw std::invalid_argument("LatentDistribution: pairs need m_G >= 2");
  }
}

Modes make_modes(int d, double gamma, DataVariant variant, RngStream& rng) {
  if (d < 2) throw std::invalid_argument("make_modes: d must be >= 2");
  check_gamma(gamma);
  const double ip = variant == DataVariant::CorrelatedModes ? gamma : 0.0;

  Vec e1 = Vec::Zero(d);
  Vec e2 = Vec::Zero(d);
  e1[0] = 1.0;
  e2[0] = ip;
  e2[1] = std::sqrt(1.0 - ip * ip);

  const Mat q = random_rotation(rng, d);
  Modes m{q * e1, q * e2};
  // Re-normalize and re-orthogonalize to pin the invariants at 1e-12 after
  // the rotation's rounding.
  m.u1.normalize();
  Vec perp = m.u2 - m.u1.dot(m.u2) * m.u1;
  perp.normalize();
  m.u2 = ip * m.u1 + std::sqrt(1.0 - ip * ip) * perp;
  m.u2.normalize();
  return m;
}

Vec sample_data(const DataDistribution& dist, RngStream& rng) {
  const double r = rng.uniform();
  if (dist.variant() == DataVariant::CorrelatedModes) {
    return r < 0.5 ? dist.u1() : dist.u2();
  }
  const double g = dist.gamma();
  if (r < g) return dist.u1() + dist.u2();
  if (r < 0.5) return dist.u1();
  if (r < 1.0 - g) return dist.u2();
  return Vec::Zero(dist.dim());
}

Vec sample_latent(const LatentDistribution& dist, RngStream& rng) {
  const int m = dist.m_G();
  Vec z = Vec::Zero(m);
  const bool pair = dist.p_pair() > 0.0 && rng.uniform() < dist.p_pair();
  if (!pair) {
    z[static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)))] = 1.0;
    return z;
  }
  const auto n_pairs = static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(m - 1) / 2;
  std::uint64_t k = rng.below(n_pairs);
  // Unrank k over pairs (i < j) in lexicographic order.
  int i = 0;
  while (k >= static_cast<std::uint64_t>(m - 1 - i)) {
    k -= static_cast<std::uint64_t>(m - 1 - i);
    ++i;
  }
  const int j = i + 1 + static_cast<int>(k);
  z[i] = 1.0;
  z[j] = 1.0;
  return z;
}

OutcomeTable enumerate_data(const DataDistribution& dist) {
  OutcomeTable table;
  if (dist.variant() == DataVariant::CorrelatedModes) {
    table.push_back({dist.u1(), 0.5});
    table.push_back({dist.u2(), 0.5});
    return table;
  }
  const double g = dist.gamma();
  auto add = [&](Vec v, double p) {
    if (p > 0.0) table.push_back({std::move(v), p});
  };
  add(dist.u1(), 0.5 - g);
  add(dist.u2(), 0.5 - g);
  add(dist.u1() + dist.u2(), g);
  add(Vec::Zero(dist.dim()), g);
  return table;
}

OutcomeTable enumerate_latent(const LatentDistribution& dist) {
  const int m = dist.m_G();
  OutcomeTable table;
  const double p_one = dist.p_single() / m;
  for (int i = 0; i < m; ++i) {
    Vec z = Vec::Zero(m);
    z[i] = 1.0;
    table.push_back({std::move(z), p_one});
  }
  if (dist.p_pair() > 0.0) {
    const double p_two = dist.p_pair() / (0.5 * m * (m - 1));
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        Vec z = Vec::Zero(m);
        z[i] = 1.0;
        z[j] = 1.0;
        table.push_back({std::move(z), p_two});
      }
    }
  }
  return table;
}

}  // namespace minmax_lab
