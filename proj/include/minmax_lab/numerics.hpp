#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace minmax_lab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Deterministic random stream keyed by (seed, stream_id). Normal deviates are
// generated in-house (Marsaglia polar) so draws do not depend on the standard
// library's distribution implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();

  // Derives an independent child stream; the parent is not advanced.
  RngStream fork(std::uint64_t child_id) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// i.i.d. N(0, variance) coordinates. Throws std::invalid_argument unless
// variance > 0 and d > 0.
Vec gaussian_vec(RngStream& rng, int d, double variance);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the sign
// of R's diagonal folded into Q).
Mat random_rotation(RngStream& rng, int d);

struct BasisDecomposition {
  std::vector<std::string> basis_labels;
  // Coefficients with respect to the unit-normalized basis vectors.
  Vec coefficients;
  double residual_norm = 0.0;
  // Set when the normalized basis is numerically rank deficient; the
  // coefficients are then the minimum-norm least-squares solution.
  bool degenerate = false;
};

// Least-squares projection of x onto span(basis). Each basis vector is scaled
// to unit norm first. Throws std::invalid_argument on a zero basis vector,
// more basis vectors than dimensions, or mismatched sizes.
BasisDecomposition decompose(const Vec& x, std::span<const Vec> basis,
                             std::vector<std::string> labels = {});

Vec reconstruct(const BasisDecomposition& dec, std::span<const Vec> basis);

// <x,y>/(|x||y|), clamped to [-1, 1]. Throws std::domain_error on a zero
// vector.
double cosine(const Vec& x, const Vec& y);

}  // namespace minmax_lab
