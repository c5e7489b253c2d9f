#include "minmax_lab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace minmax_lab {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  // Mix the stream id through its own splitmix pass so that neighbouring
  // (seed, stream) pairs land far apart.
  std::uint64_t s = stream_id;
  std::uint64_t mixed = seed ^ splitmix64(s);
  for (auto& word : state_) word = splitmix64(mixed);
}

// xoshiro256**
std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below: n must be positive");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return r % n;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

RngStream RngStream::fork(std::uint64_t child_id) const {
  std::uint64_t s = stream_id_ ^ (child_id * 0xd1342543de82ef95ULL + 1);
  return RngStream(seed_, splitmix64(s));
}

Vec gaussian_vec(RngStream& rng, int d, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("gaussian_vec: variance must be positive");
  }
  if (d <= 0) throw std::invalid_argument("gaussian_vec: d must be positive");
  const double sd = std::sqrt(variance);
  Vec out(d);
  for (int i = 0; i < d; ++i) out[i] = sd * rng.normal();
  return out;
}

Mat random_rotation(RngStream& rng, int d) {
  Mat g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

BasisDecomposition decompose(const Vec& x, std::span<const Vec> basis,
                             std::vector<std::string> labels) {
  const auto k = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index d = x.size();
  if (k > d) throw std::invalid_argument("decompose: more basis vectors than dimensions");
  if (!labels.empty() && labels.size() != basis.size()) {
    throw std::invalid_argument("decompose: label count does not match basis");
  }

  BasisDecomposition out;
  out.basis_labels = std::move(labels);
  if (k == 0) {
    out.coefficients = Vec(0);
    out.residual_norm = x.norm();
    return out;
  }

  Mat b(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Vec& col = basis[static_cast<std::size_t>(j)];
    if (col.size() != d) throw std::invalid_argument("decompose: basis dimension mismatch");
    const double n = col.norm();
    if (!(n > 0.0)) throw std::invalid_argument("decompose: zero basis vector");
    b.col(j) = col / n;
  }

  Eigen::CompleteOrthogonalDecomposition<Mat> cod(b);
  cod.setThreshold(1e-10);
  out.coefficients = cod.solve(x);
  out.degenerate = cod.rank() < k;
  out.residual_norm = (x - b * out.coefficients).norm();
  return out;
}

Vec reconstruct(const BasisDecomposition& dec, std::span<const Vec> basis) {
  if (basis.empty()) return Vec();
  Vec acc = Vec::Zero(basis.front().size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    acc += dec.coefficients[static_cast<Eigen::Index>(j)] * basis[j] / basis[j].norm();
  }
  return acc;
}

double cosine(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw std::invalid_argument("cosine: dimension mismatch");
  const double nx = x.norm();
  const double ny = y.norm();
  if (!(nx > 0.0) || !(ny > 0.0)) throw std::domain_error("cosine: zero vector");
  return std::clamp(x.dot(y) / (nx * ny), -1.0, 1.0);
}

}  // namespace minmax_lab
