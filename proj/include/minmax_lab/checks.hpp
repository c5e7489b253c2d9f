#pragma once

#include <cstdint>
#include <string>

#include "minmax_lab/harness.hpp"

namespace minmax_lab {

// Flattens a bundle as [V column-major, W column-major, a, b].
Vec flatten(const GradientBundle& g);
// Name of flattened index k, e.g. "V[3,17]", "W[0,2]", "a", "b".
std::string component_name(const GanParams& shape, Eigen::Index k);

struct GradcheckOptions {
  int samples = 100;
  std::uint64_t seed = 0;
  double fd_step = 1e-5;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  // Test hook: negate the analytic g_b so the suite must fail on "b".
  bool flip_b = false;
};

struct GradcheckReport {
  bool pass = true;
  int samples = 0;
  int failures = 0;
  double max_rel_error = 0.0;  // over components above abs_tol
  double max_abs_error = 0.0;
  // Worst component (largest error relative to the pass rule).
  std::string worst_component;
  std::string worst_config;
  double worst_analytic = 0.0;
  double worst_fd = 0.0;
  double seconds = 0.0;
};

// Random configurations cycle through d in {10, 100} and both data variants,
// with a rescaled so that |f(X)| is spread uniformly over [0, 10].
GradcheckReport gradcheck(const GradcheckOptions& options = {});

struct OracleOptions {
  int snapshots = 10;
  long draws = 100000;
  double se_multiple = 5.0;
  std::uint64_t seed = 0;
};

struct OracleReport {
  bool pass = true;
  int snapshots = 0;
  long components_checked = 0;
  long violations = 0;
  double max_z = 0.0;  // largest |MC mean - exact| / SE
  std::string worst_component;
  int worst_snapshot = -1;
  double seconds = 0.0;
};

// Monte-Carlo mean of sample_gradient against expected_gradient for random
// parameter snapshots of the problem described by cfg (d, m_D, m_G, gamma,
// variant, p_pair, Lambda, tau_b). Components with zero sample variance must
// match to 1e-12 relative.
OracleReport oracle_check(const ExperimentConfig& cfg, const OracleOptions& options = {});

}  // namespace minmax_lab
