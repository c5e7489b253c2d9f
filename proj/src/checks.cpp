#include "minmax_lab/checks.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace minmax_lab {

Vec flatten(const GradientBundle& g) {
  const Eigen::Index nv = g.g_V.size(), nw = g.g_W.size();
  Vec out(nv + nw + 2);
  out.head(nv) = Eigen::Map<const Vec>(g.g_V.data(), nv);
  out.segment(nv, nw) = Eigen::Map<const Vec>(g.g_W.data(), nw);
  out[nv + nw] = g.g_a;
  out[nv + nw + 1] = g.g_b;
  return out;
}

std::string component_name(const GanParams& shape, Eigen::Index k) {
  const Eigen::Index nv = shape.V.size(), nw = shape.W.size();
  if (k < nv) {
    return "V[" + std::to_string(k % shape.V.rows()) + "," + std::to_string(k / shape.V.rows()) + "]";
  }
  k -= nv;
  if (k < nw) {
    return "W[" + std::to_string(k % shape.W.rows()) + "," + std::to_string(k / shape.W.rows()) + "]";
  }
  return k == nw ? "a" : "b";
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Smallest distance of any preactivation to the truncation points +-Lambda.
double kink_gap(const GanParams& p, const Vec& X, const Vec& z) {
  double gap = std::numeric_limits<double>::infinity();
  for (const Vec& in : {X, generator_forward(p, z)}) {
    const Vec pre = p.W * in;
    for (Eigen::Index i = 0; i < pre.size(); ++i) gap = std::min(gap, std::abs(std::abs(pre[i]) - p.Lambda));
  }
  return gap;
}

}  // namespace

GradcheckReport gradcheck(const GradcheckOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  GradcheckReport rep;
  RngStream rng(opt.seed, 0x67726164ULL);
  double worst_score = -1.0;

  for (int s = 0; s < opt.samples; ++s) {
    const int d = s % 2 == 0 ? 10 : 100;
    const DataVariant variant = (s / 2) % 2 == 0 ? DataVariant::CorrelatedCoefficients : DataVariant::CorrelatedModes;
    ExperimentConfig cfg = base_config(d);
    cfg.data_variant = variant;
    RngStream case_rng = rng.fork(static_cast<std::uint64_t>(s));

    const Modes modes = make_modes(d, cfg.gamma, variant, case_rng);
    const DataDistribution data(modes.u1, modes.u2, cfg.gamma, variant);
    const LatentDistribution latent(cfg.m_G, cfg.p_pair);
    Vec X = sample_data(data, case_rng);
    // X = 0 makes every real-side term vanish; resample for a useful check.
    while (X.norm() == 0.0) X = sample_data(data, case_rng);
    const Vec z = sample_latent(latent, case_rng);

    GanParams p;
    p.W = Mat(cfg.m_D, d);
    p.V = Mat(cfg.m_G, d);
    p.tau_b = cfg.tau_b;
    p.Lambda = cfg.Lambda;
    auto draw_logit = [&] { return 10.0 * case_rng.uniform() * (case_rng.uniform() < 0.5 ? -1.0 : 1.0); };
    // Solve a h + tau_b b = f for both logits so |f(X)|, |f(G(z))| <= 10.
    // Draws with |a| > 4 are redone: a huge slope inflates the third
    // derivatives and with them the truncation error of the oracle itself.
    for (int attempt = 0;; ++attempt) {
      for (int i = 0; i < cfg.m_D; ++i) p.W.row(i) = gaussian_vec(case_rng, d, 1.0).transpose();
      for (int j = 0; j < cfg.m_G; ++j) p.V.row(j) = gaussian_vec(case_rng, d, 1.0 / d).transpose();
      const double f_real = draw_logit(), f_fake = draw_logit();
      const double h_real = discriminator_forward(p, X).h;
      const double h_fake = discriminator_forward(p, generator_forward(p, z)).h;
      p.a = std::abs(h_real - h_fake) > 1e-3 ? (f_real - f_fake) / (h_real - h_fake) : 1.0;
      p.b = (f_real - p.a * h_real) / p.tau_b;
      if (std::abs(p.a) <= 4.0 || attempt == 100) break;
    }

    GradientBundle analytic = sample_gradient(p, X, z);
    if (opt.flip_b) analytic.g_b = -analytic.g_b;
    const GradientBundle numeric = fd_gradient(p, X, z, opt.fd_step);
    const Vec ga = flatten(analytic), gn = flatten(numeric);

    bool case_ok = true;
    for (Eigen::Index k = 0; k < ga.size(); ++k) {
      const double abs_err = std::abs(ga[k] - gn[k]);
      const double scale = std::max(std::abs(ga[k]), std::abs(gn[k]));
      const double rel_err = scale > 0.0 ? abs_err / scale : 0.0;
      const bool ok = rel_err < opt.rel_tol || abs_err < opt.abs_tol;
      rep.max_abs_error = std::max(rep.max_abs_error, abs_err);
      if (abs_err >= opt.abs_tol) rep.max_rel_error = std::max(rep.max_rel_error, rel_err);
      // Score > 1 means the component failed both tests.
      const double score = std::min(rel_err / opt.rel_tol, abs_err / opt.abs_tol);
      if (score > worst_score) {
        worst_score = score;
        rep.worst_component = component_name(p, k);
        rep.worst_analytic = ga[k];
        rep.worst_fd = gn[k];
        std::ostringstream desc;
        desc << "sample=" << s << " d=" << d << " variant="
             << (variant == DataVariant::CorrelatedModes ? "CorrelatedModes" : "CorrelatedCoefficients")
             << " f(X)=" << discriminator_forward(p, X).f
             << " f(G(z))=" << discriminator_forward(p, generator_forward(p, z)).f << " a=" << p.a
             << " kink_gap=" << kink_gap(p, X, z);
        rep.worst_config = desc.str();
      }
      if (!ok) case_ok = false;
    }
    if (!case_ok) ++rep.failures;
    ++rep.samples;
  }
  rep.pass = rep.failures == 0;
  rep.seconds = seconds_since(start);
  return rep;
}

OracleReport oracle_check(const ExperimentConfig& cfg, const OracleOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  OracleReport rep;
  RngStream master(opt.seed, 0x6f7261636cULL);
  ExperimentConfig snap_cfg = cfg;
  snap_cfg.validate();

  for (int s = 0; s < opt.snapshots; ++s) {
    RngStream rng = master.fork(static_cast<std::uint64_t>(s));
    const Modes modes = make_modes(cfg.d, cfg.gamma, cfg.data_variant, rng);
    const DataDistribution data(modes.u1, modes.u2, cfg.gamma, cfg.data_variant);
    const LatentDistribution latent(cfg.m_G, cfg.p_pair);
    const OutcomeTable data_table = enumerate_data(data);
    const OutcomeTable latent_table = enumerate_latent(latent);

    // Snapshots at a larger scale than the initialization, so every term of
    // the gradient is visibly nonzero.
    GanParams p;
    p.W = Mat(cfg.m_D, cfg.d);
    p.V = Mat(cfg.m_G, cfg.d);
    for (int i = 0; i < cfg.m_D; ++i) p.W.row(i) = gaussian_vec(rng, cfg.d, 4.0 / cfg.d).transpose();
    for (int j = 0; j < cfg.m_G; ++j) p.V.row(j) = gaussian_vec(rng, cfg.d, 4.0 / cfg.d).transpose();
    p.a = rng.normal();
    p.b = rng.normal();
    p.tau_b = cfg.tau_b;
    p.Lambda = cfg.Lambda;

    const Vec exact = flatten(expected_gradient(p, data_table, latent_table));
    Vec mean = Vec::Zero(exact.size());
    Vec m2 = Vec::Zero(exact.size());
    for (long n = 1; n <= opt.draws; ++n) {
      const Vec X = sample_data(data, rng);
      const Vec z = sample_latent(latent, rng);
      const Vec x = flatten(sample_gradient(p, X, z));
      const Vec delta = x - mean;
      mean += delta / static_cast<double>(n);
      m2.array() += delta.array() * (x - mean).array();
    }
    const double n = static_cast<double>(opt.draws);
    for (Eigen::Index k = 0; k < exact.size(); ++k) {
      const double var = opt.draws > 1 ? m2[k] / (n - 1.0) : 0.0;
      const double se = std::sqrt(var / n);
      const double diff = std::abs(mean[k] - exact[k]);
      double z_score;
      if (se > 0.0) {
        z_score = diff / se;
      } else {
        const double scale = std::max(1.0, std::abs(exact[k]));
        z_score = diff <= 1e-12 * scale ? 0.0 : std::numeric_limits<double>::infinity();
      }
      ++rep.components_checked;
      if (z_score > opt.se_multiple) ++rep.violations;
      if (z_score > rep.max_z) {
        rep.max_z = z_score;
        rep.worst_component = component_name(p, k);
        rep.worst_snapshot = s;
      }
    }
    ++rep.snapshots;
  }
  rep.pass = rep.violations == 0;
  rep.seconds = seconds_since(start);
  return rep;
}

}  // namespace minmax_lab
