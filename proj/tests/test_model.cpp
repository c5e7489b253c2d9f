#include <doctest.h>

#include <cmath>
#include <limits>

#include "minmax_lab/model.hpp"
#include "test_util.hpp"

using namespace minmax_lab;
using minmax_lab::testing::one_hot;
using minmax_lab::testing::random_params;

TEST_CASE("sigma interior cubic") {
  CHECK(sigma(1.0, 2.0) == 1.0);
  CHECK(sigma_prime(1.0, 2.0) == 3.0);
  CHECK(sigma(-0.5, 2.0) == -0.125);
}

TEST_CASE("sigma linear continuation beyond Lambda") {
  // 3 Lambda^2 z - 2 Lambda^3 at Lambda = 2, z = 3.
  CHECK(sigma(3.0, 2.0) == doctest::Approx(20.0).epsilon(1e-15));
  CHECK(sigma(-3.0, 2.0) == doctest::Approx(-20.0).epsilon(1e-15));
  CHECK(sigma_prime(3.0, 2.0) == 12.0);
  CHECK(sigma_prime(-3.0, 2.0) == 12.0);
}

TEST_CASE("sigma is C1 at the truncation points") {
  const double L = 1.7, h = 1e-9;
  CHECK(sigma(L, L) == doctest::Approx(L * L * L).epsilon(1e-15));
  CHECK(sigma(L - h, L) == doctest::Approx(sigma(L + h, L)).epsilon(1e-8));
  CHECK(sigma_prime(L - h, L) == doctest::Approx(3 * L * L).epsilon(1e-8));
  CHECK(sigma_prime(L + h, L) == doctest::Approx(3 * L * L).epsilon(1e-15));
  CHECK(sigma_prime(-L - h, L) == doctest::Approx(3 * L * L).epsilon(1e-15));
}

TEST_CASE("sigma with infinite Lambda is the plain cubic") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(sigma(10.0, inf) == 1000.0);
  CHECK(sigma_prime(-10.0, inf) == 300.0);
}

TEST_CASE("log_sigmoid stays finite at extreme arguments") {
  CHECK(log_sigmoid(0.0) == doctest::Approx(std::log(0.5)));
  CHECK(log_sigmoid(800.0) == 0.0);
  CHECK(log_sigmoid(-800.0) == doctest::Approx(-800.0));
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049));
}

TEST_CASE("generator_forward sums the active rows") {
  RngStream rng(1, 0);
  const GanParams p = random_params(rng, 7, 2, 4);
  CHECK((generator_forward(p, one_hot(4, 0)) - p.V.row(0).transpose()).norm() == 0.0);
  const Vec z = one_hot(4, 0) + one_hot(4, 1);
  CHECK((generator_forward(p, z) - (p.V.row(0) + p.V.row(1)).transpose()).norm() < 1e-15);
  CHECK_THROWS_AS(generator_forward(p, Vec::Ones(3)), std::invalid_argument);
}

TEST_CASE("generator_forward matches a double loop") {
  RngStream rng(2, 0);
  const GanParams p = random_params(rng, 9, 2, 5);
  const Vec z = gaussian_vec(rng, 5, 1.0);
  Vec expect = Vec::Zero(9);
  for (int k = 0; k < 9; ++k) {
    for (int j = 0; j < 5; ++j) expect[k] += p.V(j, k) * z[j];
  }
  CHECK((generator_forward(p, z) - expect).norm() < 1e-13);
}

TEST_CASE("discriminator_forward at zero weights") {
  GanParams p;
  p.W = Mat::Zero(3, 5);
  p.V = Mat::Zero(2, 5);
  p.a = 0.7;
  const auto tr = discriminator_forward(p, Vec::Ones(5));
  CHECK(tr.f == 0.0);
  CHECK(tr.D == 0.5);
}

TEST_CASE("discriminator_forward single neuron") {
  GanParams p;
  p.W = Mat::Zero(1, 3);
  p.W(0, 0) = 1.0;
  p.V = Mat::Zero(1, 3);
  p.a = 1.0;
  p.Lambda = 1.0;
  Vec X = Vec::Zero(3);
  X[0] = 1.0;
  const auto tr = discriminator_forward(p, X);
  CHECK(tr.f == doctest::Approx(1.0));
  CHECK(tr.D == doctest::Approx(0.7311).epsilon(1e-4));
}

TEST_CASE("negating X flips f when b = 0") {
  RngStream rng(3, 0);
  GanParams p = random_params(rng, 8, 3, 2, 0.3);
  p.b = 0.0;
  const Vec X = gaussian_vec(rng, 8, 1.0);
  const auto pos = discriminator_forward(p, X);
  const auto neg = discriminator_forward(p, -X);
  CHECK(neg.f == doctest::Approx(-pos.f).epsilon(1e-14));
  CHECK(neg.D == doctest::Approx(1.0 - pos.D).epsilon(1e-14));
}

TEST_CASE("loss at zero discriminator is 2 log 1/2") {
  GanParams p;
  p.W = Mat::Zero(2, 4);
  p.V = Mat::Ones(3, 4);
  CHECK(loss(p, Vec::Ones(4), one_hot(3, 1)) == doctest::Approx(-1.3862943611198906).epsilon(1e-15));
}

TEST_CASE("loss saturates to 0 from below") {
  GanParams p;
  p.W = Mat::Zero(1, 2);
  p.V = Mat::Zero(1, 2);
  p.tau_b = 1.0;
  Vec X = Vec::Zero(2);
  X[0] = 1.0;
  p.W(0, 0) = 1.0;
  p.Lambda = 1.0;
  p.a = 60.0;
  p.b = -20.0;  // f(X) = 40, f(G(z)) = -20 with G = 0
  const double L = loss(p, X, one_hot(1, 0));
  CHECK(L < 0.0);
  CHECK(L > -1e-8);
}

TEST_CASE("loss equals log sigmoid(f(X)) + log sigmoid(-f(G(z)))") {
  RngStream rng(4, 0);
  for (int k = 0; k < 50; ++k) {
    const GanParams p = random_params(rng, 6, 2, 3, 1.0);
    const Vec X = gaussian_vec(rng, 6, 1.0);
    const Vec z = one_hot(3, k % 3);
    const double fr = discriminator_forward(p, X).f;
    const double ff = discriminator_forward(p, generator_forward(p, z)).f;
    // 1 - sigmoid(t) = sigmoid(-t), written with plain exp.
    const double expect = -std::log1p(std::exp(-fr)) - std::log1p(std::exp(ff));
    CHECK(loss(p, X, z) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("all_finite detects NaN and inf") {
  RngStream rng(5, 0);
  GanParams p = random_params(rng, 4, 1, 1);
  CHECK(p.all_finite());
  p.W(0, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(p.all_finite());
  p = random_params(rng, 4, 1, 1);
  p.a = std::numeric_limits<double>::infinity();
  CHECK_FALSE(p.all_finite());
}
