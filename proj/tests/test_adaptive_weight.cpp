#include <cmath>
#include <random>

#include "adareg/adaptive_weight.hpp"
#include "adareg/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adareg;

TEST_SUITE("adaptive_weight") {

TEST_CASE("plain weight at zero and at beta") {
  const auto cfg = AdaptiveWeightConfig::plain(0.7);
  const ScalarField one = compute_lambda(ScalarField(4, 3, 0.0), cfg);
  for (double v : one.data()) CHECK(v == 1.0);
  const ScalarField e = compute_lambda(ScalarField(4, 3, 0.7), cfg);
  for (double v : e.data()) CHECK(v == doctest::Approx(0.367879441171).epsilon(1e-12));
}

TEST_CASE("smoothed weight at zero residual is 1 - epsilon") {
  const ScalarField l = compute_lambda(ScalarField(6, 6, 0.0), AdaptiveWeightConfig::smoothed(1.0, 0.05, 1.0));
  for (double v : l.data()) CHECK(v == doctest::Approx(0.95).epsilon(1e-15));
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(AdaptiveWeightConfig::plain(0.0), Error);
  CHECK_THROWS_AS(AdaptiveWeightConfig::plain(-1.0), Error);
  CHECK_THROWS_AS(AdaptiveWeightConfig::smoothed(1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(AdaptiveWeightConfig::smoothed(1.0, -0.1, 1.0), Error);
  AdaptiveWeightConfig bad = AdaptiveWeightConfig::plain(1.0);
  bad.epsilon = 0.1;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("negative or non-finite residual is rejected") {
  ScalarField rho(3, 3, 0.1);
  rho(1, 1) = -1e-3;
  try {
    (void)compute_lambda(rho, AdaptiveWeightConfig::plain(1.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_residual);
  }
  rho(1, 1) = NAN;
  CHECK_THROWS_AS(compute_lambda(rho, AdaptiveWeightConfig::plain(1.0)), Error);
}

TEST_CASE("weights stay in range") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const ScalarField rho = oracle::random_field(12, 9, rng, 0.0, 5.0);
    const ScalarField plain = compute_lambda(rho, AdaptiveWeightConfig::plain(0.3));
    const ScalarField smooth = compute_lambda(rho, AdaptiveWeightConfig::smoothed(0.3, 0.1, 1.0));
    for (double v : plain.data()) {
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
    }
    for (double v : smooth.data()) {
      CHECK(v > 0.0);
      CHECK(v <= 0.9 + 1e-15);
    }
  }
}

TEST_CASE("lower bound at zero residual equals the minimum") {
  const auto cfg = AdaptiveWeightConfig::smoothed(0.5, 0.2, 1.0);
  CHECK(lambda_lower_bound(ScalarField(8, 8, 0.0), cfg) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("lower bound below the pixelwise minimum on random residuals") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    const ScalarField rho = oracle::random_field(16, 16, rng, 0.0, 0.01);
    const auto cfg = AdaptiveWeightConfig::smoothed(0.5, 0.05, 0.5 + 0.1 * t);
    const double bound = lambda_lower_bound(rho, cfg);
    CHECK(bound <= min_value(compute_lambda(rho, cfg)));
  }
}

TEST_CASE("effective kernel sup is the largest single-source weight") {
  for (double sigma : {0.5, 1.0, 2.0}) {
    const GaussianKernel g(sigma);
    for (auto [w, h] : {std::pair{21, 21}, std::pair{9, 5}, std::pair{3, 14}}) {
      // Brute force: push an impulse through every pixel and take the largest response.
      double best = 0.0;
      for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
          ScalarField e(w, h);
          e(i, j) = 1.0;
          best = std::max(best, max_value(convolve_gaussian(e, g)));
        }
      }
      CHECK(effective_kernel_sup(g, w, h) == doctest::Approx(best).epsilon(1e-12));
      CHECK(effective_kernel_sup(g, w, h) >= g.max_weight_2d());
    }
  }
}

TEST_CASE("lower bound for a single impulse") {
  const double m = 0.3, beta = 0.5, eps = 0.1;
  const auto cfg = AdaptiveWeightConfig::smoothed(beta, eps, 1.0);
  ScalarField rho(21, 21, 0.0);
  rho(10, 10) = m;
  const double sup = effective_kernel_sup(*cfg.kernel, 21, 21);
  CHECK(lambda_lower_bound(rho, cfg) == doctest::Approx((1.0 - eps) * std::exp(-sup * m / beta)).epsilon(1e-14));
  CHECK(lambda_lower_bound(rho, cfg) <= min_value(compute_lambda(rho, cfg)));
}

TEST_CASE("lower bound holds for a corner impulse") {
  for (double sigma : {0.5, 1.0, 2.0, 3.0}) {
    const auto cfg = AdaptiveWeightConfig::smoothed(0.2, 0.0, sigma);
    ScalarField rho(9, 7, 0.0);
    rho(0, 0) = 2.0;
    CHECK(lambda_lower_bound(rho, cfg) <= min_value(compute_lambda(rho, cfg)) + 1e-15);
  }
}

TEST_CASE("lower bound needs the smoothed mode") {
  CHECK_THROWS_AS(lambda_lower_bound(ScalarField(3, 3), AdaptiveWeightConfig::plain(1.0)), Error);
}

TEST_CASE("entropy penalty") {
  CHECK(entropy_penalty(ScalarField(5, 5, 1.0)) == doctest::Approx(0.0).epsilon(1e-15));
  const double e1 = std::exp(-1.0);
  CHECK(entropy_penalty(ScalarField(5, 4, e1)) == doctest::Approx(20.0 * (1.0 - 2.0 * e1)).epsilon(1e-12));
  std::mt19937_64 rng(51);
  const ScalarField l = oracle::random_field(7, 7, rng, 1e-6, 1.0);
  double naive = 0.0;
  for (int j = 0; j < 7; ++j)
    for (int i = 0; i < 7; ++i) naive += l(i, j) * std::log(l(i, j)) - l(i, j) + 1.0;
  CHECK(entropy_penalty(l) == doctest::Approx(naive).epsilon(1e-12));
  CHECK_THROWS_AS(entropy_penalty(ScalarField(2, 2, 1.5)), Error);
}

TEST_CASE("weight stats") {
  const WeightStats c = weight_stats(ScalarField(3, 3, 0.4));
  CHECK(c.mean == doctest::Approx(0.4));
  CHECK(c.std_dev == doctest::Approx(0.0));
  CHECK(c.min == 0.4);
  CHECK(c.max == 0.4);

  const WeightStats h = weight_stats(ScalarField(2, 2, std::vector<double>{0, 1, 0, 1}));
  CHECK(h.mean == 0.5);
  CHECK(h.std_dev == 0.5);

  std::mt19937_64 rng(61);
  const ScalarField l = oracle::random_field(11, 6, rng);
  double m = 0.0;
  for (double v : l.data()) m += v;
  m /= static_cast<double>(l.size());
  double var = 0.0;
  for (double v : l.data()) var += (v - m) * (v - m);
  var /= static_cast<double>(l.size());
  const WeightStats s = weight_stats(l);
  CHECK(s.mean == doctest::Approx(m).epsilon(1e-13));
  CHECK(s.std_dev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
  CHECK(s.min == min_value(l));
  CHECK(s.max == max_value(l));
}

}  // TEST_SUITE
