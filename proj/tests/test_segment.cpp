#include <cmath>
#include <random>

#include "adareg/error.hpp"
#include "adareg/segment.hpp"
#include "adareg/synth.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace adareg;

namespace {

// argmin_c sum w (f - c)^2 by scanning c over [0, 1].
double grid_mean(const ScalarField& f, const ScalarField& w, double step) {
  double best_c = 0.0, best = INFINITY;
  for (double c = 0.0; c <= 1.0 + 1e-12; c += step) {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * (f[i] - c) * (f[i] - c);
    if (s < best) {
      best = s;
      best_c = c;
    }
  }
  return best_c;
}

BinaryMask left_half(int w, int h) {
  BinaryMask m(w, h);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w / 2; ++i) m(i, j) = 1;
  return m;
}

}  // namespace

TEST_SUITE("segment") {

TEST_CASE("means of a constant image") {
  std::mt19937_64 rng(1);
  const RegionMeans m = estimate_means(ScalarField(8, 8, 0.6), oracle::random_field(8, 8, rng));
  CHECK(m.c1 == doctest::Approx(0.6));
  CHECK(m.c2 == doctest::Approx(0.6));
}

TEST_CASE("means of a binary image with its own indicator") {
  ScalarField f(8, 8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 3; ++i) f(i, j) = 1.0;
  const RegionMeans m = estimate_means(f, f);
  CHECK(m.c1 == 1.0);
  CHECK(m.c2 == 0.0);
}

TEST_CASE("means match a quadratic grid search") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const ScalarField f = oracle::random_field(8, 8, rng);
    const ScalarField u = oracle::random_field(8, 8, rng);
    ScalarField v(8, 8);
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = 1.0 - u[i];
    const RegionMeans m = estimate_means(f, u);
    CHECK(std::abs(m.c1 - grid_mean(f, u, 1e-4)) <= 1e-4);
    CHECK(std::abs(m.c2 - grid_mean(f, v, 1e-4)) <= 1e-4);
  }
}

TEST_CASE("empty region is degenerate") {
  try {
    (void)estimate_means(ScalarField(4, 4, 0.5), ScalarField(4, 4, 0.0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_region);
  }
}

TEST_CASE("constant image cannot be segmented") {
  try {
    (void)segment(ScalarField(16, 16, 0.4), default_segment_weight(0.5));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_region);
  }
}

TEST_CASE("clean binary halves are segmented exactly") {
  ScalarField f(32, 24);
  for (int j = 0; j < 24; ++j)
    for (int i = 0; i < 16; ++i) f(i, j) = 1.0;
  const BinaryMask truth = left_half(32, 24);
  for (double beta : {0.01, 0.1, 1.0, 10.0}) {
    const SegmentResult r = segment(f, AdaptiveWeightConfig::plain(beta));
    CHECK(f_measure(r.mask, truth) == 1.0);
    CHECK(r.c1 == doctest::Approx(1.0));
    CHECK(r.c2 == doctest::Approx(0.0));
    const SegmentResult s = segment(f, default_segment_weight(beta));
    CHECK(f_measure(s.mask, truth) == 1.0);
  }
}

TEST_CASE("noisy disk phantom") {
  const SyntheticScene s = make_two_level_phantom(64, 64, 0.25, 0.75, PhantomShape::Disk);
  const ScalarField f = add_biased_noise(s.clean, {0.1, BiasProfile::Uniform, 4});
  const SegmentResult r = segment(f, default_segment_weight(1.0));
  CHECK(f_measure(r.mask, *s.truth_mask) >= 0.99);
  CHECK(r.c1 == doctest::Approx(0.75).epsilon(0.05));
  CHECK(r.c2 == doctest::Approx(0.25).epsilon(0.05));
  for (double v : r.u.data()) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("fixed means stay at their initial values") {
  const SyntheticScene s = make_two_level_phantom(32, 32, 0.25, 0.75, PhantomShape::Disk);
  const ScalarField f = add_biased_noise(s.clean, {0.1, BiasProfile::Uniform, 9});
  const RegionMeans m0 = estimate_means(f, normalize_range(f));
  SegmentOptions opts;
  opts.update_means = false;
  const SegmentResult r = segment(f, StaticWeight{0.7}, {}, opts);
  CHECK(r.c1 == m0.c1);
  CHECK(r.c2 == m0.c2);
}

TEST_CASE("intensity shift moves the means and keeps the mask") {
  const SyntheticScene s = make_two_level_phantom(32, 32, 0.2, 0.6, PhantomShape::Blob);
  const ScalarField f = add_biased_noise(s.clean, {0.05, BiasProfile::Uniform, 12});
  ScalarField g = f;
  for (double& v : g.data()) v += 0.25;
  SolverConfig cfg;
  cfg.max_iters = 80;
  const SegmentResult a = segment(f, StaticWeight{0.6}, cfg);
  const SegmentResult b = segment(g, StaticWeight{0.6}, cfg);
  CHECK(a.mask == b.mask);
  CHECK(b.c1 - a.c1 == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(b.c2 - a.c2 == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("theta must lie strictly inside the unit interval") {
  const SyntheticScene s = make_two_level_phantom(16, 16, 0.2, 0.8, PhantomShape::Disk);
  SegmentOptions opts;
  opts.theta = 1.0;
  CHECK_THROWS_AS(segment(s.clean, StaticWeight{0.5}, {}, opts), Error);
}

TEST_CASE("f-measure") {
  const BinaryMask t = left_half(6, 4);
  CHECK(f_measure(t, t) == 1.0);
  CHECK(f_measure(t.complement(), t) == 0.0);
  // TP = 8, FP = 2, FN = 2.
  BinaryMask truth(5, 4), mask(5, 4);
  for (int i = 0; i < 10; ++i) truth.bits[static_cast<std::size_t>(i)] = 1;
  for (int i = 2; i < 12; ++i) mask.bits[static_cast<std::size_t>(i)] = 1;
  CHECK(f_measure(mask, truth) == doctest::Approx(0.8));
  CHECK_THROWS_AS(f_measure(BinaryMask(2, 2), BinaryMask(3, 2)), Error);
}

TEST_CASE("threshold is strict") {
  const BinaryMask m = threshold(ScalarField(3, 1, std::vector<double>{0.2, 0.5, 0.51}), 0.5);
  CHECK(m.bits == std::vector<std::uint8_t>{0, 0, 1});
}

}  // TEST_SUITE
