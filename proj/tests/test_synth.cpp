#include <cmath>
#include <numbers>

#include "adareg/error.hpp"
#include "adareg/synth.hpp"
#include "doctest.h"

using namespace adareg;

TEST_SUITE("synth") {

TEST_CASE("zero noise leaves the image unchanged") {
  const ScalarField clean = make_test_pattern(32, 32);
  CHECK(add_biased_noise(clean, {0.0, BiasProfile::HalfPlaneRamp, 5}) == clean);
  CHECK_THROWS_AS(add_biased_noise(clean, {-0.1, BiasProfile::Uniform, 5}), Error);
}

TEST_CASE("rightmost band has the ramp's noise level") {
  const int n = 256;
  const ScalarField noisy = add_biased_noise(ScalarField(n, n, 0.5), {0.4, BiasProfile::HalfPlaneRamp, 2024});
  double s = 0.0, ss = 0.0;
  int count = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = n - n / 10; i < n; ++i) {
      const double d = noisy(i, j) - 0.5;
      s += d;
      ss += d * d;
      ++count;
    }
  }
  const double mean = s / count;
  const double sd = std::sqrt(ss / count - mean * mean);
  CHECK(std::abs(sd - 0.38) <= 0.038);
}

TEST_CASE("noise is deterministic per seed") {
  const ScalarField clean = make_test_pattern(40, 30);
  const BiasedNoiseSpec spec{0.3, BiasProfile::RadialRamp, 77};
  CHECK(add_biased_noise(clean, spec) == add_biased_noise(clean, spec));
  CHECK(!(add_biased_noise(clean, spec) == add_biased_noise(clean, {0.3, BiasProfile::RadialRamp, 78})));
}

TEST_CASE("normal samples have zero mean and unit variance") {
  const int n = 200000;
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = normal_sample(9, static_cast<std::uint64_t>(i));
    s += z;
    ss += z * z;
  }
  const double mean = s / n;
  CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(ss / n - 1.0) <= 0.02);
}

TEST_CASE("uniform samples lie in (0, 1]") {
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const double u = uniform_sample(3, i);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
}

TEST_CASE("bias profiles") {
  CHECK(bias_profile_at(BiasProfile::HalfPlaneRamp, 0, 3, 11, 5) == 0.0);
  CHECK(bias_profile_at(BiasProfile::HalfPlaneRamp, 10, 3, 11, 5) == 1.0);
  CHECK(bias_profile_at(BiasProfile::RadialRamp, 5, 5, 11, 11) == 0.0);
  CHECK(bias_profile_at(BiasProfile::RadialRamp, 0, 0, 11, 11) == doctest::Approx(1.0));
  CHECK(bias_profile_at(BiasProfile::Uniform, 2, 2, 11, 11) == 1.0);
}

TEST_CASE("disk area matches the radius") {
  for (int n : {64, 128, 200}) {
    const SyntheticScene s = make_two_level_phantom(n, n, 0.25, 0.75, PhantomShape::Disk);
    const double r = phantom_disk_radius(n, n);
    const double area = std::numbers::pi * r * r;
    CHECK(std::abs(static_cast<double>(s.truth_mask->count()) - area) <= 0.02 * area);
  }
}

TEST_CASE("binary phantom") {
  const SyntheticScene s = make_two_level_phantom(48, 40, 0.0, 1.0, PhantomShape::Blob);
  for (std::size_t i = 0; i < s.clean.size(); ++i) {
    CHECK((s.clean[i] == 0.0 || s.clean[i] == 1.0));
    CHECK(s.clean[i] == static_cast<double>(s.truth_mask->bits[i]));
  }
  CHECK_THROWS_AS(make_two_level_phantom(8, 8, 0.8, 0.2, PhantomShape::Disk), Error);
}

TEST_CASE("zero translation gives identical frames") {
  const ScalarField base = make_random_texture(20, 20, 4);
  const SyntheticScene s = make_translation_pair(base, {0.0, 0.0});
  CHECK(s.noisy == s.clean);
  for (double v : s.truth_flow->x.data()) CHECK(v == 0.0);
}

TEST_CASE("integer translation shifts the interior") {
  const ScalarField base = make_random_texture(20, 20, 4);
  const SyntheticScene s = make_translation_pair(base, {2.0, 1.0});
  // Frame 1 at x + t shows frame 0 at x.
  for (int j = 0; j + 1 < 20; ++j)
    for (int i = 0; i + 2 < 20; ++i) CHECK(s.noisy(i + 2, j + 1) == base(i, j));
}

TEST_CASE("fractional translation of a linear ramp") {
  ScalarField base(16, 16);
  for (int j = 0; j < 16; ++j)
    for (int i = 0; i < 16; ++i) base(i, j) = 0.02 * i + 0.03 * j;
  const SyntheticScene s = make_translation_pair(base, {0.5, 0.25});
  for (int j = 1; j < 16; ++j)
    for (int i = 1; i < 16; ++i)
      CHECK(s.noisy(i, j) == doctest::Approx(0.02 * (i - 0.5) + 0.03 * (j - 0.25)).epsilon(1e-13));
}

TEST_CASE("texture is normalized and seeded") {
  const ScalarField a = make_random_texture(32, 24, 10);
  CHECK(min_value(a) == 0.0);
  CHECK(max_value(a) == 1.0);
  CHECK(a == make_random_texture(32, 24, 10));
  CHECK(!(a == make_random_texture(32, 24, 11)));
}

TEST_CASE("two-motion truth follows the mask") {
  const ScalarField bg = make_random_texture(32, 32, 21);
  const ScalarField fg = make_random_texture(32, 32, 22);
  const SyntheticScene s = make_two_motion_pair(bg, fg, {1.0, 0.5}, {-1.5, 1.0});
  for (std::size_t i = 0; i < s.clean.size(); ++i) {
    const bool in = s.truth_mask->bits[i] != 0;
    CHECK(s.truth_flow->x[i] == (in ? -1.5 : 1.0));
    CHECK(s.truth_flow->y[i] == (in ? 1.0 : 0.5));
  }
}

TEST_CASE("test pattern is in range") {
  const ScalarField p = make_test_pattern(64, 64);
  CHECK(min_value(p) >= 0.0);
  CHECK(max_value(p) <= 1.0);
  CHECK(max_value(p) > min_value(p));
}

}  // TEST_SUITE
