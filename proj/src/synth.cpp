#include "adareg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "adareg/error.hpp"
#include "adareg/flow.hpp"

namespace adareg {

namespace {

// SplitMix64 finalizer applied to a (seed, counter) pair.
std::uint64_t mix(std::uint64_t seed, std::uint64_t counter) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

bool inside_shape(PhantomShape shape, double x, double y, int width, int height) {
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  const double r0 = phantom_disk_radius(width, height);
  const double dx = x - cx;
  const double dy = y - cy;
  const double d = std::hypot(dx, dy);
  if (shape == PhantomShape::Disk) return d <= r0;
  const double angle = std::atan2(dy, dx);
  return d <= r0 * (1.0 + 0.25 * std::cos(3.0 * angle) + 0.1 * std::sin(5.0 * angle));
}

}  // namespace

double uniform_sample(std::uint64_t seed, std::uint64_t index) noexcept {
  // 53 random bits mapped to (0, 1].
  return (static_cast<double>(mix(seed, index) >> 11) + 1.0) * 0x1.0p-53;
}

double normal_sample(std::uint64_t seed, std::uint64_t index) noexcept {
  const double u1 = uniform_sample(seed, 2 * index);
  const double u2 = uniform_sample(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double bias_profile_at(BiasProfile profile, int x, int y, int width, int height) noexcept {
  if (profile == BiasProfile::Uniform) return 1.0;
  if (profile == BiasProfile::HalfPlaneRamp) {
    return width > 1 ? static_cast<double>(x) / (width - 1) : 1.0;
  }
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  const double far = std::hypot(cx, cy);
  return far > 0.0 ? std::hypot(x - cx, y - cy) / far : 1.0;
}

ScalarField add_biased_noise(const ScalarField& clean, const BiasedNoiseSpec& spec) {
  if (!(spec.sigma_max >= 0.0) || !std::isfinite(spec.sigma_max)) {
    throw Error(Errc::invalid_argument, "sigma_max must be nonnegative");
  }
  ScalarField out = clean;
  if (spec.sigma_max == 0.0) return out;
  for (int j = 0; j < clean.height(); ++j) {
    for (int i = 0; i < clean.width(); ++i) {
      const std::uint64_t index = static_cast<std::uint64_t>(j) * static_cast<std::uint64_t>(clean.width()) +
                                  static_cast<std::uint64_t>(i);
      const double sigma = spec.sigma_max * bias_profile_at(spec.bias_profile, i, j, clean.width(), clean.height());
      out(i, j) += sigma * normal_sample(spec.rng_seed, index);
    }
  }
  return out;
}

double phantom_disk_radius(int width, int height) noexcept { return 0.25 * std::min(width, height); }

SyntheticScene make_two_level_phantom(int width, int height, double lo, double hi, PhantomShape shape) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
    throw Error(Errc::invalid_argument, "phantom levels need 0 <= lo < hi <= 1");
  }
  SyntheticScene scene;
  scene.clean = ScalarField(width, height, lo);
  BinaryMask mask(width, height);
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      if (inside_shape(shape, i, j, width, height)) {
        mask(i, j) = 1;
        scene.clean(i, j) = hi;
      }
    }
  }
  scene.noisy = scene.clean;
  scene.truth_mask = std::move(mask);
  return scene;
}

ScalarField make_test_pattern(int width, int height) {
  ScalarField f(width, height, 0.3);
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      const double x = 4.0 * (i + 0.5) / width;
      const double y = 4.0 * (j + 0.5) / height;
      const int cx = static_cast<int>(x);
      const int cy = static_cast<int>(y);
      const double fx = x - cx;
      const double fy = y - cy;
      const double radius = 0.08 + 0.08 * ((cx + cy) % 4);
      if (std::hypot(fx - 0.5, fy - 0.5) < radius) {
        constexpr double levels[3] = {0.8, 0.6, 0.1};
        f(i, j) = levels[(cx + 2 * cy) % 3];
      }
      if (cy == 3 && (i / 2) % 2 == 0 && fy > 0.2 && fy < 0.8) f(i, j) = 0.9;
    }
  }
  return f;
}

ScalarField make_random_texture(int width, int height, std::uint64_t seed, double smooth_sigma) {
  ScalarField t(width, height);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = uniform_sample(seed, i);
  if (smooth_sigma > 0.0) t = convolve_gaussian(t, GaussianKernel(smooth_sigma));
  const double lo = min_value(t);
  const double hi = max_value(t);
  if (hi > lo) {
    for (double& v : t.data()) v = (v - lo) / (hi - lo);
  }
  return t;
}

SyntheticScene make_translation_pair(const ScalarField& base, Vec2 t) {
  SyntheticScene scene;
  scene.clean = base;
  scene.noisy = warp_bilinear(base, VectorField2(ScalarField(base.width(), base.height(), -t.x),
                                                 ScalarField(base.width(), base.height(), -t.y)));
  scene.truth_flow = VectorField2(ScalarField(base.width(), base.height(), t.x),
                                  ScalarField(base.width(), base.height(), t.y));
  return scene;
}

SyntheticScene make_two_motion_pair(const ScalarField& background, const ScalarField& foreground, Vec2 t_bg,
                                    Vec2 t_fg) {
  require_same_shape(background, foreground, "two-motion textures");
  const int w = background.width();
  const int h = background.height();
  const ScalarField bg1 = make_translation_pair(background, t_bg).noisy;
  const ScalarField fg1 = make_translation_pair(foreground, t_fg).noisy;

  SyntheticScene scene;
  scene.clean = ScalarField(w, h);
  scene.noisy = ScalarField(w, h);
  BinaryMask mask(w, h);
  VectorField2 gt(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const bool fg0 = inside_shape(PhantomShape::Disk, i, j, w, h);
      const bool fg_next = inside_shape(PhantomShape::Disk, i - t_fg.x, j - t_fg.y, w, h);
      mask(i, j) = fg0 ? 1 : 0;
      scene.clean(i, j) = fg0 ? foreground(i, j) : background(i, j);
      scene.noisy(i, j) = fg_next ? fg1(i, j) : bg1(i, j);
      gt.x(i, j) = fg0 ? t_fg.x : t_bg.x;
      gt.y(i, j) = fg0 ? t_fg.y : t_bg.y;
    }
  }
  scene.truth_mask = std::move(mask);
  scene.truth_flow = std::move(gt);
  return scene;
}

}  // namespace adareg
