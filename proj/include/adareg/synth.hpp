#pragma once

#include <cstdint>
#include <optional>

#include "adareg/grid.hpp"

namespace adareg {

enum class BiasProfile { HalfPlaneRamp, RadialRamp, Uniform };
enum class PhantomShape { Disk, Blob };

/// Noise whose standard deviation grows across the image:
/// sigma(x) = sigma_max * profile(x), profile in [0, 1].
struct BiasedNoiseSpec {
  double sigma_max = 0.0;
  BiasProfile bias_profile = BiasProfile::HalfPlaneRamp;
  std::uint64_t rng_seed = 0;
};

/// Generated test input. For frame pairs `clean` is the first frame and
/// `noisy` the second.
struct SyntheticScene {
  ScalarField clean;
  ScalarField noisy;
  std::optional<BinaryMask> truth_mask;
  std::optional<VectorField2> truth_flow;
};

/// Standard normal sample number `index` of stream `seed`. Stateless, so any
/// pixel can be regenerated independently.
double normal_sample(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform sample in (0, 1].
double uniform_sample(std::uint64_t seed, std::uint64_t index) noexcept;

/// Value of the bias profile at pixel (x, y) of a width x height grid.
double bias_profile_at(BiasProfile profile, int x, int y, int width, int height) noexcept;

/// Adds zero-mean Gaussian noise with per-pixel sigma; the result is not clamped.
ScalarField add_biased_noise(const ScalarField& clean, const BiasedNoiseSpec& spec);

/// Radius of the Disk phantom for a given image size.
double phantom_disk_radius(int width, int height) noexcept;

/// `hi` inside the shape, `lo` outside; truth_mask marks the shape.
SyntheticScene make_two_level_phantom(int width, int height, double lo, double hi, PhantomShape shape);

/// 4x4 grid of disks with varied radius and level on a 0.3 background, plus a
/// two-pixel bar grating across the bottom row of cells. Fine structure appears
/// on both halves so low-noise regions reward light regularization.
ScalarField make_test_pattern(int width, int height);

/// Smoothed uniform noise rescaled to [0, 1]; a texture for flow experiments.
ScalarField make_random_texture(int width, int height, std::uint64_t seed, double smooth_sigma = 1.5);

/// Frames (base, base warped by -t) with ground-truth flow t everywhere.
SyntheticScene make_translation_pair(const ScalarField& base, Vec2 t);

/// A centered disk of `foreground` texture moving by t_fg over `background`
/// moving by t_bg. truth_mask marks the disk in the first frame.
SyntheticScene make_two_motion_pair(const ScalarField& background, const ScalarField& foreground, Vec2 t_bg,
                                    Vec2 t_fg);

}  // namespace adareg
