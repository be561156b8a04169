#pragma once

#include <optional>

#include "adareg/grid.hpp"

namespace adareg {

enum class WeightMode { Plain, Smoothed };

/// Parameters of the residual-driven weight
///   Plain:    lambda = exp(-rho / beta)
///   Smoothed: lambda = (1 - epsilon) * exp(-(G * rho) / beta)
struct AdaptiveWeightConfig {
  double beta = 1.0;
  double epsilon = 0.0;
  std::optional<GaussianKernel> kernel;
  WeightMode mode = WeightMode::Plain;

  static AdaptiveWeightConfig plain(double beta);
  static AdaptiveWeightConfig smoothed(double beta, double epsilon, double kernel_sigma);

  /// Throws Errc::invalid_argument on any broken invariant.
  void validate() const;
};

struct WeightStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double min = 0.0;
  double max = 0.0;
};

ScalarField compute_lambda(const ScalarField& rho, const AdaptiveWeightConfig& cfg);

/// Largest single-pixel weight the padded 2-D convolution can put on one
/// source pixel for a field of the given size. Replicate padding folds the
/// kernel tails onto border pixels, so this exceeds the kernel's center
/// weight near the boundary.
double effective_kernel_sup(const GaussianKernel& g, int width, int height);

/// (1 - epsilon) * exp(-sup(G) * ||rho||_1 / beta); a guaranteed lower bound
/// on compute_lambda(rho, cfg). Smoothed mode only.
double lambda_lower_bound(const ScalarField& rho, const AdaptiveWeightConfig& cfg);

/// Grid sum of lambda log lambda - lambda + 1 (negative approximate entropy).
double entropy_penalty(const ScalarField& lambda);

WeightStats weight_stats(const ScalarField& lambda);

}  // namespace adareg
