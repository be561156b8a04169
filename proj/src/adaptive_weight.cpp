#include "adareg/adaptive_weight.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "adareg/error.hpp"

namespace adareg {

namespace {

// Max over (output, source) of the 1-D weight that lands on `source` when
// evaluating `output` with clamped indices.
double folded_sup_1d(std::span<const double> w, int radius, int n) {
  double best = 0.0;
  std::vector<double> acc(static_cast<std::size_t>(n));
  for (int out = 0; out < n; ++out) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int k = -radius; k <= radius; ++k) {
      acc[static_cast<std::size_t>(std::clamp(out + k, 0, n - 1))] += w[static_cast<std::size_t>(k + radius)];
    }
    best = std::max(best, *std::max_element(acc.begin(), acc.end()));
  }
  return best;
}

}  // namespace

AdaptiveWeightConfig AdaptiveWeightConfig::plain(double beta) {
  AdaptiveWeightConfig cfg;
  cfg.beta = beta;
  cfg.validate();
  return cfg;
}

AdaptiveWeightConfig AdaptiveWeightConfig::smoothed(double beta, double epsilon, double kernel_sigma) {
  AdaptiveWeightConfig cfg;
  cfg.beta = beta;
  cfg.epsilon = epsilon;
  cfg.kernel.emplace(kernel_sigma);
  cfg.mode = WeightMode::Smoothed;
  cfg.validate();
  return cfg;
}

void AdaptiveWeightConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw Error(Errc::invalid_argument, "beta must be positive and finite");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(Errc::invalid_argument, "epsilon must lie in [0, 1)");
  }
  if (mode == WeightMode::Smoothed && !kernel) {
    throw Error(Errc::invalid_argument, "smoothed weight mode needs a kernel");
  }
  if (mode == WeightMode::Plain && kernel) {
    throw Error(Errc::invalid_argument, "plain weight mode takes no kernel");
  }
  if (mode == WeightMode::Plain && epsilon != 0.0) {
    throw Error(Errc::invalid_argument, "epsilon is only used by the smoothed weight mode");
  }
}

ScalarField compute_lambda(const ScalarField& rho, const AdaptiveWeightConfig& cfg) {
  cfg.validate();
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= 0.0) || !std::isfinite(rho[i])) {
      throw Error(Errc::invalid_residual, "residual entry " + std::to_string(i) + " is negative or not finite");
    }
  }
  if (cfg.mode == WeightMode::Plain) {
    ScalarField lambda(rho.width(), rho.height());
    for (std::size_t i = 0; i < rho.size(); ++i) lambda[i] = std::exp(-rho[i] / cfg.beta);
    return lambda;
  }
  ScalarField lambda = convolve_gaussian(rho, *cfg.kernel);
  const double scale = 1.0 - cfg.epsilon;
  for (double& v : lambda.data()) v = scale * std::exp(-v / cfg.beta);
  return lambda;
}

double effective_kernel_sup(const GaussianKernel& g, int width, int height) {
  return folded_sup_1d(g.weights(), g.radius(), width) * folded_sup_1d(g.weights(), g.radius(), height);
}

double lambda_lower_bound(const ScalarField& rho, const AdaptiveWeightConfig& cfg) {
  cfg.validate();
  if (cfg.mode != WeightMode::Smoothed) {
    throw Error(Errc::unsupported_mode, "lambda lower bound is defined for the smoothed mode only");
  }
  double mass = 0.0;
  for (double v : rho.data()) {
    if (!(v >= 0.0)) throw Error(Errc::invalid_residual, "residual must be nonnegative");
    mass += v;
  }
  const double sup = effective_kernel_sup(*cfg.kernel, rho.width(), rho.height());
  return (1.0 - cfg.epsilon) * std::exp(-sup * mass / cfg.beta);
}

double entropy_penalty(const ScalarField& lambda) {
  constexpr double slack = 1e-12;
  double acc = 0.0;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    const double l = lambda[i];
    if (!(l >= -slack && l <= 1.0 + slack)) {
      throw Error(Errc::invalid_weight, "weight entry " + std::to_string(i) + " outside (0, 1]");
    }
    const double c = std::clamp(l, 0.0, 1.0);
    acc += (c > 0.0 ? c * std::log(c) : 0.0) - c + 1.0;
  }
  return acc;
}

WeightStats weight_stats(const ScalarField& lambda) {
  WeightStats s;
  if (lambda.empty()) return s;
  const double n = static_cast<double>(lambda.size());
  const double mean = sum(lambda) / n;
  double ss = 0.0;
  for (double v : lambda.data()) ss += (v - mean) * (v - mean);
  s.min = min_value(lambda);
  s.max = max_value(lambda);
  s.mean = std::clamp(mean, s.min, s.max);
  s.std_dev = std::sqrt(ss / n);
  return s;
}

}  // namespace adareg
