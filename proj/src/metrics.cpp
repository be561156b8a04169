#include "adareg/metrics.hpp"

#include <cmath>
#include <limits>

#include "adareg/error.hpp"

namespace adareg {

double psnr(const ScalarField& u, const ScalarField& ref, double dynamic_range) {
  require_same_shape(u, ref, "psnr");
  if (!(dynamic_range > 0.0)) throw Error(Errc::invalid_argument, "dynamic range must be positive");
  double se = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) se += (u[i] - ref[i]) * (u[i] - ref[i]);
  const double mse = se / static_cast<double>(u.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(dynamic_range * dynamic_range / mse);
}

namespace {

// Valid-mode separable filtering: output pixel (i, j) is the window centered
// at (i + r, j + r) of the input.
ScalarField filter_valid(const ScalarField& f, std::span<const double> w, int r) {
  const int ow = f.width() - 2 * r;
  const int oh = f.height() - 2 * r;
  ScalarField rows(ow, f.height());
  for (int j = 0; j < f.height(); ++j) {
    for (int i = 0; i < ow; ++i) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * r; ++k) acc += w[static_cast<std::size_t>(k)] * f(i + k, j);
      rows(i, j) = acc;
    }
  }
  ScalarField out(ow, oh);
  for (int j = 0; j < oh; ++j) {
    for (int i = 0; i < ow; ++i) {
      double acc = 0.0;
      for (int k = 0; k <= 2 * r; ++k) acc += w[static_cast<std::size_t>(k)] * rows(i, j + k);
      out(i, j) = acc;
    }
  }
  return out;
}

ScalarField product(const ScalarField& a, const ScalarField& b) {
  ScalarField p(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = a[i] * b[i];
  return p;
}

}  // namespace

double ssim(const ScalarField& u, const ScalarField& ref, const SsimConfig& cfg) {
  require_same_shape(u, ref, "ssim");
  const int r = cfg.window_radius;
  if (u.width() < 2 * r + 1 || u.height() < 2 * r + 1) {
    throw Error(Errc::image_too_small, "ssim needs at least a " + std::to_string(2 * r + 1) + "x" +
                                           std::to_string(2 * r + 1) + " image");
  }
  const GaussianKernel g(cfg.window_sigma, r);
  const auto w = g.weights();
  const double c1 = (cfg.k1 * cfg.dynamic_range) * (cfg.k1 * cfg.dynamic_range);
  const double c2 = (cfg.k2 * cfg.dynamic_range) * (cfg.k2 * cfg.dynamic_range);

  const ScalarField mx = filter_valid(u, w, r);
  const ScalarField my = filter_valid(ref, w, r);
  const ScalarField sxx = filter_valid(product(u, u), w, r);
  const ScalarField syy = filter_valid(product(ref, ref), w, r);
  const ScalarField sxy = filter_valid(product(u, ref), w, r);

  double acc = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cxy = sxy[i] - mx[i] * my[i];
    acc += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2)) /
           ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
  }
  return acc / static_cast<double>(mx.size());
}

}  // namespace adareg
