#pragma once

#include "adareg/grid.hpp"

namespace adareg {

struct SsimConfig {
  double window_sigma = 1.5;
  int window_radius = 5;  // 11 x 11
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// 10 log10(range^2 / MSE); +infinity when the images are identical.
double psnr(const ScalarField& u, const ScalarField& ref, double dynamic_range = 1.0);

/// Mean of the Gaussian-windowed SSIM map over all windows that fit inside the image.
double ssim(const ScalarField& u, const ScalarField& ref, const SsimConfig& cfg = {});

}  // namespace adareg
