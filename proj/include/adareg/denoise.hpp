#pragma once

#include "adareg/solver.hpp"

namespace adareg {

/// Iterate of the denoising splitting: z mirrors gradient(u), y is the scaled multiplier.
struct DenoiseState {
  ScalarField u;
  VectorField2 z;
  VectorField2 y;
  ScalarField lambda;
  int iter = 0;
};

struct DenoiseResult {
  ScalarField u;       // clamped to [0, 1]
  ScalarField lambda;  // weight after the final update
  ConvergenceTrace trace;
};

/// Pointwise squared-error residual (u - f)^2 / 2.
ScalarField denoise_residual(const ScalarField& u, const ScalarField& f);

/// Sum of lambda (u - f)^2 / 2 + (1 - lambda)(|dx u| + |dy u|).
double denoise_energy(const ScalarField& u, const ScalarField& f, const ScalarField& lambda);

/// Default adaptive rule for denoising: smoothed, epsilon 0.05, kernel sigma 2.
AdaptiveWeightConfig default_denoise_weight(double beta);

/// Weighted anisotropic TV denoising by linearized ADMM, starting from u = f.
/// Adaptive rules refresh lambda from the current residual every
/// `lambda_update_every` iterations; StaticWeight keeps it constant.
DenoiseResult denoise(const ScalarField& f, const WeightRule& rule, const SolverConfig& cfg = {});

}  // namespace adareg
