#pragma once

#include "adareg/solver.hpp"

namespace adareg {

struct RegionMeans {
  double c1 = 0.0;  // interior, weighted by u
  double c2 = 0.0;  // exterior, weighted by 1 - u
};

struct SegmentState {
  ScalarField u;  // relaxed indicator in [0, 1]
  VectorField2 z;
  VectorField2 y;
  ScalarField lambda;
  RegionMeans means;
  int iter = 0;
};

struct SegmentOptions {
  double theta = 0.5;
  // When false the means computed at initialization stay fixed.
  bool update_means = true;
};

struct SegmentResult {
  BinaryMask mask;  // 1 where u > theta
  ScalarField u;
  double c1 = 0.0;
  double c2 = 0.0;
  ScalarField lambda;
  ConvergenceTrace trace;
};

/// Weighted region means; throws Errc::degenerate_region when either region is empty.
RegionMeans estimate_means(const ScalarField& f, const ScalarField& u);

/// (f - c1)^2 u + (f - c2)^2 (1 - u): the residual driving the adaptive weight.
ScalarField segment_residual(const ScalarField& f, const ScalarField& u, RegionMeans m);

/// Relaxed energy with fixed weight and means:
/// sum of lambda q u + (1 - lambda)(|dx u| + |dy u|), q = (f - c1)^2 - (f - c2)^2.
double segment_energy(const ScalarField& u, const ScalarField& f, const ScalarField& lambda, RegionMeans m);

/// Min-max rescale to [0, 1]; the segmentation initial guess.
ScalarField normalize_range(const ScalarField& f);

/// Default adaptive rule for segmentation: smoothed with epsilon 0 and kernel
/// sigma 1, so an exact piecewise-constant fit still gives lambda = 1.
AdaptiveWeightConfig default_segment_weight(double beta);

/// Two-phase convex segmentation started from the range-normalized input image.
SegmentResult segment(const ScalarField& f, const WeightRule& rule, const SolverConfig& cfg = {},
                      const SegmentOptions& opts = {});

BinaryMask threshold(const ScalarField& u, double theta);

/// Harmonic mean of precision and recall of `mask` against `truth`; 0 when both vanish.
double f_measure(const BinaryMask& mask, const BinaryMask& truth);

}  // namespace adareg
