#pragma once

#include "adareg/solver.hpp"

namespace adareg {

/// Brightness constancy linearized about v0:
///   rho(w) = It + Ix (u - u0) + Iy (v - v0)
struct LinearizedData {
  ScalarField It;  // I1(x + v0) - I0(x)
  ScalarField Ix;
  ScalarField Iy;
  VectorField2 v0;
};

/// ADMM iterate for one pyramid level.
///   y ~ grad u, z ~ grad v, s ~ rho(w); p, q, r are the matching scaled multipliers.
struct FlowState {
  ScalarField u;
  ScalarField v;
  VectorField2 y;
  VectorField2 z;
  ScalarField s;
  VectorField2 p;
  VectorField2 q;
  ScalarField r;
  ScalarField lambda;
};

struct PyramidConfig {
  int levels = 1;
  double scale = 0.5;
  int warps_per_level = 5;
  int inner_iters = 100;

  /// levels = floor(log2(min_side / 16)) + 1, at least 1.
  static PyramidConfig defaults_for(int width, int height);
  /// Throws Errc::image_too_small if the coarsest level drops below 8 px a side.
  void validate(int width, int height) const;
};

struct FlowResult {
  VectorField2 flow;
  ScalarField lambda;  // weight on the finest level
  ConvergenceTrace trace;
};

/// img(x + flow(x)) by bilinear interpolation; sample positions clamp to the border.
ScalarField warp_bilinear(const ScalarField& img, const VectorField2& flow);

/// Central differences (one-sided on the border).
VectorField2 central_gradient(const ScalarField& img);

LinearizedData linearize(const ScalarField& I0, const ScalarField& I1, const VectorField2& v0);

ScalarField linearized_residual(const LinearizedData& data, const ScalarField& u, const ScalarField& v);

/// sum of lambda |rho(w)| + (1 - lambda)(||grad u||_2 + ||grad v||_2).
double flow_energy(const LinearizedData& data, const ScalarField& u, const ScalarField& v,
                   const ScalarField& lambda);

/// Fresh state at the linearization point: w = v0, y = grad u, z = grad v, s = It,
/// zero multipliers, lambda from |It|.
FlowState initial_flow_state(const LinearizedData& data, const WeightRule& rule);

/// Re-linearization keeps the flow, regularizer splits and their multipliers;
/// the data split restarts at the new residual and lambda is recomputed.
FlowState relinearized_state(const LinearizedData& data, const WeightRule& rule, FlowState prev);

/// cfg.max_iters ADMM cycles on one linearization. Appends to `trace` when given.
FlowState flow_level(const LinearizedData& data, const WeightRule& rule, const SolverConfig& cfg, FlowState state,
                     ConvergenceTrace* trace = nullptr);

/// Gaussian pre-blur followed by bilinear resampling to round(scale * size).
ScalarField downsample(const ScalarField& img, double scale);

/// Bilinear resize of the flow to (width, height), components rescaled by the size ratio.
VectorField2 upsample_flow(const VectorField2& flow, int width, int height);

/// Coarse-to-fine TV-L1 flow from I0 to I1 with warping on every level.
FlowResult flow_pyramid(const ScalarField& I0, const ScalarField& I1, const WeightRule& rule,
                        const SolverConfig& cfg, const PyramidConfig& pcfg);

/// Components larger than this in magnitude mark unknown ground truth.
inline constexpr double kUnknownFlow = 1e9;

/// Mean Euclidean distance to gt, in pixels, over known gt pixels.
double endpoint_error(const VectorField2& w, const VectorField2& gt);
/// Mean angle in degrees between (u, v, 1) and (u_gt, v_gt, 1) over known gt pixels.
double angular_error(const VectorField2& w, const VectorField2& gt);

}  // namespace adareg
