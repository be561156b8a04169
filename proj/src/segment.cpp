#include "adareg/segment.hpp"

#include <algorithm>
#include <cmath>

#include "adareg/error.hpp"

namespace adareg {

namespace {

constexpr double kDegenerateFraction = 1e-9;

}  // namespace

ScalarField normalize_range(const ScalarField& f) {
  const double lo = min_value(f);
  const double hi = max_value(f);
  if (!(hi > lo)) throw Error(Errc::degenerate_region, "constant image has no second region");
  ScalarField u(f.width(), f.height());
  const double scale = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < f.size(); ++i) u[i] = std::clamp((f[i] - lo) * scale, 0.0, 1.0);
  return u;
}

RegionMeans estimate_means(const ScalarField& f, const ScalarField& u) {
  require_same_shape(f, u, "estimate_means");
  double su = 0.0, sfu = 0.0, sv = 0.0, sfv = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    su += u[i];
    sfu += f[i] * u[i];
    sv += 1.0 - u[i];
    sfv += f[i] * (1.0 - u[i]);
  }
  const double floor = kDegenerateFraction * static_cast<double>(f.size());
  if (su < floor || sv < floor) {
    throw Error(Errc::degenerate_region, su < floor ? "interior region is empty" : "exterior region is empty");
  }
  RegionMeans m{sfu / su, sfv / sv};
  // Keep the means inside the data range against cancellation.
  const double lo = min_value(f);
  const double hi = max_value(f);
  m.c1 = std::clamp(m.c1, lo, hi);
  m.c2 = std::clamp(m.c2, lo, hi);
  return m;
}

ScalarField segment_residual(const ScalarField& f, const ScalarField& u, RegionMeans m) {
  require_same_shape(f, u, "segment residual");
  ScalarField rho(f.width(), f.height());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = f[i] - m.c1;
    const double b = f[i] - m.c2;
    rho[i] = a * a * u[i] + b * b * (1.0 - u[i]);
  }
  return rho;
}

double segment_energy(const ScalarField& u, const ScalarField& f, const ScalarField& lambda, RegionMeans m) {
  require_same_shape(u, f, "segment energy");
  require_same_shape(u, lambda, "segment energy");
  const VectorField2 g = gradient(u);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = f[i] - m.c1;
    const double b = f[i] - m.c2;
    e += lambda[i] * (a * a - b * b) * u[i] + (1.0 - lambda[i]) * (std::abs(g.x[i]) + std::abs(g.y[i]));
  }
  return e;
}

BinaryMask threshold(const ScalarField& u, double theta) {
  BinaryMask mask(u.width(), u.height());
  for (std::size_t i = 0; i < u.size(); ++i) mask.bits[i] = u[i] > theta ? 1 : 0;
  return mask;
}

AdaptiveWeightConfig default_segment_weight(double beta) {
  return AdaptiveWeightConfig::smoothed(beta, 0.0, 1.0);
}

SegmentResult segment(const ScalarField& f, const WeightRule& rule, const SolverConfig& cfg,
                      const SegmentOptions& opts) {
  cfg.validate();
  validate(rule);
  if (!(opts.theta > 0.0 && opts.theta < 1.0)) throw Error(Errc::invalid_argument, "theta must lie in (0, 1)");
  if (f.empty() || !all_finite(f)) throw Error(Errc::invalid_argument, "input image must be nonempty and finite");

  const int w = f.width();
  const int h = f.height();
  const double mu = cfg.mu;
  const double tau = cfg.tau;

  SegmentState st;
  st.u = normalize_range(f);
  st.z = gradient(st.u);
  st.y = VectorField2(w, h);
  st.means = estimate_means(f, st.u);
  if (std::abs(st.means.c1 - st.means.c2) < 1e-12) {
    throw Error(Errc::degenerate_region, "region means coincide (c1 = c2 = " + std::to_string(st.means.c1) + ")");
  }
  std::optional<double> bound;
  st.lambda = weight_from_residual(rule, segment_residual(f, st.u, st.means), &bound);

  SegmentResult out;
  ScalarField u_next(w, h);
  for (st.iter = 0; st.iter < cfg.max_iters; ++st.iter) {
    if (opts.update_means && st.iter > 0) {
      try {
        st.means = estimate_means(f, st.u);
      } catch (const Error& e) {
        if (e.code() != Errc::degenerate_region) throw;
        out.trace.warnings.push_back("iteration " + std::to_string(st.iter + 1) + ": " + e.what() +
                                     "; keeping previous means");
      }
    }

    VectorField2 coupling = gradient(st.u);
    for (std::size_t i = 0; i < coupling.size(); ++i) {
      coupling.x[i] += st.y.x[i] - st.z.x[i];
      coupling.y[i] += st.y.y[i] - st.z.y[i];
    }
    const ScalarField div = divergence(coupling);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = f[i] - st.means.c1;
      const double b = f[i] - st.means.c2;
      const double q = a * a - b * b;
      const double step = st.u[i] - (st.lambda[i] / tau) * q + (mu / tau) * div[i];
      u_next[i] = std::clamp(step, 0.0, 1.0);
    }

    const VectorField2 grad = gradient(u_next);
    double primal_sq = 0.0;
    double dual_sq = 0.0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double t = (1.0 - st.lambda[i]) / mu;
      const double zx = soft_shrink(grad.x[i] + st.y.x[i], t);
      const double zy = soft_shrink(grad.y[i] + st.y.y[i], t);
      dual_sq += (zx - st.z.x[i]) * (zx - st.z.x[i]) + (zy - st.z.y[i]) * (zy - st.z.y[i]);
      const double rx = grad.x[i] - zx;
      const double ry = grad.y[i] - zy;
      primal_sq += rx * rx + ry * ry;
      st.y.x[i] += rx;
      st.y.y[i] += ry;
      st.z.x[i] = zx;
      st.z.y[i] = zy;
    }

    IterationRecord rec;
    rec.iter = st.iter + 1;
    rec.energy = segment_energy(u_next, f, st.lambda, st.means);
    rec.primal_residual = std::sqrt(primal_sq);
    rec.dual_residual = mu * std::sqrt(dual_sq);

    double diff_sq = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) diff_sq += (u_next[i] - st.u[i]) * (u_next[i] - st.u[i]);
    const double ref = norm2(st.u);
    const double rel_change = ref > 0.0 ? std::sqrt(diff_sq) / ref : std::sqrt(diff_sq);
    std::swap(st.u, u_next);

    if (!all_finite(st.y) || !std::isfinite(rec.energy)) {
      throw Error(Errc::divergence, "non-finite iterate at segmentation iteration " + std::to_string(rec.iter));
    }

    if (is_adaptive(rule) && (st.iter + 1) % cfg.lambda_update_every == 0) {
      st.lambda = weight_from_residual(rule, segment_residual(f, st.u, st.means), &bound);
    }
    rec.lambda = weight_stats(st.lambda);
    rec.lambda_bound = bound;
    out.trace.records.push_back(rec);

    if (cfg.tol_rel_change > 0.0 && rel_change < cfg.tol_rel_change) {
      out.trace.converged = true;
      break;
    }
  }

  out.mask = threshold(st.u, opts.theta);
  out.u = std::move(st.u);
  out.c1 = st.means.c1;
  out.c2 = st.means.c2;
  out.lambda = std::move(st.lambda);
  return out;
}

double f_measure(const BinaryMask& mask, const BinaryMask& truth) {
  if (mask.width != truth.width || mask.height != truth.height) {
    throw Error(Errc::dimension_mismatch, "f_measure: mask and truth differ in size");
  }
  double tp = 0.0, fp = 0.0, fn = 0.0;
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    const bool m = mask.bits[i] != 0;
    const bool t = truth.bits[i] != 0;
    tp += m && t;
    fp += m && !t;
    fn += !m && t;
  }
  const double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
  const double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace adareg
