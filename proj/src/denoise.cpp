#include "adareg/denoise.hpp"

#include <cmath>

#include "adareg/error.hpp"

namespace adareg {

ScalarField denoise_residual(const ScalarField& u, const ScalarField& f) {
  require_same_shape(u, f, "denoise residual");
  ScalarField rho(u.width(), u.height());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - f[i];
    rho[i] = 0.5 * d * d;
  }
  return rho;
}

double denoise_energy(const ScalarField& u, const ScalarField& f, const ScalarField& lambda) {
  require_same_shape(u, f, "denoise energy");
  require_same_shape(u, lambda, "denoise energy");
  const VectorField2 g = gradient(u);
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - f[i];
    e += lambda[i] * 0.5 * d * d + (1.0 - lambda[i]) * (std::abs(g.x[i]) + std::abs(g.y[i]));
  }
  return e;
}

AdaptiveWeightConfig default_denoise_weight(double beta) {
  return AdaptiveWeightConfig::smoothed(beta, 0.05, 2.0);
}

DenoiseResult denoise(const ScalarField& f, const WeightRule& rule, const SolverConfig& cfg) {
  cfg.validate();
  validate(rule);
  if (f.empty() || !all_finite(f)) throw Error(Errc::invalid_argument, "input image must be nonempty and finite");

  const int w = f.width();
  const int h = f.height();
  const double mu = cfg.mu;
  const double tau = cfg.tau;

  DenoiseState st;
  st.u = f;
  st.z = gradient(f);
  st.y = VectorField2(w, h);
  std::optional<double> bound;
  st.lambda = weight_from_residual(rule, denoise_residual(st.u, f), &bound);

  DenoiseResult out;
  ScalarField u_next(w, h);
  for (st.iter = 0; st.iter < cfg.max_iters; ++st.iter) {
    // u: linearized proximal step on the augmented term.
    VectorField2 coupling = gradient(st.u);
    for (std::size_t i = 0; i < coupling.size(); ++i) {
      coupling.x[i] += st.y.x[i] - st.z.x[i];
      coupling.y[i] += st.y.y[i] - st.z.y[i];
    }
    const ScalarField div = divergence(coupling);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double l = st.lambda[i];
      u_next[i] = (tau * st.u[i] + l * f[i] + mu * div[i]) / (l + tau);
    }

    // z: componentwise shrinkage, then multiplier ascent.
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
    rec.energy = denoise_energy(u_next, f, st.lambda);
    rec.primal_residual = std::sqrt(primal_sq);
    rec.dual_residual = mu * std::sqrt(dual_sq);

    double diff_sq = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) diff_sq += (u_next[i] - st.u[i]) * (u_next[i] - st.u[i]);
    const double ref = norm2(st.u);
    const double rel_change = ref > 0.0 ? std::sqrt(diff_sq) / ref : std::sqrt(diff_sq);
    std::swap(st.u, u_next);

    if (!all_finite(st.u) || !all_finite(st.y) || !std::isfinite(rec.energy)) {
      throw Error(Errc::divergence, "non-finite iterate at denoising iteration " + std::to_string(rec.iter));
    }

    if (is_adaptive(rule) && (st.iter + 1) % cfg.lambda_update_every == 0) {
      st.lambda = weight_from_residual(rule, denoise_residual(st.u, f), &bound);
    }
    rec.lambda = weight_stats(st.lambda);
    rec.lambda_bound = bound;
    out.trace.records.push_back(rec);

    // From the consistent start z = grad f, y = 0 the first u step is the
    // identity, so the change test only applies from the second step on.
    if (st.iter > 0 && cfg.tol_rel_change > 0.0 && rel_change < cfg.tol_rel_change) {
      out.trace.converged = true;
      break;
    }
  }

  out.u = project_box(st.u, 0.0, 1.0);
  out.lambda = std::move(st.lambda);
  return out;
}

}  // namespace adareg
