#include "adareg/solver.hpp"

#include <cmath>

#include "adareg/error.hpp"

namespace adareg {

void SolverConfig::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::invalid_argument, "mu must be positive");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw Error(Errc::invalid_argument, "tau must be positive");
  if (max_iters < 1) throw Error(Errc::invalid_argument, "max_iters must be at least 1");
  if (!(tol_rel_change >= 0.0)) throw Error(Errc::invalid_argument, "tol_rel_change must be nonnegative");
  if (lambda_update_every < 1) throw Error(Errc::invalid_argument, "lambda_update_every must be at least 1");
}

void validate(const WeightRule& rule) {
  if (const auto* s = std::get_if<StaticWeight>(&rule)) {
    if (!(s->lambda > 0.0 && s->lambda < 1.0)) {
      throw Error(Errc::invalid_argument, "static lambda must lie in (0, 1)");
    }
    return;
  }
  std::get<AdaptiveWeightConfig>(rule).validate();
}

bool is_adaptive(const WeightRule& rule) noexcept { return std::holds_alternative<AdaptiveWeightConfig>(rule); }

ScalarField weight_from_residual(const WeightRule& rule, const ScalarField& rho, std::optional<double>* bound) {
  if (bound) bound->reset();
  if (const auto* s = std::get_if<StaticWeight>(&rule)) {
    return ScalarField(rho.width(), rho.height(), s->lambda);
  }
  const auto& cfg = std::get<AdaptiveWeightConfig>(rule);
  if (bound && cfg.mode == WeightMode::Smoothed) *bound = lambda_lower_bound(rho, cfg);
  return compute_lambda(rho, cfg);
}

}  // namespace adareg
