#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "adareg/adaptive_weight.hpp"
#include "adareg/grid.hpp"

namespace adareg {

/// Linearized-ADMM parameters shared by all three solvers.
struct SolverConfig {
  double mu = 1.0;
  double tau = 8.0;
  int max_iters = 300;
  double tol_rel_change = 1e-5;  // 0 disables the early stop
  int lambda_update_every = 1;

  void validate() const;
};

/// Conventional spatially constant trade-off, never updated.
struct StaticWeight {
  double lambda = 0.5;
};

using WeightRule = std::variant<StaticWeight, AdaptiveWeightConfig>;

void validate(const WeightRule& rule);
bool is_adaptive(const WeightRule& rule) noexcept;

struct IterationRecord {
  int iter = 0;
  double energy = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  WeightStats lambda;
  // Smoothed mode only: lambda_lower_bound of the residual that produced `lambda`.
  std::optional<double> lambda_bound;
};

struct ConvergenceTrace {
  std::vector<IterationRecord> records;
  std::vector<std::string> warnings;
  bool converged = false;
};

/// Weight field for the given residual: constant for StaticWeight,
/// compute_lambda otherwise. `bound` receives the smoothed-mode lower bound.
ScalarField weight_from_residual(const WeightRule& rule, const ScalarField& rho, std::optional<double>* bound);

}  // namespace adareg
