#pragma once

#include "mcgl/graph_core.hpp"
#include "mcgl/penalties.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcgl {

struct SolverParams {
  PenaltyParams penalty;
  double tau = 1.0;      // primal step
  double sigma = 4.9e-3; // dual step
  double rho = 1.0;      // relaxation, constant over the run
  double epsilon = 1e-4; // relative squared change tolerance
  int max_iter = 5000;

  /// Weights at or below this value are zeroed in the exported graph.
  double support_threshold = 1e-8;
  /// Cross-check of the two dual-update formulas every this many
  /// iterations; 0 disables it.
  int dual_check_every = 100;

  /// Throws std::invalid_argument on nonpositive steps, tolerance or
  /// iteration budget, or invalid penalty weights.
  void validate() const;
};

enum class Admissibility {
  ProvablyConvergent,
  ConvexButStepsViolated,
  NonconvexMode,
};

const char* to_string(Admissibility a);

/// Outcome of checking the step sizes against the convergence conditions
///   lambda2 >= gamma_inv * lambda1,
///   1/tau >= 2 sigma n + lambda2 / 2,
///   0 < rho < 2 - (lambda2 / 2) (1/tau - 2 sigma n)^{-1}.
struct ParamVerdict {
  Admissibility verdict = Admissibility::NonconvexMode;
  bool convex = false;
  bool step_condition = false;
  bool relaxation_condition = false;
  double step_margin = 0.0; // 1/tau - 2 sigma n - lambda2/2
  double rho_bound = 0.0;   // NaN when the step condition fails
  std::string message;
};

ParamVerdict validate_params(const SolverParams& params, std::size_t n);

struct SolverState {
  Vector w;
  Matrix V;
  int iter = 0;
  double rel_change = 0.0;
  double objective = 0.0;
};

struct SolveReport {
  SolverState state;
  bool converged = false;
  int iterations = 0;
  /// One objective value per iteration; +inf marks a disconnected iterate.
  std::vector<double> objective_trace;
  double wall_seconds = 0.0;
  ParamVerdict verdict;
  /// Final weights after projection and the support threshold.
  WeightVector weights{2};
  Matrix theta;
  /// Dual updates whose two formulas disagreed beyond 1e-10 relative.
  int dual_check_failures = 0;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, int iteration) : std::runtime_error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

private:
  int iteration_;
};

/// w~ = P_C[w - tau L*(V) - tau (lambda1 1 + L*(S)) - tau grad_F(w)].
Vector primal_step(const SolverState& state, const Vector& S_adj, const SolverParams& params);

/// V~ = V + sigma L(2 w~ - w) + sigma J - sigma U diag(g(nu)) U^T, where
/// (nu, U) are the eigenpairs of J + V / sigma + L(2 w~ - w) and
/// g(nu) = (nu + sqrt(nu^2 + 4 / sigma)) / 2. Output is symmetrized.
Matrix dual_step(const SolverState& state, const Vector& w_tilde, const SolverParams& params);

/// (w, V) <- rho (w~, V~) + (1 - rho) (w, V). No projection.
SolverState relax_step(const SolverState& state, const Vector& w_tilde, const Matrix& V_tilde, double rho);

struct InitialPoint {
  Vector w;
  Matrix V;
};

/// Uniform weights 1/n and zero dual.
InitialPoint default_initial_point(std::size_t n);

/// Runs the primal-dual iteration until the relative squared change of w
/// drops to epsilon or max_iter is reached. The admissibility verdict is
/// recorded but not enforced. Throws SolverError on non-finite iterates and
/// std::invalid_argument on inconsistent dimensions.
SolveReport solve(const Matrix& S, const SolverParams& params, const std::optional<InitialPoint>& init = std::nullopt);

} // namespace mcgl
