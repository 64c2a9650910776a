#include "mcgl/pds_solver.hpp"

#include "mcgl/eigen_sym.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace mcgl {

namespace {

constexpr double kStopFloor = 1e-20;

} // namespace

void SolverParams::validate() const
{
  penalty.validate();
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(tau) || !positive(sigma) || !positive(rho) || !positive(epsilon)) {
    throw std::invalid_argument("tau, sigma, rho and epsilon must be positive and finite");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("max_iter must be at least 1");
  }
  if (!(support_threshold >= 0.0)) {
    throw std::invalid_argument("support_threshold must be nonnegative");
  }
}

const char* to_string(Admissibility a)
{
  switch (a) {
  case Admissibility::ProvablyConvergent:
    return "ProvablyConvergent";
  case Admissibility::ConvexButStepsViolated:
    return "ConvexButStepsViolated";
  case Admissibility::NonconvexMode:
    return "NonconvexMode";
  }
  return "unknown";
}

ParamVerdict validate_params(const SolverParams& params, std::size_t n)
{
  if (n < 2) {
    throw std::invalid_argument("validate_params requires n >= 2");
  }
  const PenaltyParams& pen = params.penalty;
  ParamVerdict v;
  v.convex = pen.convex_mode();

  const double gap = 1.0 / params.tau - 2.0 * params.sigma * static_cast<double>(n);
  v.step_margin = gap - pen.lambda2 / 2.0;
  v.step_condition = v.step_margin >= 0.0;
  if (gap > 0.0) {
    v.rho_bound = 2.0 - (pen.lambda2 / 2.0) / gap;
    v.relaxation_condition = params.rho > 0.0 && params.rho < v.rho_bound;
  } else {
    v.rho_bound = std::numeric_limits<double>::quiet_NaN();
    v.relaxation_condition = false;
  }

  std::ostringstream msg;
  if (!v.convex) {
    v.verdict = Admissibility::NonconvexMode;
    msg << "lambda2 = " << pen.lambda2 << " < gamma_inv * lambda1 = " << pen.gamma_inv * pen.lambda1
        << "; objective is nonconvex, no global convergence guarantee";
  } else if (!v.step_condition || !v.relaxation_condition) {
    v.verdict = Admissibility::ConvexButStepsViolated;
    if (!v.step_condition) {
      msg << "step condition 1/tau >= 2 sigma n + lambda2/2 violated (margin " << v.step_margin << ")";
    }
    if (!v.relaxation_condition) {
      if (!v.step_condition) {
        msg << "; ";
      }
      msg << "relaxation condition 0 < rho < " << v.rho_bound << " violated (rho = " << params.rho << ")";
    }
  } else {
    v.verdict = Admissibility::ProvablyConvergent;
    msg << "all convergence conditions hold";
  }
  v.message = msg.str();
  return v;
}

Vector primal_step(const SolverState& state, const Vector& S_adj, const SolverParams& params)
{
  const PenaltyParams& pen = params.penalty;
  const Vector forward = state.w - params.tau * apply_L_adjoint(state.V) - params.tau * grad_F(state.w, pen);
  return prox_G(forward, params.tau, pen.lambda1, S_adj);
}

Matrix dual_step(const SolverState& state, const Vector& w_tilde, const SolverParams& params)
{
  const double sigma = params.sigma;
  const auto n = static_cast<std::size_t>(state.V.rows());
  const Matrix J = averaging_matrix(n);
  const Matrix extrapolated = apply_L(Vector(2.0 * w_tilde - state.w));

  const SymmetricEigen eig = eigen_symmetric(symmetrized(J + state.V / sigma + extrapolated));
  const double c = 4.0 / sigma;
  const Matrix mapped = spectral_map(eig, [c](double nu) { return 0.5 * (nu + std::sqrt(nu * nu + c)); });

  return symmetrized(state.V + sigma * extrapolated + sigma * J - sigma * mapped);
}

SolverState relax_step(const SolverState& state, const Vector& w_tilde, const Matrix& V_tilde, double rho)
{
  if (!(rho > 0.0)) {
    throw std::invalid_argument("relaxation parameter must be positive");
  }
  SolverState next = state;
  if (rho == 1.0) {
    next.w = w_tilde;
    next.V = V_tilde;
  } else {
    next.w = rho * w_tilde + (1.0 - rho) * state.w;
    next.V = rho * V_tilde + (1.0 - rho) * state.V;
  }
  return next;
}

InitialPoint default_initial_point(std::size_t n)
{
  const auto N = static_cast<Eigen::Index>(n);
  return {Vector::Constant(static_cast<Eigen::Index>(num_edges(n)), 1.0 / static_cast<double>(n)), Matrix::Zero(N, N)};
}

SolveReport solve(const Matrix& S, const SolverParams& params, const std::optional<InitialPoint>& init)
{
  params.validate();
  if (S.rows() != S.cols() || S.rows() < 2) {
    throw std::invalid_argument("covariance must be square with n >= 2");
  }
  const auto n = static_cast<std::size_t>(S.rows());
  const auto start = std::chrono::steady_clock::now();

  SolveReport report;
  report.verdict = validate_params(params, n);

  InitialPoint x0 = init ? *init : default_initial_point(n);
  if (static_cast<std::size_t>(x0.w.size()) != num_edges(n) || x0.V.rows() != S.rows() || x0.V.cols() != S.cols()) {
    throw std::invalid_argument("initial point dimensions do not match the covariance");
  }

  SolverState state{std::move(x0.w), symmetrized(x0.V), 0, 0.0, 0.0};
  const Vector S_adj = apply_L_adjoint(S);
  report.objective_trace.reserve(static_cast<std::size_t>(params.max_iter));

  for (int k = 1; k <= params.max_iter; ++k) {
    const Vector w_tilde = primal_step(state, S_adj, params);
    Matrix V_tilde;
    try {
      V_tilde = dual_step(state, w_tilde, params);
    } catch (const EigenDecompositionError& e) {
      throw SolverError(std::string("dual update failed at iteration ") + std::to_string(k) + ": " + e.what(), k);
    }

    if (params.dual_check_every > 0 && (k - 1) % params.dual_check_every == 0) {
      const Matrix moreau =
          prox_H_conjugate(symmetrized(state.V + params.sigma * apply_L(Vector(2.0 * w_tilde - state.w))), params.sigma);
      if ((moreau - V_tilde).norm() > 1e-10 * std::max(1.0, V_tilde.norm())) {
        ++report.dual_check_failures;
      }
    }

    SolverState next = relax_step(state, w_tilde, V_tilde, params.rho);
    if (!next.w.allFinite() || !next.V.allFinite()) {
      throw SolverError("non-finite iterate at iteration " + std::to_string(k), k);
    }

    next.iter = k;
    next.rel_change = (next.w - state.w).squaredNorm() / std::max(state.w.squaredNorm(), kStopFloor);
    next.objective = objective_P2(next.w, S, params.penalty);
    report.objective_trace.push_back(next.objective);
    state = std::move(next);

    if (state.rel_change <= params.epsilon) {
      report.converged = true;
      break;
    }
  }

  report.iterations = state.iter;
  Vector exported = project_nonneg(state.w);
  exported = (exported.array() > params.support_threshold).select(exported, 0.0);
  report.weights = WeightVector(n, std::move(exported));
  report.theta = apply_L(report.weights);
  report.state = std::move(state);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

} // namespace mcgl
