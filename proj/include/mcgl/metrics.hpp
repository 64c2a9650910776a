#pragma once

#include "mcgl/graph_core.hpp"

#include <cstddef>

namespace mcgl {

struct EvalResult {
  double relative_error = 0.0;
  double f_score = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t nnz_estimate = 0;
  std::size_t nnz_truth = 0;
};

/// ||theta_hat - theta_star||_F^2 / ||theta_star||_F^2.
/// Throws std::invalid_argument on size mismatch or a zero reference.
double relative_error(const Matrix& theta_hat, const Matrix& theta_star);

/// 2 tp / (2 tp + fn + fp) over the upper-triangular off-diagonal pairs;
/// a pair is an edge when its weight (-entry) exceeds support_tol in
/// magnitude. Two empty supports score 1. relative_error is filled in too.
EvalResult f_score(const Matrix& theta_hat, const Matrix& theta_star, double support_tol = 1e-8);

} // namespace mcgl
