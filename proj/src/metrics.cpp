#include "mcgl/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace mcgl {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b)
{
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw std::invalid_argument("estimate and truth must be square matrices of equal size");
  }
}

} // namespace

double relative_error(const Matrix& theta_hat, const Matrix& theta_star)
{
  require_same_shape(theta_hat, theta_star);
  const double denom = theta_star.squaredNorm();
  if (denom == 0.0) {
    throw std::invalid_argument("relative_error: reference Laplacian is zero");
  }
  return (theta_hat - theta_star).squaredNorm() / denom;
}

EvalResult f_score(const Matrix& theta_hat, const Matrix& theta_star, double support_tol)
{
  require_same_shape(theta_hat, theta_star);
  if (!(support_tol >= 0.0)) {
    throw std::invalid_argument("support_tol must be nonnegative");
  }
  EvalResult r;
  const Eigen::Index n = theta_star.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool est = std::abs(theta_hat(i, j)) > support_tol;
      const bool tru = std::abs(theta_star(i, j)) > support_tol;
      r.nnz_estimate += est;
      r.nnz_truth += tru;
      if (est && tru) {
        ++r.tp;
      } else if (est) {
        ++r.fp;
      } else if (tru) {
        ++r.fn;
      } else {
        ++r.tn;
      }
    }
  }
  const std::size_t denom = 2 * r.tp + r.fn + r.fp;
  r.f_score = denom == 0 ? 1.0 : 2.0 * static_cast<double>(r.tp) / static_cast<double>(denom);
  r.relative_error = theta_star.squaredNorm() == 0.0 ? std::nan("") : relative_error(theta_hat, theta_star);
  return r;
}

} // namespace mcgl
