#include "mcgl/penalties.hpp"

#include "mcgl/eigen_sym.hpp"

#include <cmath>
#include <limits>

namespace mcgl {

namespace {

void require_positive(double value, const char* name)
{
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

double huber_scalar(double t, double gamma)
{
  const double a = std::abs(t);
  return a <= gamma ? t * t / (2.0 * gamma) : a - gamma / 2.0;
}

} // namespace

void PenaltyParams::validate() const
{
  for (double v : {lambda1, lambda2, gamma_inv}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("lambda1, lambda2 and gamma_inv must be finite and nonnegative");
    }
  }
}

double huber_envelope(const Vector& w, double gamma)
{
  require_positive(gamma, "gamma");
  double sum = 0.0;
  for (double t : w) {
    sum += huber_scalar(t, gamma);
  }
  return sum;
}

double mc_penalty(const Vector& w, double gamma)
{
  require_positive(gamma, "gamma");
  double sum = 0.0;
  std::size_t saturated = 0;
  for (double t : w) {
    const double a = std::abs(t);
    if (a <= gamma) {
      sum += a - t * t / (2.0 * gamma);
    } else {
      ++saturated;
    }
  }
  return sum + static_cast<double>(saturated) * (gamma / 2.0);
}

Vector soft_threshold(const Vector& w, const Vector& delta)
{
  if (w.size() != delta.size()) {
    throw std::invalid_argument("soft_threshold: length mismatch");
  }
  Vector out(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double d = delta[i];
    if (!(d > 0.0)) {
      throw std::invalid_argument("soft_threshold: thresholds must be positive");
    }
    const double t = w[i];
    out[i] = t >= d ? t - d : (t <= -d ? t + d : 0.0);
  }
  return out;
}

Vector soft_threshold(const Vector& w, double delta)
{
  return soft_threshold(w, Vector::Constant(w.size(), delta));
}

Vector project_nonneg(const Vector& w) { return w.cwiseMax(0.0); }

Vector prox_G(const Vector& w, double tau, double lambda1, const Vector& Ls)
{
  require_positive(tau, "tau");
  if (w.size() != Ls.size()) {
    throw std::invalid_argument("prox_G: length mismatch");
  }
  return project_nonneg(w - tau * (Vector::Constant(w.size(), lambda1) + Ls));
}

Matrix prox_neg_logdet_shifted(const Matrix& W, double sigma)
{
  require_positive(sigma, "sigma");
  if (W.rows() != W.cols()) {
    throw std::invalid_argument("prox_neg_logdet_shifted: matrix must be square");
  }
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("prox_neg_logdet_shifted: matrix is not symmetric");
  }
  const auto n = static_cast<std::size_t>(W.rows());
  const Matrix J = averaging_matrix(n);
  const SymmetricEigen eig = eigen_symmetric(symmetrized(W) + J);
  const double c = 4.0 / sigma;
  Matrix X = spectral_map(eig, [c](double mu) { return 0.5 * (mu + std::sqrt(mu * mu + c)); });
  return symmetrized(X) - J;
}

Matrix prox_H_conjugate(const Matrix& U, double sigma)
{
  require_positive(sigma, "sigma");
  return U - sigma * prox_neg_logdet_shifted(U / sigma, sigma);
}

double smooth_part(const Vector& w, const PenaltyParams& params)
{
  double value = 0.5 * params.lambda2 * w.squaredNorm();
  if (params.gamma_inv > 0.0) {
    value -= params.lambda1 * huber_envelope(w, 1.0 / params.gamma_inv);
  }
  return value;
}

Vector grad_F(const Vector& w, const PenaltyParams& params)
{
  if (params.gamma_inv == 0.0) {
    return params.lambda2 * w;
  }
  const double mc = params.gamma_inv * params.lambda1;
  return mc * soft_threshold(w, 1.0 / params.gamma_inv) + (params.lambda2 - mc) * w;
}

std::optional<double> logdet_shifted(const Matrix& theta)
{
  const auto n = static_cast<std::size_t>(theta.rows());
  const Vector mu = eigenvalues_symmetric(theta + averaging_matrix(n));
  const double top = mu[mu.size() - 1];
  if (!(mu[0] > 0.0) || mu[0] <= 1e-12 * top) {
    return std::nullopt;
  }
  return mu.array().log().sum();
}

double objective_P2(const Vector& w, const Matrix& S, const PenaltyParams& params)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!w.allFinite() || (w.array() < 0.0).any()) {
    return inf;
  }
  const Matrix theta = apply_L(w);
  if (S.rows() != theta.rows() || S.cols() != theta.cols()) {
    throw std::invalid_argument("objective_P2: covariance size does not match weight vector");
  }
  const auto logdet = logdet_shifted(theta);
  if (!logdet) {
    return inf;
  }
  return smooth_part(w, params) + params.lambda1 * w.sum() + (S.array() * theta.array()).sum() - *logdet;
}

} // namespace mcgl
