#pragma once

// Reference computations used only by tests. They avoid the library's
// matrix-free operators and closed-form proxes on purpose.

#include "mcgl/graph_core.hpp"
#include "mcgl/rng.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

namespace oracle {

using mcgl::Matrix;
using mcgl::Vector;

/// Explicit n^2 x n(n-1)/2 matrix D with vec(L(w)) = D w (column-major vec),
/// built from the definition Theta = diag(W 1) - W.
inline Matrix dense_L(std::size_t n)
{
  const auto N = static_cast<Eigen::Index>(n);
  Matrix D = Matrix::Zero(N * N, static_cast<Eigen::Index>(mcgl::num_edges(n)));
  Eigen::Index k = 0;
  for (Eigen::Index p = 0; p < N; ++p) {
    for (Eigen::Index q = p + 1; q < N; ++q, ++k) {
      D(p + p * N, k) += 1.0;
      D(q + q * N, k) += 1.0;
      D(p + q * N, k) -= 1.0;
      D(q + p * N, k) -= 1.0;
    }
  }
  return D;
}

/// Largest singular value by power iteration on A^T A given as a callback.
inline double power_iteration(const std::function<Vector(const Vector&)>& gram, Eigen::Index dim, int iters,
                              std::uint64_t seed)
{
  mcgl::Rng rng(seed);
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    v[i] = rng.normal();
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    Vector next = gram(v);
    lambda = next.norm();
    v = next / lambda;
  }
  return std::sqrt(lambda);
}

/// min_y f(y) on [lo, hi] for unimodal f, golden section.
inline double golden_min(const std::function<double(double)>& f, double lo, double hi, double* argmin = nullptr)
{
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  if (argmin) {
    *argmin = x;
  }
  return f(x);
}

/// Moreau envelope of |.| with index gamma at t, from its variational
/// definition min_y |y| + (t - y)^2 / (2 gamma).
inline double huber_variational(double t, double gamma)
{
  const double span = std::abs(t) + 1.0;
  return golden_min([&](double y) { return std::abs(y) + (t - y) * (t - y) / (2.0 * gamma); }, -span, span);
}

/// Squared distance of w to the l_inf ball of radius r.
inline double dist2_box(const Vector& w, double r)
{
  double s = 0.0;
  for (double t : w) {
    const double e = std::max(std::abs(t) - r, 0.0);
    s += e * e;
  }
  return s;
}

/// Independent evaluation of the learning objective through the explicit
/// operator matrix and a Cholesky log-determinant.
struct DenseProblem {
  std::size_t n;
  Matrix D;
  Matrix S;
  double lambda1, lambda2, gamma_inv;

  DenseProblem(const Matrix& S_, double l1, double l2, double gi)
      : n(static_cast<std::size_t>(S_.rows())), D(dense_L(n)), S(S_), lambda1(l1), lambda2(l2), gamma_inv(gi)
  {
  }

  Matrix laplacian(const Vector& w) const
  {
    const auto N = static_cast<Eigen::Index>(n);
    Vector v = D * w;
    return Eigen::Map<const Matrix>(v.data(), N, N);
  }

  Matrix shifted(const Vector& w) const
  {
    const auto N = static_cast<Eigen::Index>(n);
    return laplacian(w) + Matrix::Constant(N, N, 1.0 / static_cast<double>(n));
  }

  // -lambda1 * Huber_gamma(w) + lambda2/2 ||w||^2 with the Huber written out.
  double smooth(const Vector& w) const
  {
    double v = 0.5 * lambda2 * w.squaredNorm();
    if (gamma_inv > 0.0) {
      const double gamma = 1.0 / gamma_inv;
      for (double t : w) {
        const double a = std::abs(t);
        v -= lambda1 * (a <= gamma ? t * t / (2.0 * gamma) : a - gamma / 2.0);
      }
    }
    return v;
  }

  Vector smooth_grad(const Vector& w) const
  {
    Vector g = lambda2 * w;
    if (gamma_inv > 0.0) {
      const double gamma = 1.0 / gamma_inv;
      for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double t = w[i];
        g[i] -= lambda1 * (std::abs(t) <= gamma ? t / gamma : (t > 0 ? 1.0 : -1.0));
      }
    }
    return g;
  }

  std::optional<double> value(const Vector& w) const
  {
    if ((w.array() < 0.0).any()) {
      return std::nullopt;
    }
    Eigen::LLT<Matrix> llt(shifted(w));
    if (llt.info() != Eigen::Success) {
      return std::nullopt;
    }
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    const Eigen::Map<const Vector> s(S.data(), S.size());
    return smooth(w) + lambda1 * w.sum() + s.dot(D * w) - logdet;
  }

  Vector gradient(const Vector& w) const
  {
    const Matrix inv = shifted(w).inverse();
    const Eigen::Map<const Vector> s(S.data(), S.size());
    const Eigen::Map<const Vector> vi(inv.data(), inv.size());
    return smooth_grad(w) + Vector::Constant(w.size(), lambda1) + D.transpose() * (s - vi);
  }
};

/// Projected gradient with Armijo backtracking on the nonnegative orthant.
inline double projected_gradient_min(const DenseProblem& prob, Vector w, int max_iter, Vector* argmin = nullptr)
{
  double f = *prob.value(w);
  double step = 1.0;
  for (int it = 0; it < max_iter; ++it) {
    const Vector g = prob.gradient(w);
    bool moved = false;
    for (int bt = 0; bt < 80; ++bt) {
      const Vector cand = (w - step * g).cwiseMax(0.0);
      const auto fc = prob.value(cand);
      if (fc && *fc <= f - 1e-4 / step * (cand - w).squaredNorm()) {
        const double change = (cand - w).norm();
        w = cand;
        f = *fc;
        moved = true;
        step *= 1.5;
        if (change < 1e-15) {
          it = max_iter;
        }
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      break;
    }
  }
  if (argmin) {
    *argmin = w;
  }
  return f;
}

} // namespace oracle
