#include "mcgl/graph_core.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace mcgl {

std::size_t nodes_from_edges(std::size_t len)
{
  // n(n-1)/2 = len  =>  n = (1 + sqrt(1 + 8 len)) / 2
  auto n = static_cast<std::size_t>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(len))) / 2.0));
  if (n < 2 || num_edges(n) != len) {
    throw std::invalid_argument("weight vector length " + std::to_string(len) +
                                " is not n(n-1)/2 for any n >= 2");
  }
  return n;
}

std::size_t edge_index(std::size_t p, std::size_t q, std::size_t n)
{
  if (p < 1 || q > n || p >= q) {
    throw std::invalid_argument("edge_index requires 1 <= p < q <= n");
  }
  // (2n - p - 1) p is always even, so the division is exact.
  return (2 * n - p - 1) * p / 2 + q - n;
}

WeightVector::WeightVector(std::size_t n) : WeightVector(n, Vector::Zero(static_cast<Eigen::Index>(num_edges(n)))) {}

WeightVector::WeightVector(std::size_t n, Vector values) : n_(n), values_(std::move(values))
{
  if (n < 2) {
    throw std::invalid_argument("a weight vector needs at least two nodes");
  }
  if (static_cast<std::size_t>(values_.size()) != num_edges(n)) {
    throw std::invalid_argument("weight vector length " + std::to_string(values_.size()) +
                                " does not match n(n-1)/2 = " + std::to_string(num_edges(n)));
  }
}

WeightVector WeightVector::constant(std::size_t n, double value)
{
  return WeightVector(n, Vector::Constant(static_cast<Eigen::Index>(num_edges(n)), value));
}

double WeightVector::weight(std::size_t i, std::size_t j) const
{
  if (i == j || i >= n_ || j >= n_) {
    throw std::out_of_range("invalid node pair");
  }
  if (i > j) {
    std::swap(i, j);
  }
  return (*this)[edge_offset(i, j, n_)];
}

bool WeightVector::feasible() const { return (values_.array() >= 0.0).all(); }

std::size_t WeightVector::support_size(double tol) const
{
  return static_cast<std::size_t>((values_.array() > tol).count());
}

Matrix apply_L(const Vector& w)
{
  const std::size_t n = nodes_from_edges(static_cast<std::size_t>(w.size()));
  const auto N = static_cast<Eigen::Index>(n);
  Matrix out = Matrix::Zero(N, N);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i + 1; j < N; ++j, ++k) {
      const double v = w[k];
      out(i, j) = -v;
      out(j, i) = -v;
      out(i, i) += v;
      out(j, j) += v;
    }
  }
  return out;
}

Vector apply_L_adjoint(const Matrix& M)
{
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("apply_L_adjoint requires a square matrix");
  }
  if (M.rows() < 2) {
    throw std::invalid_argument("apply_L_adjoint requires n >= 2");
  }
  const Eigen::Index N = M.rows();
  Vector out(static_cast<Eigen::Index>(num_edges(static_cast<std::size_t>(N))));
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = i + 1; j < N; ++j, ++k) {
      out[k] = M(i, i) + M(j, j) - M(i, j) - M(j, i);
    }
  }
  return out;
}

double operator_norm(std::size_t n)
{
  if (n < 2) {
    throw std::invalid_argument("operator_norm requires n >= 2");
  }
  return std::sqrt(2.0 * static_cast<double>(n));
}

bool validate_cgl(const Matrix& M, double tol)
{
  if (M.rows() != M.cols()) {
    return false;
  }
  const Eigen::Index N = M.rows();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (M(i, i) < -tol) {
      return false;
    }
    if (std::abs(M.row(i).sum()) > tol) {
      return false;
    }
    for (Eigen::Index j = i + 1; j < N; ++j) {
      if (std::abs(M(i, j) - M(j, i)) > tol || M(i, j) > tol) {
        return false;
      }
    }
  }
  return true;
}

WeightVector weights_from_laplacian(const Matrix& M)
{
  if (M.rows() != M.cols()) {
    throw std::invalid_argument("Laplacian must be square");
  }
  const auto n = static_cast<std::size_t>(M.rows());
  WeightVector w(n);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < M.cols(); ++j, ++k) {
      w[k] = -M(i, j);
    }
  }
  return w;
}

Matrix averaging_matrix(std::size_t n)
{
  const auto N = static_cast<Eigen::Index>(n);
  return Matrix::Constant(N, N, 1.0 / static_cast<double>(n));
}

std::size_t connected_components(const WeightVector& w, double tol)
{
  const std::size_t n = w.nodes();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = n;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (w[k] > tol) {
        const std::size_t a = find(i);
        const std::size_t b = find(j);
        if (a != b) {
          parent[a] = b;
          --components;
        }
      }
    }
  }
  return components;
}

} // namespace mcgl
