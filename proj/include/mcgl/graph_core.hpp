#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>

namespace mcgl {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Number of candidate edges of an undirected graph on n nodes, n(n-1)/2.
constexpr std::size_t num_edges(std::size_t n) { return n * (n - 1) / 2; }

/// Inverse of num_edges. Throws std::invalid_argument if `len` is not
/// triangular or corresponds to fewer than two nodes.
std::size_t nodes_from_edges(std::size_t len);

/// 1-based flat index of the node pair (p, q), p < q:
/// (2n - p - 1) p / 2 + q - n, which lies in [1, n(n-1)/2].
std::size_t edge_index(std::size_t p, std::size_t q, std::size_t n);

/// 0-based counterpart used for storage: pair (i, j), 0 <= i < j < n.
inline std::size_t edge_offset(std::size_t i, std::size_t j, std::size_t n)
{
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

/// Half-vectorized edge weights of an n-node graph, ordered
/// (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n).
class WeightVector {
public:
  explicit WeightVector(std::size_t n);
  WeightVector(std::size_t n, Vector values);

  static WeightVector constant(std::size_t n, double value);

  std::size_t nodes() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }

  const Vector& values() const { return values_; }
  Vector& values() { return values_; }

  double operator[](std::size_t k) const { return values_[static_cast<Eigen::Index>(k)]; }
  double& operator[](std::size_t k) { return values_[static_cast<Eigen::Index>(k)]; }

  /// Weight of the pair (i, j), 0-based, order-insensitive, i != j.
  double weight(std::size_t i, std::size_t j) const;

  /// True when every entry is >= 0 (membership in the nonnegative orthant).
  bool feasible() const;

  /// Number of entries with value strictly above `tol`.
  std::size_t support_size(double tol) const;

private:
  std::size_t n_;
  Vector values_;
};

/// Maps edge weights to the combinatorial graph Laplacian D - W.
/// The node count is inferred from the vector length.
Matrix apply_L(const Vector& w);
inline Matrix apply_L(const WeightVector& w) { return apply_L(w.values()); }

/// Adjoint of apply_L under the Frobenius / Euclidean inner products:
/// component (p,q) equals m_pp + m_qq - m_pq - m_qp. M must be square, n >= 2.
Vector apply_L_adjoint(const Matrix& M);

/// Operator norm of L, sqrt(2n); attained by the all-ones weight vector.
double operator_norm(std::size_t n);

/// Checks symmetry, zero row sums, nonpositive off-diagonals and
/// nonnegative diagonal, each within `tol`.
bool validate_cgl(const Matrix& M, double tol);

/// Recovers edge weights from a Laplacian: w(i,j) = -M(i,j) for i < j.
WeightVector weights_from_laplacian(const Matrix& M);

/// The all-1/n matrix J.
Matrix averaging_matrix(std::size_t n);

/// Number of connected components of the graph whose edges are the
/// entries of `w` strictly above `tol`.
std::size_t connected_components(const WeightVector& w, double tol = 0.0);

} // namespace mcgl
