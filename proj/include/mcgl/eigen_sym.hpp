#pragma once

#include "mcgl/graph_core.hpp"

#include <stdexcept>
#include <string>

namespace mcgl {

class EigenDecompositionError : public std::runtime_error {
public:
  explicit EigenDecompositionError(const std::string& what) : std::runtime_error(what) {}
};

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};

/// Full symmetric eigendecomposition. Only the lower triangle is read.
/// Throws EigenDecompositionError on non-finite input or solver failure.
SymmetricEigen eigen_symmetric(const Matrix& A);

/// Eigenvalues only (ascending).
Vector eigenvalues_symmetric(const Matrix& A);

/// Q diag(f(values)) Q^T.
template <typename F>
Matrix spectral_map(const SymmetricEigen& eig, F&& f)
{
  Vector mapped = eig.values.unaryExpr(f);
  return eig.vectors * mapped.asDiagonal() * eig.vectors.transpose();
}

/// Returns (A + A^T) / 2.
inline Matrix symmetrized(const Matrix& A) { return 0.5 * (A + A.transpose()); }

} // namespace mcgl
