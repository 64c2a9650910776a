#include "mcgl/eigen_sym.hpp"

#include <Eigen/Eigenvalues>

namespace mcgl {

namespace {

void require_finite_square(const Matrix& A)
{
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("symmetric eigendecomposition requires a square matrix");
  }
  if (!A.allFinite()) {
    throw EigenDecompositionError("matrix contains non-finite entries");
  }
}

} // namespace

SymmetricEigen eigen_symmetric(const Matrix& A)
{
  require_finite_square(A);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw EigenDecompositionError("symmetric eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector eigenvalues_symmetric(const Matrix& A)
{
  require_finite_square(A);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(A, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw EigenDecompositionError("symmetric eigensolver did not converge");
  }
  return solver.eigenvalues();
}

} // namespace mcgl
