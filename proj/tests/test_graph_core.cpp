#include "doctest.h"

#include "mcgl/graph_core.hpp"
#include "oracles.hpp"

#include <set>

using namespace mcgl;

namespace {

Vector random_vector(Rng& rng, Eigen::Index len, double lo = -1.0, double hi = 1.0)
{
  Vector v(len);
  for (auto& x : v) {
    x = rng.uniform(lo, hi);
  }
  return v;
}

} // namespace

TEST_CASE("edge_index follows the 1-based layout")
{
  CHECK(edge_index(1, 2, 4) == 1);
  CHECK(edge_index(3, 4, 4) == 6);
  CHECK(edge_index(1, 2, 2) == 1);
  CHECK(edge_index(1, 3, 4) == 2);
  CHECK(edge_index(2, 3, 4) == 4);

  CHECK_THROWS_AS(edge_index(2, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(edge_index(3, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(edge_index(0, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(edge_index(1, 5, 4), std::invalid_argument);
}

TEST_CASE("edge_index is a bijection onto 1..n(n-1)/2")
{
  for (std::size_t n = 2; n <= 30; ++n) {
    std::set<std::size_t> seen;
    for (std::size_t p = 1; p <= n; ++p) {
      for (std::size_t q = p + 1; q <= n; ++q) {
        const std::size_t k = edge_index(p, q, n);
        CHECK(k >= 1);
        CHECK(k <= num_edges(n));
        CHECK(k - 1 == edge_offset(p - 1, q - 1, n));
        seen.insert(k);
      }
    }
    CHECK(seen.size() == num_edges(n));
  }
}

TEST_CASE("nodes_from_edges inverts num_edges")
{
  for (std::size_t n = 2; n < 200; ++n) {
    CHECK(nodes_from_edges(num_edges(n)) == n);
  }
  CHECK_THROWS_AS(nodes_from_edges(0), std::invalid_argument);
  CHECK_THROWS_AS(nodes_from_edges(4), std::invalid_argument);
  CHECK_THROWS_AS(WeightVector(4, Vector::Zero(5)), std::invalid_argument);
}

TEST_CASE("apply_L examples")
{
  SUBCASE("zero weights give the zero matrix")
  {
    CHECK(apply_L(Vector::Zero(6)).isZero(0.0));
  }
  SUBCASE("complete graph with unit weights")
  {
    const Matrix L = apply_L(Vector::Ones(6));
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        CHECK(L(i, j) == (i == j ? 3.0 : -1.0));
      }
    }
  }
  SUBCASE("n = 4 layout")
  {
    Vector w(6);
    w << 1, 2, 3, 4, 5, 6;
    Matrix expected(4, 4);
    expected << 1 + 2 + 3, -1, -2, -3,
                -1, 1 + 4 + 5, -4, -5,
                -2, -4, 2 + 4 + 6, -6,
                -3, -5, -6, 3 + 5 + 6;
    CHECK(apply_L(w) == expected);
  }
}

TEST_CASE("apply_L_adjoint examples")
{
  CHECK(apply_L_adjoint(Matrix::Identity(4, 4)) == Vector::Constant(6, 2.0));
  CHECK(apply_L_adjoint(Matrix::Zero(5, 5)).isZero(0.0));
  CHECK_THROWS_AS(apply_L_adjoint(Matrix::Zero(3, 4)), std::invalid_argument);
  CHECK_THROWS_AS(apply_L_adjoint(Matrix::Zero(1, 1)), std::invalid_argument);

  Matrix M(3, 3);
  M << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  // pair (1,2): 1 + 5 - 2 - 4
  CHECK(apply_L_adjoint(M)[0] == doctest::Approx(0.0));
  // pair (1,3): 1 + 9 - 3 - 7
  CHECK(apply_L_adjoint(M)[1] == doctest::Approx(0.0));
}

TEST_CASE("adjoint identity holds for non-symmetric M")
{
  Rng rng(11);
  for (std::size_t n = 2; n <= 20; ++n) {
    const auto N = static_cast<Eigen::Index>(n);
    const Vector w = random_vector(rng, static_cast<Eigen::Index>(num_edges(n)));
    Matrix M(N, N);
    for (auto& x : M.reshaped()) {
      x = rng.normal();
    }
    const double lhs = (apply_L(w).array() * M.array()).sum();
    const double rhs = apply_L_adjoint(M).dot(w);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("matrix-free operators agree with the explicit matrix")
{
  Rng rng(5);
  for (std::size_t n : {2u, 3u, 6u}) {
    const Matrix D = oracle::dense_L(n);
    const Vector w = random_vector(rng, static_cast<Eigen::Index>(num_edges(n)));
    const Vector vecL = D * w;
    CHECK((apply_L(w).reshaped() - vecL).norm() < 1e-12);
    const auto N = static_cast<Eigen::Index>(n);
    Matrix M = Matrix::Random(N, N);
    CHECK((apply_L_adjoint(M) - D.transpose() * M.reshaped()).norm() < 1e-12);
  }
}

TEST_CASE("operator_norm is sqrt(2n)")
{
  CHECK(operator_norm(2) == doctest::Approx(2.0));
  CHECK(operator_norm(4) == doctest::Approx(2.828427).epsilon(1e-6));
  CHECK(operator_norm(100) == doctest::Approx(14.142136).epsilon(1e-7));
  CHECK_THROWS_AS(operator_norm(1), std::invalid_argument);

  // ||L(1)||_F / ||1|| attains the bound.
  for (std::size_t n = 2; n <= 12; ++n) {
    const Vector ones = Vector::Ones(static_cast<Eigen::Index>(num_edges(n)));
    CHECK(apply_L(ones).norm() / ones.norm() == doctest::Approx(operator_norm(n)).epsilon(1e-14));
  }

  // Power iteration on the explicit matrix.
  for (std::size_t n : {4u, 10u}) {
    const Matrix D = oracle::dense_L(n);
    const Matrix G = D.transpose() * D;
    const double est = oracle::power_iteration([&](const Vector& v) { return Vector(G * v); }, G.rows(), 500, 3);
    CHECK(est == doctest::Approx(operator_norm(n)).epsilon(1e-6));
  }
}

TEST_CASE("validate_cgl")
{
  Rng rng(2);
  const double tol = 1e-9;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 9);
    const Vector w = random_vector(rng, static_cast<Eigen::Index>(num_edges(n)), 0.0, 3.0);
    const Matrix L = apply_L(w);
    CHECK(validate_cgl(L, tol));

    Matrix bad = L;
    bad(0, 1) += 10 * tol;
    CHECK_FALSE(validate_cgl(bad, tol));
  }
  CHECK_FALSE(validate_cgl(Matrix::Identity(3, 3), tol));
  CHECK_FALSE(validate_cgl(Matrix::Zero(2, 3), tol));

  // Positive off-diagonal with zero row sums is not a CGL.
  Matrix pos(2, 2);
  pos << -1, 1, 1, -1;
  CHECK_FALSE(validate_cgl(pos, tol));
}

TEST_CASE("WeightVector helpers")
{
  Vector v(3);
  v << 1.0, 0.0, 2.0;
  const WeightVector w(3, v);
  CHECK(w.weight(0, 1) == 1.0);
  CHECK(w.weight(2, 0) == 0.0);
  CHECK(w.weight(1, 2) == 2.0);
  CHECK(w.support_size(0.0) == 2);
  CHECK(w.feasible());
  CHECK(connected_components(w) == 1);
  CHECK(weights_from_laplacian(apply_L(w)).values() == v);

  const WeightVector split(4, (Vector(6) << 1, 0, 0, 0, 0, 1).finished());
  CHECK(connected_components(split) == 2);
  CHECK_FALSE(WeightVector(2, Vector::Constant(1, -1.0)).feasible());
}
