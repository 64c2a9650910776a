#include "doctest.h"

#include "mcgl/metrics.hpp"
#include "mcgl/rng.hpp"

using namespace mcgl;

namespace {

Matrix laplacian(std::size_t n, std::initializer_list<std::tuple<std::size_t, std::size_t, double>> edges)
{
  WeightVector w(n);
  for (const auto& [p, q, x] : edges) {
    w[edge_offset(p, q, n)] = x;
  }
  return apply_L(w);
}

} // namespace

TEST_CASE("relative_error examples")
{
  const Matrix truth = laplacian(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}});
  CHECK(relative_error(truth, truth) == 0.0);
  CHECK(relative_error(Matrix::Zero(4, 4), truth) == doctest::Approx(1.0));
  CHECK(relative_error(2.0 * truth, truth) == doctest::Approx(1.0));
  CHECK(relative_error(1.5 * truth, truth) == doctest::Approx(0.25));

  CHECK_THROWS_AS(relative_error(truth, Matrix::Zero(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(relative_error(Matrix::Zero(3, 3), truth), std::invalid_argument);
}

TEST_CASE("f_score examples")
{
  const Matrix abc = laplacian(4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
  const Matrix abd = laplacian(4, {{0, 1, 2.0}, {0, 2, 0.3}, {2, 3, 1.0}});

  SUBCASE("identical supports")
  {
    const EvalResult r = f_score(abc, abc);
    CHECK(r.f_score == 1.0);
    CHECK(r.tp == 3);
    CHECK(r.fp == 0);
    CHECK(r.fn == 0);
    CHECK(r.tn == 3);
    CHECK(r.relative_error == 0.0);
  }
  SUBCASE("two of three edges shared")
  {
    const EvalResult r = f_score(abd, abc);
    CHECK(r.f_score == doctest::Approx(4.0 / 6.0));
    CHECK(r.tp == 2);
    CHECK(r.fp == 1);
    CHECK(r.fn == 1);
    CHECK(r.nnz_estimate == 3);
    CHECK(r.nnz_truth == 3);
  }
  SUBCASE("empty estimate")
  {
    const EvalResult r = f_score(Matrix::Zero(4, 4), abc);
    CHECK(r.f_score == 0.0);
    CHECK(r.relative_error == doctest::Approx(1.0));
  }
  SUBCASE("two empty supports")
  {
    CHECK(f_score(Matrix::Zero(3, 3), Matrix::Zero(3, 3)).f_score == 1.0);
  }
  SUBCASE("support tolerance")
  {
    const Matrix tiny = laplacian(4, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {0, 3, 5e-9}});
    CHECK(f_score(tiny, abc).f_score == 1.0);
    CHECK(f_score(tiny, abc, 1e-9).fp == 1);
  }
  CHECK_THROWS_AS(f_score(abc, Matrix::Zero(3, 3)), std::invalid_argument);
  CHECK_THROWS_AS(f_score(abc, abc, -1.0), std::invalid_argument);
}

TEST_CASE("metric invariances on random graphs")
{
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + static_cast<std::size_t>(t % 8);
    WeightVector a(n), b(n);
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      a[k] = rng.bernoulli(0.4) ? rng.uniform(0.1, 3.0) : 0.0;
      b[k] = rng.bernoulli(0.4) ? rng.uniform(0.1, 3.0) : 0.0;
    }
    const Matrix A = apply_L(a), B = apply_L(b);
    const EvalResult ab = f_score(A, B);
    const EvalResult ba = f_score(B, A);
    CHECK(ab.f_score == ba.f_score);
    CHECK(ab.tp == ba.tp);
    CHECK(ab.fp == ba.fn);
    CHECK(f_score(3.7 * A, B).f_score == ab.f_score);
    CHECK(ab.f_score >= 0.0);
    CHECK(ab.f_score <= 1.0);
    CHECK(ab.tp + ab.fp + ab.fn + ab.tn == num_edges(n));
    if (B.squaredNorm() > 0.0) {
      const double c = rng.uniform(0.1, 10.0);
      CHECK(relative_error(c * A, c * B) == doctest::Approx(relative_error(A, B)));
    }
  }
}
