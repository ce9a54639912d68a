#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symcd/instances.hpp"
#include "symcd/matcore.hpp"

using namespace symcd;
using instances::QuadraticProblem;

TEST_CASE("worst-case family: entries, factor, and parameter validation") {
  const auto p = instances::make_worst_case(4, 0.7);
  CHECK(p.n() == 4);
  CHECK(p.is_worst_case());
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(p.Q(i, j) == doctest::Approx(i == j ? 1.0 : 0.7));
  CHECK(norm2(p.b) == 0.0);
  CHECK(norm2(p.x_star) == 0.0);

  const DenseMatrix ata = matmul(p.A.transposed(), p.A);
  CHECK(frobenius_norm(subtract(ata, p.Q)) <= tol::kReconstruction);

  CHECK_THROWS_AS(instances::make_worst_case(4, 0.0), ParameterError);
  CHECK_THROWS_AS(instances::make_worst_case(4, 1.0), ParameterError);
  CHECK_THROWS_AS(instances::make_worst_case(1, 0.5), ParameterError);
}

TEST_CASE("worst-case spectrum closed form matches the eigensolver") {
  const std::size_t n = 11;
  const double c = 0.62;
  const auto s = instances::worst_case_spectrum(n, c);
  CHECK(s.lambda_min == doctest::Approx(1.0 - c).epsilon(1e-14));
  CHECK(s.lambda_max == doctest::Approx(1.0 - c + c * n).epsilon(1e-14));
  CHECK(s.lambda_avg == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.kappa == doctest::Approx((1.0 - c + c * n) / (1.0 - c)).epsilon(1e-14));
  CHECK(s.kappa_cd == doctest::Approx(1.0 / (1.0 - c)).epsilon(1e-14));

  const auto p = instances::make_worst_case(n, c);
  const Vector w = matcore::sym_eigenvalues(p.Q);
  CHECK(w.front() == doctest::Approx(s.lambda_min).epsilon(1e-11));
  CHECK(w.back() == doctest::Approx(s.lambda_max).epsilon(1e-11));
}

TEST_CASE("closed-form inverse satisfies Q Qinv = I") {
  for (std::size_t n : {2u, 6u, 23u}) {
    const double c = 0.85;
    const auto p = instances::make_worst_case(n, c);
    const DenseMatrix inv = instances::sherman_morrison_inverse(n, c);
    const DenseMatrix prod = matmul(p.Q, inv);
    CHECK(frobenius_norm(subtract(prod, DenseMatrix::identity(n))) <= 1e-11 * n);
  }
}

TEST_CASE("circulant-Hankel generator: reproducible, symmetric PSD, factored") {
  const auto p1 = instances::make_circulant_hankel(8, 42);
  const auto p2 = instances::make_circulant_hankel(8, 42);
  const auto p3 = instances::make_circulant_hankel(8, 43);
  CHECK(frobenius_norm(subtract(p1.Q, p2.Q)) == 0.0);
  CHECK(frobenius_norm(subtract(p1.Q, p3.Q)) > 0.0);
  CHECK(is_symmetric(p1.Q));

  // Hankel structure of the factor: A(i,j) depends only on (i+j) mod n
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(p1.A(i, j) == p1.A((i + 1) % 8, (j + 7) % 8));

  const Vector w = matcore::sym_eigenvalues(p1.Q);
  CHECK(w.front() >= -1e-10);
  const DenseMatrix ata = matmul(p1.A.transposed(), p1.A);
  CHECK(frobenius_norm(subtract(ata, p1.Q)) <= 1e-10 * (1.0 + frobenius_norm(p1.Q)));
}

TEST_CASE("tridiagonal generator: structure and factorization") {
  const auto p = instances::make_tridiagonal(10, 5);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(p.A(i, i) == 1.0);
    for (std::size_t j = 0; j < 10; ++j)
      if (j > i + 1 || i > j + 1) CHECK(p.A(i, j) == 0.0);
  }
  CHECK(is_symmetric(p.A));
  const DenseMatrix ata = matmul(p.A.transposed(), p.A);
  CHECK(frobenius_norm(subtract(ata, p.Q)) <= 1e-10 * (1.0 + frobenius_norm(p.Q)));
  // A^T A of a tridiagonal matrix has bandwidth 2
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      if (j > i + 2 || i > j + 2) CHECK(p.Q(i, j) == 0.0);
}

TEST_CASE("custom problems solve for x* and validate symmetry") {
  DenseMatrix q(2, 2);
  q(0, 0) = q(1, 1) = 1.0;
  q(0, 1) = q(1, 0) = 0.5;
  const auto p = instances::make_custom(q, {1.5, 1.5});
  CHECK(p.x_star[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.x_star[1] == doctest::Approx(1.0).epsilon(1e-12));
  const DenseMatrix ata = matmul(p.A.transposed(), p.A);
  CHECK(frobenius_norm(subtract(ata, p.Q)) <= 1e-10);

  DenseMatrix bad(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(instances::make_custom(bad, {0.0, 0.0}), SymmetryViolationError);
}

TEST_CASE("spectrum_of uses the closed form on the worst-case family") {
  const auto p = instances::make_worst_case(30, 0.9);
  const auto s = instances::spectrum_of(p);
  const auto want = instances::worst_case_spectrum(30, 0.9);
  CHECK(s.lambda_min == doctest::Approx(want.lambda_min).epsilon(1e-14));
  CHECK(s.lambda_max == doctest::Approx(want.lambda_max).epsilon(1e-14));
  CHECK(s.kappa == doctest::Approx(want.kappa).epsilon(1e-14));

  const auto t = instances::make_tridiagonal(6, 1);
  const auto st = instances::spectrum_of(t);
  const Vector w = matcore::sym_eigenvalues(t.Q);
  CHECK(st.lambda_min == doctest::Approx(w.front()).epsilon(1e-10));
  CHECK(st.lambda_max == doctest::Approx(w.back()).epsilon(1e-10));
}
