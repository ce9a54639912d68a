#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "symcd/cd.hpp"
#include "symcd/matcore.hpp"
#include "symcd/rng.hpp"

using namespace symcd;
using instances::QuadraticProblem;
using namespace symcd::cd;

namespace {

// Dense copy of Q(c, n) routed through make_custom so the generic sweep code
// runs instead of the running-sum fast path.
QuadraticProblem dense_worst_case(std::size_t n, double c) {
  DenseMatrix q(n, n, c);
  for (std::size_t i = 0; i < n; ++i) q(i, i) = 1.0;
  return instances::make_custom(std::move(q), Vector(n, 0.0));
}

// Extracts the linear map x -> epoch(x) column by column (valid when b = 0).
template <typename Epoch>
DenseMatrix epoch_matrix(std::size_t n, Epoch epoch) {
  DenseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    const Vector y = epoch(e);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = y[i];
  }
  return m;
}

}  // namespace

TEST_CASE("coordinate step is the exact single-coordinate minimizer") {
  const auto p = dense_worst_case(2, 0.5);
  const Vector y = coordinate_step(p, {1.0, 1.0}, 0);
  CHECK(y[0] == doctest::Approx(-0.5));
  CHECK(y[1] == 1.0);
  CHECK_THROWS_AS(coordinate_step(p, {1.0}, 0), DimensionError);
  CHECK_THROWS_AS(coordinate_step(p, {1.0, 1.0}, 5), ParameterError);
}

TEST_CASE("cyclic epoch realizes I - Gamma^{-1} Q on the 2x2 example") {
  const auto p = instances::make_worst_case(2, 0.5);
  const DenseMatrix m = epoch_matrix(2, [&](const Vector& x) { return ccd_epoch(p, x); });
  CHECK(m(0, 0) == doctest::Approx(0.0));
  CHECK(m(0, 1) == doctest::Approx(-0.5));
  CHECK(m(1, 0) == doctest::Approx(0.0));
  CHECK(m(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("symmetrized epoch realizes the forward-backward product on the 2x2 example") {
  const auto p = instances::make_worst_case(2, 0.5);
  const DenseMatrix m = epoch_matrix(2, [&](const Vector& x) { return sgs_epoch(p, x); });
  CHECK(m(0, 0) == doctest::Approx(0.0));
  CHECK(m(0, 1) == doctest::Approx(-0.125));
  CHECK(m(1, 0) == doctest::Approx(0.0));
  CHECK(m(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("structured worst-case sweeps match the dense generic path") {
  const std::size_t n = 13;
  const double c = 0.8;
  const auto fast = instances::make_worst_case(n, c);
  const auto slow = dense_worst_case(n, c);
  rng::Counter gen(11);
  Vector x(n);
  for (double& v : x) v = gen.normal();

  const auto check = [&](const Vector& a, const Vector& b) {
    for (std::size_t i = 0; i < n; ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  };
  check(ccd_epoch(fast, x), ccd_epoch(slow, x));
  check(sgs_epoch(fast, x), sgs_epoch(slow, x));
  check(gbs_epoch(fast, x), gbs_epoch(slow, x));
  check(gd_epoch(fast, x, 0.05), gd_epoch(slow, x, 0.05));
  {
    rng::Counter g1(3), g2(3);
    check(rcd_epoch(fast, x, g1), rcd_epoch(slow, x, g2));
  }
  {
    rng::Counter g1(4), g2(4);
    check(rpcd_epoch(fast, x, g1), rpcd_epoch(slow, x, g2));
  }
  CHECK(objective_error(fast, x) == doctest::Approx(objective_error(slow, x)).epsilon(1e-12));
}

TEST_CASE("correction operator: matrix form vs back substitution, identity at n = 2") {
  const auto p2 = instances::make_worst_case(2, 0.5);
  const DenseMatrix b2 = gbs_correction_matrix(p2);
  CHECK(frobenius_norm(subtract(b2, DenseMatrix::identity(2))) <= 1e-14);

  for (double c : {0.3, 0.9}) {
    const std::size_t n = 7;
    const auto fast = instances::make_worst_case(n, c);
    const auto slow = dense_worst_case(n, c);
    const DenseMatrix b = gbs_correction_matrix(slow);
    rng::Counter gen(21);
    Vector d(n);
    for (double& v : d) v = gen.normal();
    const Vector via_matrix = matvec(b, d);
    const Vector via_fast = apply_gbs_correction(fast, d);
    const Vector via_slow = apply_gbs_correction(slow, d);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(via_fast[i] == doctest::Approx(via_matrix[i]).epsilon(1e-11));
      CHECK(via_slow[i] == doctest::Approx(via_matrix[i]).epsilon(1e-11));
    }
  }
}

TEST_CASE("exact coordinate minimization never increases the objective") {
  const auto p = instances::make_tridiagonal(9, 2);
  rng::Counter gen(5);
  Vector x(9);
  for (double& v : x) v = gen.normal();
  double f = objective_error(p, x);
  for (int k = 0; k < 20; ++k) {
    x = (k % 2 == 0) ? ccd_epoch(p, x) : sgs_epoch(p, x);
    const double f2 = objective_error(p, x);
    CHECK(f2 <= f + 1e-12);
    f = f2;
  }
}

TEST_CASE("identity objective converges in one epoch for every rule") {
  auto p = instances::make_custom(DenseMatrix::identity(5), Vector(5, 0.0));
  RunOptions opts;
  opts.stop.epsilon = 1e-8;
  opts.seed = 3;
  for (OrderRule r : {OrderRule::Cyclic, OrderRule::SGS, OrderRule::GBS, OrderRule::Randomized,
                      OrderRule::RandomPermuted, OrderRule::Gradient}) {
    const RunRecord rec = run_to_tolerance(p, r, opts);
    CHECK(rec.converged);
    if (r != OrderRule::Randomized)  // a random epoch may skip a coordinate
      CHECK(rec.epochs == 1);
  }
}

TEST_CASE("runs are reproducible and seed-dependent for randomized rules") {
  const auto p = instances::make_worst_case(12, 0.6);
  RunOptions opts;
  opts.stop.epsilon = 1e-10;
  opts.seed = 8;
  const RunRecord a = run_to_tolerance(p, OrderRule::RandomPermuted, opts);
  const RunRecord b = run_to_tolerance(p, OrderRule::RandomPermuted, opts);
  CHECK(a.epochs == b.epochs);
  REQUIRE(a.error_trace.size() == b.error_trace.size());
  for (std::size_t i = 0; i < a.error_trace.size(); ++i)
    CHECK(a.error_trace[i] == b.error_trace[i]);
  CHECK(a.converged);
}

TEST_CASE("gradient step sizes come from the spectrum") {
  const auto p = instances::make_worst_case(10, 0.5);
  const auto s = instances::worst_case_spectrum(10, 0.5);
  CHECK(gd_step(p, GdStepMode::InvLambdaMax) == doctest::Approx(1.0 / s.lambda_max));
  CHECK(gd_step(p, GdStepMode::TwoOverSum) ==
        doctest::Approx(2.0 / (s.lambda_max + s.lambda_min)));
}

TEST_CASE("trace is monotone enough to stop exactly at the tolerance") {
  const auto p = instances::make_worst_case(20, 0.8);
  RunOptions opts;
  opts.stop.epsilon = 1e-6;
  opts.seed = 1;
  const RunRecord rec = run_to_tolerance(p, OrderRule::SGS, opts);
  CHECK(rec.converged);
  CHECK(rec.error_trace.front() == 1.0);
  CHECK(rec.error_trace.back() <= 1e-6);
  CHECK(rec.error_trace[rec.error_trace.size() - 2] > 1e-6);
  CHECK(rec.epochs + 1 == rec.error_trace.size());
  CHECK(rec.passes == 2);
}

TEST_CASE("epoch cap is honored when the tolerance is unreachable") {
  const auto p = instances::make_worst_case(50, 0.99);
  RunOptions opts;
  opts.stop.epsilon = 1e-300;
  opts.stop.max_epochs = 25;
  const RunRecord rec = run_to_tolerance(p, OrderRule::Cyclic, opts);
  CHECK_FALSE(rec.converged);
  CHECK_FALSE(rec.diverged);
  CHECK(rec.epochs == 25);
}
