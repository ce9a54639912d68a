#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "symcd/matcore.hpp"
#include "symcd/rng.hpp"
#include "symcd/spectral.hpp"

using namespace symcd;
using namespace symcd::spectral;
using cd::OrderRule;
using instances::QuadraticProblem;

namespace {

constexpr double kPi = std::numbers::pi;

QuadraticProblem random_spd_problem(std::size_t n, std::uint64_t seed, bool unit_diag = false) {
  rng::Counter gen(seed);
  DenseMatrix g(n, n);
  for (auto& v : g.data()) v = gen.normal();
  DenseMatrix q = matmul(g, g.transposed());
  for (std::size_t i = 0; i < n; ++i) q(i, i) += 0.5;
  if (unit_diag) {
    Vector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::sqrt(q(i, i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q(i, j) /= d[i] * d[j];
  }
  return instances::make_custom(std::move(q), Vector(n, 0.0));
}

std::vector<double> sorted_real_eigs(const DenseMatrix& m) {
  std::vector<double> re;
  for (const auto& z : matcore::eig_general(m)) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  return re;
}

double round2sig(double x) {
  if (x == 0.0) return 0.0;
  const double e = std::pow(10.0, std::floor(std::log10(std::abs(x))) - 1.0);
  return std::round(x / e) * e;
}

}  // namespace

TEST_CASE("update matrices on the 2x2 example") {
  const auto p = instances::make_worst_case(2, 0.5);
  const DenseMatrix mc = update_matrix(OrderRule::Cyclic, p);
  CHECK(mc(0, 0) == doctest::Approx(0.0));
  CHECK(mc(0, 1) == doctest::Approx(-0.5));
  CHECK(mc(1, 0) == doctest::Approx(0.0));
  CHECK(mc(1, 1) == doctest::Approx(0.25));

  const DenseMatrix ms = update_matrix(OrderRule::SGS, p);
  CHECK(ms(0, 0) == doctest::Approx(0.0));
  CHECK(ms(0, 1) == doctest::Approx(-0.125));
  CHECK(ms(1, 0) == doctest::Approx(0.0));
  CHECK(ms(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("expected random-order map: 1 - rho of the iid rule at (20, 0.99)") {
  const auto p = instances::make_worst_case(20, 0.99);
  const DenseMatrix m = update_matrix(OrderRule::Randomized, p);
  const double rho = matcore::spectral_norm(m);  // symmetric here (D = I)
  CHECK(round2sig(1.0 - rho) == doctest::Approx(1.0e-2));
  const auto rep = spectral_report(p, OrderRule::Randomized);
  CHECK(round2sig(rep.one_minus_rho) == doctest::Approx(1.0e-2));
}

TEST_CASE("symmetric transform of the double-sweep map") {
  const auto eye = instances::make_custom(DenseMatrix::identity(4), Vector(4, 0.0));
  CHECK(frobenius_norm(symmetrized_sgs(eye)) <= 1e-12);

  const auto p2 = instances::make_worst_case(2, 0.5);
  const Vector w = matcore::sym_eigenvalues(symmetrized_sgs(p2));
  CHECK(w[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-12));

  for (std::uint64_t seed : {10u, 11u, 12u}) {
    const auto p = random_spd_problem(8, seed);
    const Vector ws = matcore::sym_eigenvalues(symmetrized_sgs(p));
    const auto raw = sorted_real_eigs(update_matrix(OrderRule::SGS, p));
    for (std::size_t i = 0; i < 8; ++i) CHECK(ws[i] == doctest::Approx(raw[i]).epsilon(1e-10));
  }
}

TEST_CASE("symmetric transform of the back-substitution map") {
  const auto p2 = instances::make_worst_case(2, 0.5);
  const DenseMatrix s2 = symmetrized_gbs(p2);
  CHECK(s2(0, 0) == doctest::Approx(0.0));
  CHECK(s2(1, 1) == doctest::Approx(0.25));
  CHECK(std::abs(s2(0, 1)) <= 1e-14);
  CHECK(is_symmetric(s2, 1e-12));

  const auto eye = instances::make_custom(DenseMatrix::identity(3), Vector(3, 0.0));
  CHECK(frobenius_norm(symmetrized_gbs(eye)) <= 1e-12);

  for (std::uint64_t seed : {20u, 21u, 22u}) {
    const auto p = random_spd_problem(8, seed);
    const Vector ws = matcore::sym_eigenvalues(symmetrized_gbs(p));
    const auto raw = sorted_real_eigs(update_matrix(OrderRule::GBS, p));
    for (std::size_t i = 0; i < 8; ++i) CHECK(ws[i] == doctest::Approx(raw[i]).epsilon(1e-10));
  }
}

TEST_CASE("triangular-conjugation eigenvalue identity for unit-diagonal matrices") {
  // eig(B^{-1} Q^{-1} Gamma) = eig(Gamma^T Q^{-1} Gamma)
  for (std::uint64_t seed : {30u, 31u}) {
    const std::size_t n = 7;
    const auto p = random_spd_problem(n, seed, /*unit_diag=*/true);
    const DenseMatrix gamma = matcore::lower_triangular(p.Q);
    const DenseMatrix chol = matcore::cholesky(p.Q);
    const DenseMatrix cholT = chol.transposed();
    DenseMatrix qinv_gamma(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Vector col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = gamma(i, j);
      const Vector y = matcore::solve_upper(cholT, matcore::solve_lower(chol, col));
      for (std::size_t i = 0; i < n; ++i) qinv_gamma(i, j) = y[i];
    }
    const DenseMatrix b = cd::gbs_correction_matrix(p);
    DenseMatrix binv_qg(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Vector col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = qinv_gamma(i, j);
      const Vector y = matcore::solve_upper(b, col);
      for (std::size_t i = 0; i < n; ++i) binv_qg(i, j) = y[i];
    }
    const auto e1 = sorted_real_eigs(binv_qg);
    const auto e2 = sorted_real_eigs(matmul(gamma.transposed(), qinv_gamma));
    for (std::size_t i = 0; i < n; ++i) CHECK(e1[i] == doctest::Approx(e2[i]).epsilon(1e-9));
  }
}

TEST_CASE("expected random-permutation map: hand average at n = 2 and size guard") {
  const auto p = instances::make_worst_case(2, 0.5);
  const DenseMatrix m = expected_rpcd_matrix(p, RpcdMode::Enumerate);
  CHECK(m(0, 0) == doctest::Approx(0.125));
  CHECK(m(0, 1) == doctest::Approx(-0.25));
  CHECK(m(1, 0) == doctest::Approx(-0.25));
  CHECK(m(1, 1) == doctest::Approx(0.125));

  const auto p1 = instances::make_worst_case(2, 0.3);
  CHECK_THROWS_AS(
      expected_rpcd_matrix(instances::make_worst_case(9, 0.3), RpcdMode::Enumerate),
      ParameterError);
}

TEST_CASE("closed-form expected permutation map gated by enumeration") {
  for (double c : {0.1, 0.5, 0.9}) {
    for (std::size_t n : {2u, 4u, 6u}) {
      const auto p = instances::make_worst_case(n, c);
      const DenseMatrix a = expected_rpcd_matrix(p, RpcdMode::Enumerate);
      const DenseMatrix b = expected_rpcd_matrix(p, RpcdMode::ClosedForm);
      CHECK(frobenius_norm(subtract(a, b)) <= 1e-12 * n);
    }
  }
  const auto p20 = instances::make_worst_case(20, 0.99);
  CHECK(round2sig(rpcd_one_minus_rho_closed_form(20, 0.99)) == doctest::Approx(1.0e-2));
  // the closed-form radius matches the explicit closed-form matrix
  const DenseMatrix m = expected_rpcd_matrix(p20, RpcdMode::ClosedForm);
  double rho = 0.0;
  for (double w : matcore::sym_eigenvalues(m)) rho = std::max(rho, std::abs(w));
  CHECK(1.0 - rho == doctest::Approx(rpcd_one_minus_rho_closed_form(20, 0.99)).epsilon(1e-9));
}

TEST_CASE("monte carlo expected map approaches the enumeration") {
  const auto p = instances::make_worst_case(4, 0.5);
  const DenseMatrix exact = expected_rpcd_matrix(p, RpcdMode::Enumerate);
  const DenseMatrix mc = expected_rpcd_matrix(p, RpcdMode::MonteCarlo, 4000, 7);
  CHECK(frobenius_norm(subtract(exact, mc)) <= 0.05);
  const DenseMatrix mc2 = expected_rpcd_matrix(p, RpcdMode::MonteCarlo, 4000, 7);
  CHECK(frobenius_norm(subtract(mc, mc2)) == 0.0);  // seeded determinism
}

TEST_CASE("upper bound factors") {
  const auto p = instances::make_worst_case(100, 0.8);
  const BoundInputs in = bound_inputs(p);
  const double w = 2.0 + std::log(100.0) / kPi;
  const double b1 = 1.0 - 1.0 / (100.0 * in.kappa);
  const double b2 = 1.0 - 1.0 / (w * w * in.kappa);
  CHECK(upper_bound_sgs(in) == doctest::Approx(std::min(b1, b2) * std::min(b1, b2)));
  const double s = std::min(100.0, w * w);
  const double g = 1.0 - 1.0 / (in.kappa * s);
  CHECK(upper_bound_gbs(in) == doctest::Approx(g * g));

  // identity objective: factors collapse to zero
  BoundInputs id;
  id.n = 1;
  id.L = id.L_min = id.L_avg = 1.0;
  id.kappa = 1.0;
  CHECK(upper_bound_sgs(id) == 0.0);
  CHECK(upper_bound_gbs(id) == 0.0);
}

TEST_CASE("lower bound floors") {
  CHECK(lower_bound_sgs(100, 401.0, 0.5, 0) ==
        doctest::Approx(0.5 * std::pow(1.0 - 4.0 * kPi * kPi / 40100.0, 2)));
  CHECK(lower_bound_sgs(100, 401.0, 1.0, 3) == 0.0);
  CHECK(lower_bound_ccd(100, 401.0, 0.5, 0) ==
        doctest::Approx(0.5 * std::pow(1.0 - 2.0 * kPi * kPi / 40100.0, 2)));

  const double thr = gbs_lower_bound_n_threshold(0.9);
  CHECK(thr > 15.0);
  CHECK(thr < 25.0);
  const auto lb_small = lower_bound_gbs(15, 0.9, 100.0, 0.5, 0);
  const auto lb_big = lower_bound_gbs(25, 0.9, 100.0, 0.5, 0);
  CHECK_FALSE(lb_small.valid_n_condition_2);
  CHECK(lb_big.valid_n_condition_2);
  CHECK(lb_big.valid_n_condition_1);
  CHECK(lower_bound_gbs(100, 0.9, 400.0, 1.0, 2).floor == 0.0);
}

TEST_CASE("triangular-sandwich norm inequality") {
  const auto p2 = instances::make_worst_case(2, 0.5);
  const auto r2 = gamma_qinv_gamma_bound(p2);
  CHECK(r2.value == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
  CHECK(r2.bound == doctest::Approx(6.0).epsilon(1e-12));

  const auto eye = instances::make_custom(DenseMatrix::identity(5), Vector(5, 0.0));
  const auto re = gamma_qinv_gamma_bound(eye);
  const double w = 2.0 + std::log(5.0) / kPi;
  CHECK(re.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(re.bound == doctest::Approx(std::min(5.0, w * w)));

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto p = random_spd_problem(10, 500 + seed);
    const auto r = gamma_qinv_gamma_bound(p);
    CHECK(r.value <= r.bound * (1.0 + 1e-9));
  }
}

TEST_CASE("closed-form norms of the lower-bound construction") {
  const auto q2 = gbs_proof_quantities(2, 0.5);
  CHECK(q2.norm_q == doctest::Approx(1.5));
  CHECK(q2.norm_gtjg == doctest::Approx(3.25));
  CHECK(q2.norm_ggt_minus_q == doctest::Approx(0.25));

  for (std::size_t n : {10u, 60u, 200u}) {
    const double c = 0.9;
    const auto q = gbs_proof_quantities(n, c);
    const auto p = instances::make_worst_case(n, c);
    CHECK(matcore::spectral_norm(p.Q) == doctest::Approx(q.norm_q).epsilon(1e-8));

    const DenseMatrix gamma = matcore::lower_triangular(p.Q);
    const DenseMatrix j(n, n, 1.0);
    CHECK(matcore::spectral_norm(matmul(gamma.transposed(), matmul(j, gamma))) ==
          doctest::Approx(q.norm_gtjg).epsilon(1e-8));

    const DenseMatrix diff = subtract(matmul(gamma, gamma.transposed()), p.Q);
    CHECK(matcore::spectral_norm(diff) == doctest::Approx(q.norm_ggt_minus_q).epsilon(1e-8));
    CHECK(q.asymptotic_min_norm == doctest::Approx(4.0 * c * c * n * n / (kPi * kPi)));
  }
}

TEST_CASE("double-sweep iterates follow the alternating-projection recursion") {
  const auto eye = instances::make_custom(DenseMatrix::identity(4), Vector(4, 0.0));
  CHECK(projection_form_check(eye, {1.0, -2.0, 0.5, 3.0}, 3) <= 1e-14);

  const auto p2 = instances::make_worst_case(2, 0.5);
  CHECK(projection_form_check(p2, {1.0, 1.0}, 5) <= 1e-10);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto p = random_spd_problem(6, 900 + seed);
    rng::Counter gen(seed);
    Vector x0(6);
    for (double& v : x0) v = gen.normal();
    CHECK(projection_form_check(p, x0, 8) <= 1e-9 * (1.0 + norm2(matvec(p.A, x0))));
  }
}

TEST_CASE("1 - rho reports reproduce the published grid values at moderate sizes") {
  const auto p20 = instances::make_worst_case(20, 0.99);
  CHECK(round2sig(spectral_report(p20, OrderRule::GBS).one_minus_rho) ==
        doctest::Approx(2.5e-4));
  CHECK(round2sig(spectral_report(p20, OrderRule::SGS).one_minus_rho) ==
        doctest::Approx(2.5e-4));
  CHECK(round2sig(spectral_report(p20, OrderRule::Cyclic).one_minus_rho) ==
        doctest::Approx(4.9e-4));
  CHECK(round2sig(spectral_report(p20, OrderRule::Gradient).one_minus_rho) ==
        doctest::Approx(5.0e-4));

  const auto p100 = instances::make_worst_case(100, 0.8);
  const auto sgs = spectral_report(p100, OrderRule::SGS);
  const auto gbs = spectral_report(p100, OrderRule::GBS);
  CHECK(round2sig(sgs.one_minus_rho) == doctest::Approx(3.0e-4));
  CHECK(round2sig(gbs.one_minus_rho) == doctest::Approx(round2sig(sgs.one_minus_rho)));
  REQUIRE(sgs.bound_upper.has_value());
  REQUIRE(sgs.bound_lower.has_value());
  // per-epoch objective sandwich: the objective decays by rho^2 per epoch
  const double sgs_obj = (1.0 - sgs.one_minus_rho) * (1.0 - sgs.one_minus_rho);
  const double gbs_obj = (1.0 - gbs.one_minus_rho) * (1.0 - gbs.one_minus_rho);
  CHECK(*sgs.bound_lower <= sgs_obj);
  CHECK(sgs_obj <= *sgs.bound_upper);
  CHECK(*gbs.bound_lower <= gbs_obj);
  CHECK(gbs_obj <= *gbs.bound_upper);
}

TEST_CASE("report methods are labeled by route") {
  const auto p = instances::make_worst_case(20, 0.5);
  CHECK(spectral_report(p, OrderRule::RandomPermuted).method ==
        RadiusMethod::ClosedFormExpected);
  CHECK(spectral_report(p, OrderRule::SGS).method == RadiusMethod::ExactSymmetric);
  CHECK(spectral_report(p, OrderRule::Cyclic).method ==
        RadiusMethod::BruteForceNonsymmetric);
  const auto small = random_spd_problem(5, 1);
  CHECK(spectral_report(small, OrderRule::RandomPermuted).method ==
        RadiusMethod::EnumeratedExpected);
  CHECK(std::string(method_name(RadiusMethod::MonteCarloExpected)) ==
        "monte_carlo_expected");
}
