#pragma once

#include <cstdint>
#include <optional>

#include "symcd/cd.hpp"
#include "symcd/instances.hpp"
#include "symcd/types.hpp"

// Spectral analysis of the per-epoch update maps: explicit (expected) update
// matrices, symmetric transforms that expose the sGS/GBS spectra, exact
// 1 - rho reports, and the convergence-rate bound evaluators.

namespace symcd::spectral {

using cd::OrderRule;
using instances::QuadraticProblem;

enum class RadiusMethod {
  ExactSymmetric,          // symmetric transform or closed symmetric form
  BruteForceNonsymmetric,  // dense eigensolve / power iteration on the raw map
  ClosedFormExpected,      // permutation-invariant closed form (expected map)
  EnumeratedExpected,      // average over all n! orders
  MonteCarloExpected,      // seeded sample average
};

const char* method_name(RadiusMethod m);

struct SpectralReport {
  OrderRule rule = OrderRule::Cyclic;
  double one_minus_rho = 0.0;
  RadiusMethod method = RadiusMethod::ExactSymmetric;
  std::optional<double> bound_upper;  // per-epoch contraction factor
  std::optional<double> bound_lower;  // per-epoch floor ratio
  bool valid_lower_1 = true;  // first applicability condition of the floor
  bool valid_lower_2 = true;  // second applicability condition
  std::size_t samples = 0;    // Monte Carlo only
};

// Explicit dense update matrix of one epoch:
//   Cyclic:     I - Gamma^{-1} Q
//   SGS:        (I - Gamma^{-T} Q)(I - Gamma^{-1} Q)
//   GBS:        I - B Gamma^{-1} Q
//   Gradient:   I - Q / lambda_max
//   Randomized: (I - (1/n) D^{-1} Q)^n   (expected epoch map, iid draws)
//   RandomPermuted: expected map via enumeration (n <= 8)
DenseMatrix update_matrix(OrderRule rule, const QuadraticProblem& p);

// Z = I - A Gamma^{-1} A^T; eig(M_SGS) = eig(Z^T Z) and rho(M_SGS) = ||Z||^2.
DenseMatrix sgs_projector(const QuadraticProblem& p);
// Z^T Z, symmetric.
DenseMatrix symmetrized_sgs(const QuadraticProblem& p);
// I - Gamma^{-1} Q Gamma^{-T}, symmetric, same spectrum as the GBS map.
DenseMatrix symmetrized_gbs(const QuadraticProblem& p);

enum class RpcdMode { Enumerate, ClosedForm, MonteCarlo };

// Expected random-permutation epoch map. Enumerate averages all n! orders
// (n <= 8). ClosedForm exploits permutation invariance of the equal-diagonal
// family: the conjugation average of Gamma^{-1} has one diagonal and one
// off-diagonal value. MonteCarlo is a seeded sample average.
DenseMatrix expected_rpcd_matrix(const QuadraticProblem& p, RpcdMode mode,
                                 std::size_t samples = 0, std::uint64_t seed = 0);

// 1 - rho of the expected RP-CD map for the equal-diagonal family, without
// forming the matrix (the closed-form map is a two-eigenvalue circulant).
double rpcd_one_minus_rho_closed_form(std::size_t n, double c);

// Diagonal statistics and spectrum inputs for the bound evaluators.
struct BoundInputs {
  std::size_t n = 0;
  double L = 0.0;      // max_i Q_ii
  double L_min = 0.0;  // min_i Q_ii
  double L_avg = 0.0;  // mean_i Q_ii
  double kappa = 1.0;  // lambda_max / lambda_min
  double c = 0.0;      // family parameter when applicable
  double delta = 0.5;
};

BoundInputs bound_inputs(const QuadraticProblem& p, double delta = 0.5);

// Per-epoch contraction factors (squared single-pass factors, floored at 0).
double upper_bound_sgs(const BoundInputs& in);
double upper_bound_gbs(const BoundInputs& in);

// Error floors after k epochs: (1-delta) * (1 - a/(n*kappa))^{2k+2} with
// a = 4*pi^2 (symmetric double sweep), a = 2*pi^2 (single cyclic sweep).
double lower_bound_sgs(std::size_t n, double kappa, double delta, std::size_t k);
double lower_bound_ccd(std::size_t n, double kappa, double delta, std::size_t k);

struct GbsLowerBound {
  double floor = 0.0;
  bool valid_n_condition_1 = false;  // 8cn >= pi^2 (1 + sqrt(1 + 16(1-c)/pi^2))
  bool valid_n_condition_2 = false;  // n at least the closed-form threshold (~20 at c = 0.9)
};
GbsLowerBound lower_bound_gbs(std::size_t n, double c, double kappa, double delta,
                              std::size_t k);
// The second applicability threshold on n, exposed for direct checks.
double gbs_lower_bound_n_threshold(double c);

// Measured ||Gamma^T Q^{-1} Gamma|| and its bound
// kappa * min{ sum_i L_i, (2 + (1/pi) log n)^2 L }.
struct NormWithBound {
  double value = 0.0;
  double bound = 0.0;
};
NormWithBound gamma_qinv_gamma_bound(const QuadraticProblem& p);

// Closed-form norms used by the lower-bound construction on Q(c, n), each
// checkable against direct spectral_norm computations:
//   ||Q|| = 1 - c + cn
//   ||Gamma^T J Gamma|| = n + cn(n-1) + c^2 n(n-1)(2n-1)/6
//   ||Gamma Gamma^T - Q|| = c^2 / (2 + 2 cos(2(n-1)pi / (2n-1)))
// asymptotic_min_norm reports the 4 c^2 n^2 / pi^2 comparator only.
struct GbsProofQuantities {
  double norm_q = 0.0;
  double norm_gtjg = 0.0;
  double norm_ggt_minus_q = 0.0;
  double asymptotic_min_norm = 0.0;
};
GbsProofQuantities gbs_proof_quantities(std::size_t n, double c);

// Runs the double-sweep epoch and the alternating-projection recursion
// r <- Phat^T Phat r (P_i = I - a_i a_i^T / ||a_i||^2, a_i = column i of A)
// side by side from r0 = A x0; returns max_k ||A x^k - r^k||.
double projection_form_check(const QuadraticProblem& p, const Vector& x0,
                             std::size_t epochs);

// Full 1 - rho report for one rule, with bounds attached where the theory
// provides them (SGS, GBS, Cyclic on the equal-diagonal family).
SpectralReport spectral_report(const QuadraticProblem& p, OrderRule rule,
                               double delta = 0.5);

}  // namespace symcd::spectral
