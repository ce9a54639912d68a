#pragma once

#include <cstdint>

#include "symcd/cd.hpp"
#include "symcd/instances.hpp"
#include "symcd/rng.hpp"
#include "symcd/types.hpp"

// Multi-block ADMM variants for linearly constrained quadratic programs
//   min x^T Q_obj x   s.t.  A_con x = b_con,
// one scalar variable per block, plus the single-block augmented-Lagrangian
// baseline. Block subproblems are solved in closed form.

namespace symcd::admm {

struct DegenerateBlockError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstrainedQP {
  DenseMatrix Q_obj;   // symmetric PSD, objective f(x) = x^T Q_obj x
  DenseMatrix A_con;   // m x n constraint matrix (m may be 0)
  Vector b_con;        // length m
  double sigma = 1.0;  // penalty
  double beta = 1.0;   // dual / correction step in (0, 1]

  DenseMatrix Omega;   // A_con^T A_con, cached at construction
  bool structured = false;  // equal-diagonal family fast path
  double c = 0.0;           // family parameter when structured

  std::size_t n() const { return Q_obj.rows(); }
  std::size_t m() const { return A_con.rows(); }
};

struct AdmmState {
  Vector x;
  Vector lambda;
  std::size_t epoch = 0;
  bool degenerate_solve = false;  // joint solve fell back to least-norm
};

enum class AdmmRule { SGS, GBS, RP, ALM };
const char* admm_rule_name(AdmmRule r);

// General constructor; computes Omega and validates dimensions.
ConstrainedQP make_constrained(DenseMatrix q_obj, DenseMatrix a_con, Vector b_con,
                               double sigma = 1.0, double beta = 1.0);

// min x^T Q x s.t. Q x = 0 with Q = Q(c, n); optimum (x*, lambda*) = (0, 0).
ConstrainedQP make_admm_worst_case(std::size_t n, double c, double sigma = 1.0,
                                   double beta = 1.0);

// Same constraint-equals-objective construction for an arbitrary instance.
ConstrainedQP make_admm_from(const instances::QuadraticProblem& p, double sigma = 1.0,
                             double beta = 1.0);

// L(x, lambda) = f(x) - lambda^T (A x - b) + (sigma/2) ||A x - b||^2
double aug_lagrangian(const ConstrainedQP& p, const Vector& x, const Vector& lambda);

// Forward block sweep, backward sweep skipping the last block, dual step beta.
AdmmState sgs_admm_epoch(const ConstrainedQP& p, const AdmmState& s);

// Correction matrix F from Omega = A^T A (unconstrained problems fall back to
// the objective matrix, reproducing the back-substitution CD correction).
DenseMatrix gbs_correction_F(const ConstrainedQP& p);

// Prediction sweep, intermediate dual lambda~ = lambda - sigma (A x~ - b),
// corrections x+ = x - beta F (x - x~), lambda+ = lambda - beta (lambda~ - lambda).
AdmmState gbs_admm_epoch(const ConstrainedQP& p, const AdmmState& s);

// Forward sweep under a fresh uniform permutation, then dual step beta.
AdmmState rp_admm_epoch(const ConstrainedQP& p, const AdmmState& s, rng::Counter& gen);

// Exact joint primal minimization (2 Q_obj + sigma Omega) x = A^T lambda +
// sigma A^T b, then dual step sigma * beta.
AdmmState alm_epoch(const ConstrainedQP& p, const AdmmState& s);

struct AdmmRunOptions {
  cd::StoppingRule stop;
  std::uint64_t seed = 1;
  std::optional<Vector> init;  // primal start; default uniform(0,1); lambda starts at 0
  bool record_trace = true;
  bool record_residual = true;  // constraint residual per epoch, for CSV export
  double divergence_threshold = 1e12;
};

struct AdmmRunRecord {
  AdmmRule rule = AdmmRule::SGS;
  std::size_t epochs = 0;
  Vector error_trace;     // relative ||(x; lambda)|| against the origin optimum
  Vector residual_trace;  // ||A x - b|| per epoch
  std::uint64_t seed = 0;
  cd::StoppingRule stop;
  bool converged = false;
  bool diverged = false;
};

AdmmRunRecord run_admm_to_tolerance(const ConstrainedQP& p, AdmmRule rule,
                                    const AdmmRunOptions& opts);

void write_admm_trace_csv(const AdmmRunRecord& rec, const std::string& path);

}  // namespace symcd::admm
