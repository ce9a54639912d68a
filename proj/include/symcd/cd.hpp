#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "symcd/instances.hpp"
#include "symcd/rng.hpp"
#include "symcd/types.hpp"

// Coordinate-descent-family solvers with epoch accounting and error traces.
// Epochs are implemented as coordinate sweeps over vectors, never as products
// with precomputed update matrices. For the worst-case family Q(c, n) the
// sweeps use O(1)-per-coordinate running sums; the generic path uses dense
// row dot products. Both paths perform the same exact coordinate
// minimizations.

namespace symcd::cd {

using instances::QuadraticProblem;

enum class OrderRule { Cyclic, SGS, GBS, Randomized, RandomPermuted, Gradient };

const char* rule_name(OrderRule r);
int passes_per_epoch(OrderRule r);  // 2 for SGS/GBS, 1 otherwise

enum class ErrorMetric { Objective, Iterate };

enum class GdStepMode { InvLambdaMax, TwoOverSum };

struct StoppingRule {
  double epsilon = 1e-8;
  std::size_t max_epochs = 10000000;
};

struct RunRecord {
  OrderRule rule = OrderRule::Cyclic;
  std::size_t epochs = 0;
  int passes = 1;  // passes per epoch
  Vector error_trace;  // error_trace[k] = relative error after k epochs (entry 0 is 1)
  std::uint64_t seed = 0;
  StoppingRule stop;
  bool converged = false;
  bool diverged = false;
};

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact minimization of coordinate i given the others:
// x_i <- x_i - (Qx - b)_i / Q_ii.
Vector coordinate_step(const QuadraticProblem& p, const Vector& x, std::size_t i);

// One epoch of each rule. All are pure: they return the next iterate.
Vector ccd_epoch(const QuadraticProblem& p, const Vector& x);
Vector sgs_epoch(const QuadraticProblem& p, const Vector& x);
Vector gbs_epoch(const QuadraticProblem& p, const Vector& x);
Vector rcd_epoch(const QuadraticProblem& p, const Vector& x, rng::Counter& gen);
Vector rpcd_epoch(const QuadraticProblem& p, const Vector& x, rng::Counter& gen);
Vector gd_epoch(const QuadraticProblem& p, const Vector& x, double step);

// Correction matrix B = blockdiag(1, Gamma^{-T}_{2:n}) blockdiag(1, D_{2:n}).
DenseMatrix gbs_correction_matrix(const QuadraticProblem& p);
// y = B d via back substitution, without forming B.
Vector apply_gbs_correction(const QuadraticProblem& p, const Vector& d);

// Relative error of x against the problem optimum, per the chosen metric.
// Objective form: (f(x) - f*) / (f(x0) - f*) with f(x) - f* = (x-x*)^T Q (x-x*) / 2.
double objective_error(const QuadraticProblem& p, const Vector& x);

// GD step size for the chosen mode (1/lambda_max or 2/(lambda_max+lambda_min)).
double gd_step(const QuadraticProblem& p, GdStepMode mode);

struct RunOptions {
  StoppingRule stop;
  std::uint64_t seed = 1;
  std::optional<Vector> init;  // default: uniform(0, 1) entries from the seed
  ErrorMetric metric = ErrorMetric::Objective;
  GdStepMode gd_mode = GdStepMode::InvLambdaMax;
  bool record_trace = true;
  double divergence_threshold = 1e12;
};

// Repeats the rule's epoch until the relative error drops to stop.epsilon
// or the epoch cap; divergence is recorded in the RunRecord, not thrown.
RunRecord run_to_tolerance(const QuadraticProblem& p, OrderRule rule, const RunOptions& opts);

// Trace export: epoch, relative_error, cumulative_passes.
void write_trace_csv(const RunRecord& rec, const std::string& path);

}  // namespace symcd::cd
