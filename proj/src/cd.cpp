#include "symcd/cd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "symcd/kernels.hpp"
#include "symcd/matcore.hpp"

namespace symcd::cd {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;    // init-vector stream
constexpr std::uint64_t kOrderTag = 0x6f726465;   // coordinate-order stream

bool structured(const QuadraticProblem& p) {
  // Worst-case instances have unit diagonal, constant off-diagonal c and
  // b = 0, so every coordinate update reduces to the running sum of x.
  return p.is_worst_case();
}

double sum_of(const Vector& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

// Forward exact coordinate sweep, in place. Returns nothing; x is the result.
void forward_sweep_dense(const QuadraticProblem& p, Vector& x) {
  const std::size_t n = p.n();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = kernels::dot(p.Q.row(i), x.data(), n) - p.b[i];
    x[i] -= g / p.Q(i, i);
  }
}

void backward_sweep_dense(const QuadraticProblem& p, Vector& x, bool skip_last) {
  const std::size_t n = p.n();
  std::size_t i = n - (skip_last ? 1 : 0);
  while (i > 0) {
    --i;
    const double g = kernels::dot(p.Q.row(i), x.data(), n) - p.b[i];
    x[i] -= g / p.Q(i, i);
  }
}

void forward_sweep_worst(double c, Vector& x) {
  double s = sum_of(x);
  for (double& xi : x) {
    const double v = -c * (s - xi);
    s += v - xi;
    xi = v;
  }
}

void backward_sweep_worst(double c, Vector& x, bool skip_last) {
  double s = sum_of(x);
  std::size_t i = x.size() - (skip_last ? 1 : 0);
  while (i > 0) {
    --i;
    const double v = -c * (s - x[i]);
    s += v - x[i];
    x[i] = v;
  }
}

}  // namespace

const char* rule_name(OrderRule r) {
  switch (r) {
    case OrderRule::Cyclic: return "ccd";
    case OrderRule::SGS: return "sgs";
    case OrderRule::GBS: return "gbs";
    case OrderRule::Randomized: return "rcd";
    case OrderRule::RandomPermuted: return "rpcd";
    case OrderRule::Gradient: return "gd";
  }
  throw ParameterError("unknown order rule");
}

int passes_per_epoch(OrderRule r) {
  return (r == OrderRule::SGS || r == OrderRule::GBS) ? 2 : 1;
}

Vector coordinate_step(const QuadraticProblem& p, const Vector& x, std::size_t i) {
  if (x.size() != p.n()) throw DimensionError("coordinate_step: size mismatch");
  if (i >= p.n()) throw ParameterError("coordinate_step: index out of range");
  Vector y = x;
  const double g = kernels::dot(p.Q.row(i), y.data(), p.n()) - p.b[i];
  y[i] -= g / p.Q(i, i);
  return y;
}

Vector ccd_epoch(const QuadraticProblem& p, const Vector& x) {
  Vector y = x;
  if (structured(p))
    forward_sweep_worst(p.c, y);
  else
    forward_sweep_dense(p, y);
  return y;
}

Vector sgs_epoch(const QuadraticProblem& p, const Vector& x) {
  // Forward sweep then backward sweep. The backward sweep starts at the
  // next-to-last coordinate: the last one is already optimal after the
  // forward sweep, so revisiting it would be an exact no-op.
  Vector y = x;
  if (structured(p)) {
    forward_sweep_worst(p.c, y);
    backward_sweep_worst(p.c, y, /*skip_last=*/true);
  } else {
    forward_sweep_dense(p, y);
    backward_sweep_dense(p, y, /*skip_last=*/true);
  }
  return y;
}

DenseMatrix gbs_correction_matrix(const QuadraticProblem& p) {
  // B = blockdiag(1, Gamma^{-T}_{2:n}) blockdiag(1, D_{2:n}), assembled by
  // solving Gamma^T_{2:n} y = D_{2:n} e_j column by column.
  const std::size_t n = p.n();
  const DenseMatrix gamma = matcore::lower_triangular(p.Q);
  DenseMatrix sub(n - 1, n - 1);
  for (std::size_t i = 0; i < n - 1; ++i)
    for (std::size_t j = 0; j < n - 1; ++j) sub(i, j) = gamma(j + 1, i + 1);  // Gamma^T block
  DenseMatrix b = DenseMatrix::identity(n);
  for (std::size_t j = 1; j < n; ++j) {
    Vector e(n - 1, 0.0);
    e[j - 1] = p.Q(j, j);
    const Vector y = matcore::solve_upper(sub, e);
    for (std::size_t i = 1; i < n; ++i) b(i, j) = y[i - 1];
  }
  b(0, 0) = 1.0;
  return b;
}

Vector apply_gbs_correction(const QuadraticProblem& p, const Vector& d) {
  if (d.size() != p.n()) throw DimensionError("apply_gbs_correction: size mismatch");
  const std::size_t n = p.n();
  Vector y(n);
  y[0] = d[0];
  if (structured(p)) {
    // Gamma^T_{2:n} has unit diagonal and constant c above it.
    double t = 0.0;
    for (std::size_t i = n; i > 1; --i) {
      y[i - 1] = d[i - 1] - p.c * t;
      t += y[i - 1];
    }
  } else {
    for (std::size_t i = n; i > 1; --i) {
      double s = p.Q(i - 1, i - 1) * d[i - 1];
      for (std::size_t j = i; j < n; ++j) s -= p.Q(j, i - 1) * y[j];
      y[i - 1] = s / p.Q(i - 1, i - 1);
    }
  }
  return y;
}

Vector gbs_epoch(const QuadraticProblem& p, const Vector& x) {
  // Prediction via a forward sweep, then x+ = x - B (x - x_tilde).
  const Vector tilde = ccd_epoch(p, x);
  Vector d(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) d[i] = x[i] - tilde[i];
  const Vector corr = apply_gbs_correction(p, d);
  Vector y(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) y[i] = x[i] - corr[i];
  return y;
}

Vector rcd_epoch(const QuadraticProblem& p, const Vector& x, rng::Counter& gen) {
  const std::size_t n = p.n();
  Vector y = x;
  if (structured(p)) {
    double s = sum_of(y);
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = std::size_t(gen.next_u64() % n);
      const double v = -p.c * (s - y[i]);
      s += v - y[i];
      y[i] = v;
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = std::size_t(gen.next_u64() % n);
      const double g = kernels::dot(p.Q.row(i), y.data(), n) - p.b[i];
      y[i] -= g / p.Q(i, i);
    }
  }
  return y;
}

Vector rpcd_epoch(const QuadraticProblem& p, const Vector& x, rng::Counter& gen) {
  const std::size_t n = p.n();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = n - 1; k > 0; --k) {
    const std::size_t j = std::size_t(gen.next_u64() % (k + 1));
    std::swap(perm[k], perm[j]);
  }
  Vector y = x;
  if (structured(p)) {
    double s = sum_of(y);
    for (std::size_t i : perm) {
      const double v = -p.c * (s - y[i]);
      s += v - y[i];
      y[i] = v;
    }
  } else {
    for (std::size_t i : perm) {
      const double g = kernels::dot(p.Q.row(i), y.data(), n) - p.b[i];
      y[i] -= g / p.Q(i, i);
    }
  }
  return y;
}

Vector gd_epoch(const QuadraticProblem& p, const Vector& x, double step) {
  const std::size_t n = p.n();
  Vector y = x;
  if (structured(p)) {
    const double s = sum_of(x);
    for (std::size_t i = 0; i < n; ++i) y[i] -= step * ((1.0 - p.c) * x[i] + p.c * s);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      y[i] -= step * (kernels::dot(p.Q.row(i), x.data(), n) - p.b[i]);
  }
  return y;
}

double gd_step(const QuadraticProblem& p, GdStepMode mode) {
  const instances::SpectrumInfo s = instances::spectrum_of(p);
  if (mode == GdStepMode::TwoOverSum) return 2.0 / (s.lambda_max + s.lambda_min);
  return 1.0 / s.lambda_max;
}

double objective_error(const QuadraticProblem& p, const Vector& x) {
  const std::size_t n = p.n();
  if (structured(p)) {
    double nrm2 = 0.0, s = 0.0;
    for (double v : x) {
      nrm2 += v * v;
      s += v;
    }
    return 0.5 * ((1.0 - p.c) * nrm2 + p.c * s * s);
  }
  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - p.x_star[i];
  const Vector qd = matvec(p.Q, d);
  return 0.5 * kernels::dot(d.data(), qd.data(), n);
}

namespace {

double iterate_error(const QuadraticProblem& p, const Vector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    const double d = x[i] - p.x_star[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double measure(const QuadraticProblem& p, const Vector& x, ErrorMetric m) {
  return m == ErrorMetric::Objective ? objective_error(p, x) : iterate_error(p, x);
}

}  // namespace

RunRecord run_to_tolerance(const QuadraticProblem& p, OrderRule rule, const RunOptions& opts) {
  const std::size_t n = p.n();
  RunRecord rec;
  rec.rule = rule;
  rec.passes = passes_per_epoch(rule);
  rec.seed = opts.seed;
  rec.stop = opts.stop;

  Vector x;
  if (opts.init) {
    if (opts.init->size() != n) throw DimensionError("run_to_tolerance: init size mismatch");
    x = *opts.init;
  } else {
    rng::Counter init_gen(rng::derive_seed(opts.seed, kInitTag, n));
    x.resize(n);
    for (double& v : x) v = init_gen.uniform01();
  }

  rng::Counter order_gen(rng::derive_seed(opts.seed, kOrderTag, n));
  const double step =
      rule == OrderRule::Gradient ? gd_step(p, opts.gd_mode) : 0.0;

  const double e0 = measure(p, x, opts.metric);
  if (opts.record_trace) rec.error_trace.push_back(1.0);
  if (e0 <= 0.0) {
    rec.converged = true;
    return rec;
  }

  for (std::size_t k = 0; k < opts.stop.max_epochs; ++k) {
    switch (rule) {
      case OrderRule::Cyclic: x = ccd_epoch(p, x); break;
      case OrderRule::SGS: x = sgs_epoch(p, x); break;
      case OrderRule::GBS: x = gbs_epoch(p, x); break;
      case OrderRule::Randomized: x = rcd_epoch(p, x, order_gen); break;
      case OrderRule::RandomPermuted: x = rpcd_epoch(p, x, order_gen); break;
      case OrderRule::Gradient: x = gd_epoch(p, x, step); break;
    }
    ++rec.epochs;
    const double rel = measure(p, x, opts.metric) / e0;
    if (opts.record_trace) rec.error_trace.push_back(rel);
    if (!std::isfinite(rel) || rel > opts.divergence_threshold) {
      rec.diverged = true;
      return rec;
    }
    if (rel <= opts.stop.epsilon) {
      rec.converged = true;
      return rec;
    }
  }
  return rec;
}

void write_trace_csv(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("write_trace_csv: cannot open " + path);
  out << "epoch,relative_error,cumulative_passes\n";
  for (std::size_t k = 0; k < rec.error_trace.size(); ++k)
    out << k << ',' << rec.error_trace[k] << ',' << k * std::size_t(rec.passes) << '\n';
}

}  // namespace symcd::cd
