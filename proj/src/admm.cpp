#include "symcd/admm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "symcd/kernels.hpp"
#include "symcd/matcore.hpp"

namespace symcd::admm {

namespace {

constexpr std::uint64_t kInitTag = 0x696e6974;
constexpr std::uint64_t kOrderTag = 0x6f726465;

struct FamilyCoeffs {
  // Omega = Q(c,n)^2 = a I + b J; the whole primal system stays in the
  // {a I + b J} family, so sweeps run on running sums.
  double a, b;
};

FamilyCoeffs omega_coeffs(const ConstrainedQP& p) {
  const double c = p.c;
  const double n = double(p.n());
  return {(1.0 - c) * (1.0 - c), 2.0 * c * (1.0 - c) + c * c * n};
}

double sum_of(const Vector& v) {
  double s = 0.0;
  for (double t : v) s += t;
  return s;
}

// A^T lambda for the current dual iterate (dense route).
Vector at_lambda(const ConstrainedQP& p, const Vector& lambda) {
  return matvec_transposed(p.A_con, lambda);
}

// Gradient of the augmented Lagrangian in block i, dense route; atl and atb
// are the cached A^T lambda and A^T b.
double block_gradient(const ConstrainedQP& p, const Vector& x, const Vector& atl,
                      const Vector& atb, std::size_t i) {
  const std::size_t n = p.n();
  return 2.0 * kernels::dot(p.Q_obj.row(i), x.data(), n) - atl[i] +
         p.sigma * (kernels::dot(p.Omega.row(i), x.data(), n) - atb[i]);
}

double block_diag(const ConstrainedQP& p, std::size_t i) {
  const double h = 2.0 * p.Q_obj(i, i) + p.sigma * p.Omega(i, i);
  if (h <= 0.0) throw DegenerateBlockError("admm: non-minimizable scalar block");
  return h;
}

// One primal sweep over `order` (exact scalar block minimization), in place.
void sweep_dense(const ConstrainedQP& p, Vector& x, const Vector& atl, const Vector& atb,
                 const std::vector<std::size_t>& order) {
  for (std::size_t i : order) x[i] -= block_gradient(p, x, atl, atb, i) / block_diag(p, i);
}

struct StructuredSweep {
  double c, a, b, sigma, h;
  double s;         // running sum of x
  const Vector* ql;  // A^T lambda = Q lambda, fixed during the sweep

  double gradient(const Vector& x, std::size_t i) const {
    return 2.0 * ((1.0 - c) * x[i] + c * s) - (*ql)[i] +
           sigma * (a * x[i] + b * s);
  }
  void update(Vector& x, std::size_t i) {
    const double nv = x[i] - gradient(x, i) / h;
    s += nv - x[i];
    x[i] = nv;
  }
};

StructuredSweep make_structured_sweep(const ConstrainedQP& p, const Vector& x,
                                      const Vector& ql) {
  const auto [a, b] = omega_coeffs(p);
  const double h = 2.0 + p.sigma * (a + b);
  return {p.c, a, b, p.sigma, h, sum_of(x), &ql};
}

Vector structured_qlambda(const ConstrainedQP& p, const Vector& lambda) {
  const double sl = sum_of(lambda);
  Vector ql(p.n());
  for (std::size_t i = 0; i < p.n(); ++i) ql[i] = (1.0 - p.c) * lambda[i] + p.c * sl;
  return ql;
}

Vector constraint_residual(const ConstrainedQP& p, const Vector& x) {
  Vector r = matvec(p.A_con, x);
  for (std::size_t i = 0; i < p.m(); ++i) r[i] -= p.b_con[i];
  return r;
}

// y = F d for the correction built from the Gram matrix `g` (upper-triangular
// back substitution, no matrix formed).
Vector apply_correction(const DenseMatrix& g, const Vector& d) {
  const std::size_t n = g.rows();
  Vector y(n);
  y[0] = d[0];
  for (std::size_t i = n; i > 1; --i) {
    double s = g(i - 1, i - 1) * d[i - 1];
    for (std::size_t j = i; j < n; ++j) s -= g(j, i - 1) * y[j];
    if (g(i - 1, i - 1) == 0.0)
      throw DegenerateBlockError("admm: zero Gram diagonal in correction");
    y[i - 1] = s / g(i - 1, i - 1);
  }
  return y;
}

// Gram matrix the correction operator is built from: the constraint Gram, or
// the objective matrix for unconstrained problems (the scale of the Gram does
// not change the correction).
const DenseMatrix& correction_gram(const ConstrainedQP& p) {
  return p.m() > 0 ? p.Omega : p.Q_obj;
}

std::vector<std::size_t> iota_order(std::size_t n) {
  std::vector<std::size_t> o(n);
  for (std::size_t i = 0; i < n; ++i) o[i] = i;
  return o;
}

}  // namespace

const char* admm_rule_name(AdmmRule r) {
  switch (r) {
    case AdmmRule::SGS: return "sgs-admm";
    case AdmmRule::GBS: return "gbs-admm";
    case AdmmRule::RP: return "rp-admm";
    case AdmmRule::ALM: return "alm";
  }
  throw ParameterError("unknown admm rule");
}

ConstrainedQP make_constrained(DenseMatrix q_obj, DenseMatrix a_con, Vector b_con,
                               double sigma, double beta) {
  if (!q_obj.square()) throw DimensionError("make_constrained: objective must be square");
  if (!is_symmetric(q_obj)) throw SymmetryViolationError("make_constrained: asymmetric objective");
  if (a_con.rows() != b_con.size()) throw DimensionError("make_constrained: b size mismatch");
  if (a_con.rows() > 0 && a_con.cols() != q_obj.rows())
    throw DimensionError("make_constrained: constraint width mismatch");
  if (sigma <= 0.0) throw ParameterError("make_constrained: sigma must be positive");
  if (beta <= 0.0 || beta > 1.0) throw ParameterError("make_constrained: beta must be in (0,1]");
  ConstrainedQP p;
  p.Omega = a_con.rows() > 0 ? matmul(a_con.transposed(), a_con)
                             : DenseMatrix(q_obj.rows(), q_obj.rows());
  p.Q_obj = std::move(q_obj);
  p.A_con = std::move(a_con);
  p.b_con = std::move(b_con);
  p.sigma = sigma;
  p.beta = beta;
  return p;
}

ConstrainedQP make_admm_worst_case(std::size_t n, double c, double sigma, double beta) {
  const auto base = instances::make_worst_case(n, c);
  ConstrainedQP p = make_constrained(base.Q, base.Q, Vector(n, 0.0), sigma, beta);
  p.structured = true;
  p.c = c;
  return p;
}

ConstrainedQP make_admm_from(const instances::QuadraticProblem& p, double sigma,
                             double beta) {
  return make_constrained(p.Q, p.Q, Vector(p.n(), 0.0), sigma, beta);
}

double aug_lagrangian(const ConstrainedQP& p, const Vector& x, const Vector& lambda) {
  if (x.size() != p.n() || lambda.size() != p.m())
    throw DimensionError("aug_lagrangian: size mismatch");
  const Vector qx = matvec(p.Q_obj, x);
  double l = kernels::dot(x.data(), qx.data(), p.n());
  const Vector r = constraint_residual(p, x);
  l -= kernels::dot(lambda.data(), r.data(), p.m());
  l += 0.5 * p.sigma * kernels::dot(r.data(), r.data(), p.m());
  return l;
}

AdmmState sgs_admm_epoch(const ConstrainedQP& p, const AdmmState& s) {
  const std::size_t n = p.n();
  AdmmState out = s;
  if (p.structured) {
    const Vector ql = structured_qlambda(p, s.lambda);
    auto sw = make_structured_sweep(p, out.x, ql);
    for (std::size_t i = 0; i < n; ++i) sw.update(out.x, i);
    for (std::size_t i = n - 1; i > 0; --i) sw.update(out.x, i - 1);
  } else {
    const Vector atl = at_lambda(p, s.lambda);
    const Vector atb = matvec_transposed(p.A_con, p.b_con);
    for (std::size_t i = 0; i < n; ++i)
      out.x[i] -= block_gradient(p, out.x, atl, atb, i) / block_diag(p, i);
    for (std::size_t i = n - 1; i > 0; --i)
      out.x[i - 1] -= block_gradient(p, out.x, atl, atb, i - 1) / block_diag(p, i - 1);
  }
  const Vector r = constraint_residual(p, out.x);
  for (std::size_t i = 0; i < p.m(); ++i) out.lambda[i] -= p.beta * r[i];
  ++out.epoch;
  return out;
}

DenseMatrix gbs_correction_F(const ConstrainedQP& p) {
  const DenseMatrix& g = correction_gram(p);
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i)
    if (g(i, i) == 0.0) throw DegenerateBlockError("gbs_correction_F: zero Gram diagonal");
  DenseMatrix f = DenseMatrix::identity(n);
  for (std::size_t j = 1; j < n; ++j) {
    Vector e(n, 0.0);
    e[j] = 1.0;
    const Vector y = apply_correction(g, e);
    for (std::size_t i = 0; i < n; ++i) f(i, j) = y[i];
  }
  return f;
}

AdmmState gbs_admm_epoch(const ConstrainedQP& p, const AdmmState& s) {
  const std::size_t n = p.n();
  AdmmState out = s;
  Vector tilde = s.x;
  if (p.structured) {
    const Vector ql = structured_qlambda(p, s.lambda);
    auto sw = make_structured_sweep(p, tilde, ql);
    for (std::size_t i = 0; i < n; ++i) sw.update(tilde, i);
  } else {
    const Vector atl = at_lambda(p, s.lambda);
    const Vector atb = matvec_transposed(p.A_con, p.b_con);
    sweep_dense(p, tilde, atl, atb, iota_order(n));
  }
  const Vector rt = constraint_residual(p, tilde);
  Vector lambda_tilde = s.lambda;
  for (std::size_t i = 0; i < p.m(); ++i) lambda_tilde[i] -= p.sigma * rt[i];

  Vector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = s.x[i] - tilde[i];
  Vector corr;
  if (p.structured) {
    const auto [a, b] = omega_coeffs(p);
    corr.resize(n);
    corr[0] = d[0];
    double t = 0.0;
    for (std::size_t i = n; i > 1; --i) {
      corr[i - 1] = d[i - 1] - (b / (a + b)) * t;
      t += corr[i - 1];
    }
  } else {
    corr = apply_correction(correction_gram(p), d);
  }
  for (std::size_t i = 0; i < n; ++i) out.x[i] = s.x[i] - p.beta * corr[i];
  for (std::size_t i = 0; i < p.m(); ++i)
    // the dual moves toward the prediction; the opposite sign diverges
    out.lambda[i] = s.lambda[i] + p.beta * (lambda_tilde[i] - s.lambda[i]);
  ++out.epoch;
  return out;
}

AdmmState rp_admm_epoch(const ConstrainedQP& p, const AdmmState& s, rng::Counter& gen) {
  const std::size_t n = p.n();
  std::vector<std::size_t> order = iota_order(n);
  for (std::size_t k = n - 1; k > 0; --k)
    std::swap(order[k], order[std::size_t(gen.next_u64() % (k + 1))]);
  AdmmState out = s;
  if (p.structured) {
    const Vector ql = structured_qlambda(p, s.lambda);
    auto sw = make_structured_sweep(p, out.x, ql);
    for (std::size_t i : order) sw.update(out.x, i);
  } else {
    const Vector atl = at_lambda(p, s.lambda);
    const Vector atb = matvec_transposed(p.A_con, p.b_con);
    sweep_dense(p, out.x, atl, atb, order);
  }
  const Vector r = constraint_residual(p, out.x);
  for (std::size_t i = 0; i < p.m(); ++i) out.lambda[i] -= p.beta * r[i];
  ++out.epoch;
  return out;
}

AdmmState alm_epoch(const ConstrainedQP& p, const AdmmState& s) {
  const std::size_t n = p.n();
  AdmmState out = s;
  if (p.structured) {
    // (2Q + sigma Q^2) x = Q lambda; both sides live in the {a I + b J} family
    const auto [a, b] = omega_coeffs(p);
    const double ha = 2.0 * (1.0 - p.c) + p.sigma * a;
    const double hb = 2.0 * p.c + p.sigma * b;
    const Vector rhs = structured_qlambda(p, s.lambda);
    const double sr = sum_of(rhs);
    const double shift = hb * sr / (ha * (ha + hb * double(n)));
    for (std::size_t i = 0; i < n; ++i) out.x[i] = rhs[i] / ha - shift;
  } else {
    DenseMatrix h = add(scale(p.Q_obj, 2.0), scale(p.Omega, p.sigma));
    Vector rhs = at_lambda(p, s.lambda);
    const Vector atb = matvec_transposed(p.A_con, p.b_con);
    for (std::size_t i = 0; i < n; ++i) rhs[i] += p.sigma * atb[i];
    try {
      const DenseMatrix chol = matcore::cholesky(h);
      out.x = matcore::solve_upper(chol.transposed(), matcore::solve_lower(chol, rhs));
    } catch (const NotPositiveDefiniteError&) {
      // least-norm solve through the eigendecomposition
      const auto ed = matcore::sym_eigen(h);
      const Vector vt_rhs = matvec_transposed(ed.vectors, rhs);
      Vector scaled(n, 0.0);
      const double cutoff = 1e-12 * std::max(std::abs(ed.values.front()),
                                             std::abs(ed.values.back()));
      for (std::size_t i = 0; i < n; ++i)
        if (std::abs(ed.values[i]) > cutoff) scaled[i] = vt_rhs[i] / ed.values[i];
      out.x = matvec(ed.vectors, scaled);
      out.degenerate_solve = true;
    }
  }
  const Vector r = constraint_residual(p, out.x);
  for (std::size_t i = 0; i < p.m(); ++i) out.lambda[i] -= p.sigma * p.beta * r[i];
  ++out.epoch;
  return out;
}

AdmmRunRecord run_admm_to_tolerance(const ConstrainedQP& p, AdmmRule rule,
                                    const AdmmRunOptions& opts) {
  const std::size_t n = p.n();
  AdmmRunRecord rec;
  rec.rule = rule;
  rec.seed = opts.seed;
  rec.stop = opts.stop;

  AdmmState s;
  if (opts.init) {
    if (opts.init->size() != n) throw DimensionError("run_admm_to_tolerance: init size");
    s.x = *opts.init;
  } else {
    rng::Counter gen(rng::derive_seed(opts.seed, kInitTag, n));
    s.x.resize(n);
    for (double& v : s.x) v = gen.uniform01();
  }
  s.lambda.assign(p.m(), 0.0);
  rng::Counter order_gen(rng::derive_seed(opts.seed, kOrderTag, n));

  const auto stacked_norm = [&](const AdmmState& st) {
    return std::sqrt(kernels::dot(st.x.data(), st.x.data(), n) +
                     kernels::dot(st.lambda.data(), st.lambda.data(), p.m()));
  };
  const double e0 = stacked_norm(s);
  if (opts.record_trace) rec.error_trace.push_back(1.0);
  if (opts.record_residual) rec.residual_trace.push_back(norm2(constraint_residual(p, s.x)));
  if (e0 <= 0.0) {
    rec.converged = true;
    return rec;
  }

  for (std::size_t k = 0; k < opts.stop.max_epochs; ++k) {
    switch (rule) {
      case AdmmRule::SGS: s = sgs_admm_epoch(p, s); break;
      case AdmmRule::GBS: s = gbs_admm_epoch(p, s); break;
      case AdmmRule::RP: s = rp_admm_epoch(p, s, order_gen); break;
      case AdmmRule::ALM: s = alm_epoch(p, s); break;
    }
    ++rec.epochs;
    const double rel = stacked_norm(s) / e0;
    if (opts.record_trace) rec.error_trace.push_back(rel);
    if (opts.record_residual)
      rec.residual_trace.push_back(norm2(constraint_residual(p, s.x)));
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

void write_admm_trace_csv(const AdmmRunRecord& rec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("write_admm_trace_csv: cannot open " + path);
  out << "epoch,relative_error,constraint_residual\n";
  for (std::size_t k = 0; k < rec.error_trace.size(); ++k) {
    out << k << ',' << rec.error_trace[k] << ',';
    out << (k < rec.residual_trace.size() ? rec.residual_trace[k] : 0.0) << '\n';
  }
}

}  // namespace symcd::admm
