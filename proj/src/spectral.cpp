#include "symcd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "symcd/kernels.hpp"
#include "symcd/matcore.hpp"
#include "symcd/rng.hpp"

namespace symcd::spectral {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kRpcdTag = 0x72706364;

// X = L^{-1} M by forward substitution, column by column.
DenseMatrix solve_lower_matrix(const DenseMatrix& l, const DenseMatrix& m) {
  const std::size_t n = l.rows();
  DenseMatrix x(n, m.cols());
  Vector col(n);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = m(i, j);
    const Vector y = matcore::solve_lower(l, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = y[i];
  }
  return x;
}

// X = U^{-1} M by backward substitution, column by column.
DenseMatrix solve_upper_matrix(const DenseMatrix& u, const DenseMatrix& m) {
  const std::size_t n = u.rows();
  DenseMatrix x(n, m.cols());
  Vector col(n);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = m(i, j);
    const Vector y = matcore::solve_upper(u, col);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = y[i];
  }
  return x;
}

DenseMatrix matrix_power(DenseMatrix base, std::size_t e) {
  DenseMatrix r = DenseMatrix::identity(base.rows());
  while (e > 0) {
    if (e & 1) r = matmul(r, base);
    e >>= 1;
    if (e) base = matmul(base, base);
  }
  return r;
}

// One-epoch map under the coordinate order `order`, dense route.
DenseMatrix permuted_ccd_matrix(const DenseMatrix& q, const std::vector<std::size_t>& order) {
  const std::size_t n = q.rows();
  DenseMatrix qp(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) qp(a, b) = q(order[a], order[b]);
  const DenseMatrix x = solve_lower_matrix(matcore::lower_triangular(qp), qp);
  DenseMatrix m(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      m(order[a], order[b]) = (a == b ? 1.0 : 0.0) - x(a, b);
  return m;
}

double log_width_sq(std::size_t n) {
  const double t = 2.0 + std::log(double(n)) / kPi;
  return t * t;
}

// Mean off-diagonal entry of Gamma^{-1} for Q(c, n); the inverse is
// Toeplitz with subdiagonal entries -c (1-c)^{i-j-1}.
double mean_offdiag_gamma_inv(std::size_t n, double c) {
  double sum = 0.0;
  double pw = 1.0;  // (1-c)^{k-1}
  for (std::size_t k = 1; k < n; ++k) {
    sum += double(n - k) * pw;
    pw *= (1.0 - c);
  }
  return -c * sum / (double(n) * double(n - 1));
}

double max_abs_eig(const DenseMatrix& m) {
  double r = 0.0;
  for (const auto& z : matcore::eig_general(m)) r = std::max(r, std::abs(z));
  return r;
}

// 1 - max|1 - e| for eigenvalues e of the subtracted part, computed without
// cancellation for e near 0.
double one_minus_rho_from(std::initializer_list<double> eigs) {
  double best = 1.0;
  for (double e : eigs) best = std::min(best, e <= 1.0 ? e : 2.0 - e);
  return best;
}

}  // namespace

const char* method_name(RadiusMethod m) {
  switch (m) {
    case RadiusMethod::ExactSymmetric: return "exact_symmetric";
    case RadiusMethod::BruteForceNonsymmetric: return "brute_force_nonsymmetric";
    case RadiusMethod::ClosedFormExpected: return "closed_form_expected";
    case RadiusMethod::EnumeratedExpected: return "enumerated_expected";
    case RadiusMethod::MonteCarloExpected: return "monte_carlo_expected";
  }
  throw ParameterError("unknown radius method");
}

DenseMatrix update_matrix(OrderRule rule, const QuadraticProblem& p) {
  const std::size_t n = p.n();
  const DenseMatrix eye = DenseMatrix::identity(n);
  switch (rule) {
    case OrderRule::Cyclic:
      return subtract(eye, solve_lower_matrix(matcore::lower_triangular(p.Q), p.Q));
    case OrderRule::SGS: {
      const DenseMatrix gamma = matcore::lower_triangular(p.Q);
      const DenseMatrix fwd = subtract(eye, solve_lower_matrix(gamma, p.Q));
      const DenseMatrix bwd = subtract(eye, solve_upper_matrix(gamma.transposed(), p.Q));
      return matmul(bwd, fwd);
    }
    case OrderRule::GBS: {
      const DenseMatrix x = solve_lower_matrix(matcore::lower_triangular(p.Q), p.Q);
      return subtract(eye, matmul(cd::gbs_correction_matrix(p), x));
    }
    case OrderRule::Gradient:
      return subtract(eye, scale(p.Q, 1.0 / instances::spectrum_of(p).lambda_max));
    case OrderRule::Randomized: {
      DenseMatrix k = eye;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) k(i, j) -= p.Q(i, j) / (double(n) * p.Q(i, i));
      return matrix_power(k, n);
    }
    case OrderRule::RandomPermuted:
      return expected_rpcd_matrix(p, RpcdMode::Enumerate);
  }
  throw ParameterError("unknown order rule");
}

DenseMatrix sgs_projector(const QuadraticProblem& p) {
  const DenseMatrix gamma = matcore::lower_triangular(p.Q);
  const DenseMatrix y = solve_lower_matrix(gamma, p.A.transposed());
  return subtract(DenseMatrix::identity(p.n()), matmul(p.A, y));
}

DenseMatrix symmetrized_sgs(const QuadraticProblem& p) {
  const DenseMatrix z = sgs_projector(p);
  return matmul(z.transposed(), z);
}

DenseMatrix symmetrized_gbs(const QuadraticProblem& p) {
  // The eigenvalue identity eig(I - B Gamma^{-1} Q) = eig(I - Gamma^{-1} Q
  // Gamma^{-T}) is stated for unit-diagonal Q. The back-substitution map is
  // similar under diagonal rescaling Q -> S Q S, so normalize first; for
  // unit-diagonal input this is the literal formula.
  const std::size_t n = p.n();
  DenseMatrix q = p.Q;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q(i, j) /= std::sqrt(p.Q(i, i) * p.Q(j, j));
  const DenseMatrix gamma = matcore::lower_triangular(q);
  const DenseMatrix x = solve_lower_matrix(gamma, q);
  // X Gamma^{-T} = (Gamma^{-1} X^T)^T
  const DenseMatrix w = solve_lower_matrix(gamma, x.transposed());
  return subtract(DenseMatrix::identity(n), w.transposed());
}

DenseMatrix expected_rpcd_matrix(const QuadraticProblem& p, RpcdMode mode,
                                 std::size_t samples, std::uint64_t seed) {
  const std::size_t n = p.n();
  switch (mode) {
    case RpcdMode::Enumerate: {
      if (n > 8) throw ParameterError("expected_rpcd_matrix: enumeration limited to n <= 8");
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      DenseMatrix acc(n, n);
      std::size_t count = 0;
      do {
        acc = add(acc, permuted_ccd_matrix(p.Q, order));
        ++count;
      } while (std::next_permutation(order.begin(), order.end()));
      return scale(acc, 1.0 / double(count));
    }
    case RpcdMode::ClosedForm: {
      if (!p.is_worst_case())
        throw ParameterError("expected_rpcd_matrix: closed form needs the equal-diagonal family");
      if (n == 1) return DenseMatrix(1, 1);
      const double beta = mean_offdiag_gamma_inv(n, p.c);
      DenseMatrix g(n, n, beta);
      for (std::size_t i = 0; i < n; ++i) g(i, i) = 1.0;
      return subtract(DenseMatrix::identity(n), matmul(g, p.Q));
    }
    case RpcdMode::MonteCarlo: {
      if (samples == 0) throw ParameterError("expected_rpcd_matrix: samples must be positive");
      rng::Counter gen(rng::derive_seed(seed, kRpcdTag, n));
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      DenseMatrix acc(n, n);
      for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t k = n - 1; k > 0; --k)
          std::swap(order[k], order[std::size_t(gen.next_u64() % (k + 1))]);
        acc = add(acc, permuted_ccd_matrix(p.Q, order));
      }
      return scale(acc, 1.0 / double(samples));
    }
  }
  throw ParameterError("unknown rpcd mode");
}

double rpcd_one_minus_rho_closed_form(std::size_t n, double c) {
  if (n == 1) return 1.0;
  const double beta = mean_offdiag_gamma_inv(n, c);
  // G Q = (1-beta)(1-c) I + [(1-beta)c + beta(1-c) + beta c n] J
  const double a = (1.0 - beta) * (1.0 - c);
  const double jcoef = (1.0 - beta) * c + beta * (1.0 - c) + beta * c * double(n);
  return one_minus_rho_from({a, a + double(n) * jcoef});
}

BoundInputs bound_inputs(const QuadraticProblem& p, double delta) {
  BoundInputs in;
  in.n = p.n();
  in.L = in.L_min = p.Q(0, 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.n(); ++i) {
    in.L = std::max(in.L, p.Q(i, i));
    in.L_min = std::min(in.L_min, p.Q(i, i));
    sum += p.Q(i, i);
  }
  in.L_avg = sum / double(p.n());
  in.kappa = instances::spectrum_of(p).kappa;
  in.c = p.c;
  in.delta = delta;
  return in;
}

double upper_bound_sgs(const BoundInputs& in) {
  const double b1 = 1.0 - in.L_min / (double(in.n) * in.kappa * in.L_avg);
  const double b2 = 1.0 - in.L_min / (in.L * log_width_sq(in.n) * in.kappa);
  const double f = std::max(0.0, std::min(b1, b2));
  return f * f;
}

double upper_bound_gbs(const BoundInputs& in) {
  const double s = std::min(double(in.n) * in.L_avg, log_width_sq(in.n) * in.L);
  const double f = std::max(0.0, 1.0 - 1.0 / (in.kappa * s));
  return f * f;
}

double lower_bound_sgs(std::size_t n, double kappa, double delta, std::size_t k) {
  const double base = std::max(0.0, 1.0 - 4.0 * kPi * kPi / (double(n) * kappa));
  return (1.0 - delta) * std::pow(base, double(2 * k + 2));
}

double lower_bound_ccd(std::size_t n, double kappa, double delta, std::size_t k) {
  const double base = std::max(0.0, 1.0 - 2.0 * kPi * kPi / (double(n) * kappa));
  return (1.0 - delta) * std::pow(base, double(2 * k + 2));
}

double gbs_lower_bound_n_threshold(double c) {
  const double q2 = 4.0 * c * c / (kPi * kPi) - c * c / 3.0;
  const double q1 = c * c / 2.0 - 2.0 * c;
  const double q0 = 2.0 - 2.0 * c + c * c / 6.0;
  const double disc = q1 * q1 - 4.0 * q2 * q0;
  if (disc < 0.0) return 0.0;  // quadratic has no real root: positive for all n
  return ((2.0 * c - c * c) + std::sqrt(disc)) / (2.0 * q2);
}

GbsLowerBound lower_bound_gbs(std::size_t n, double c, double kappa, double delta,
                              std::size_t k) {
  GbsLowerBound out;
  const double base =
      std::max(0.0, 1.0 - 3.0 * kPi * kPi / ((12.0 - kPi * kPi) * c * double(n) * kappa));
  out.floor = (1.0 - delta) * std::pow(base, double(2 * k + 2));
  out.valid_n_condition_1 =
      8.0 * c * double(n) >=
      kPi * kPi * (1.0 + std::sqrt(1.0 + 16.0 * (1.0 - c) / (kPi * kPi)));
  out.valid_n_condition_2 = double(n) >= gbs_lower_bound_n_threshold(c);
  return out;
}

NormWithBound gamma_qinv_gamma_bound(const QuadraticProblem& p) {
  const std::size_t n = p.n();
  const DenseMatrix gamma = matcore::lower_triangular(p.Q);
  // Q^{-1} Gamma via the Cholesky factorization (throws if Q is singular)
  const DenseMatrix chol = matcore::cholesky(p.Q);
  const DenseMatrix cholT = chol.transposed();
  DenseMatrix qinv_gamma(n, n);
  Vector col(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) col[i] = gamma(i, j);
    const Vector y = matcore::solve_upper(cholT, matcore::solve_lower(chol, col));
    for (std::size_t i = 0; i < n; ++i) qinv_gamma(i, j) = y[i];
  }
  NormWithBound out;
  out.value = matcore::spectral_norm(matmul(gamma.transposed(), qinv_gamma));
  const BoundInputs in = bound_inputs(p);
  out.bound = in.kappa * std::min(double(n) * in.L_avg, log_width_sq(n) * in.L);
  return out;
}

GbsProofQuantities gbs_proof_quantities(std::size_t n, double c) {
  if (n < 2 || c <= 0.0 || c >= 1.0)
    throw ParameterError("gbs_proof_quantities: need n >= 2 and c in (0,1)");
  GbsProofQuantities q;
  const double dn = double(n);
  q.norm_q = 1.0 - c + c * dn;
  q.norm_gtjg = dn + c * dn * (dn - 1.0) + c * c * dn * (dn - 1.0) * (2.0 * dn - 1.0) / 6.0;
  // Gamma Gamma^T - Q = c^2 [min(i,j) - 1]; the trailing (n-1)-block is the
  // min(i,j) matrix, whose largest eigenvalue is 1/(2 + 2 cos(2m pi/(2m+1))).
  const double m = dn - 1.0;
  q.norm_ggt_minus_q = c * c / (2.0 + 2.0 * std::cos(2.0 * m * kPi / (2.0 * m + 1.0)));
  q.asymptotic_min_norm = 4.0 * c * c * dn * dn / (kPi * kPi);
  return q;
}

double projection_form_check(const QuadraticProblem& p, const Vector& x0,
                             std::size_t epochs) {
  if (norm2(p.b) != 0.0)
    throw ParameterError("projection_form_check: residual form needs b = 0");
  const std::size_t n = p.n();
  // column norms of A and a projector application helper
  Vector colsq(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) colsq[j] += p.A(i, j) * p.A(i, j);
  const auto project = [&](std::size_t j, Vector& r) {
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) t += p.A(i, j) * r[i];
    t /= colsq[j];
    for (std::size_t i = 0; i < n; ++i) r[i] -= t * p.A(i, j);
  };

  Vector x = x0;
  Vector r = matvec(p.A, x0);
  double max_dev = 0.0;
  for (std::size_t k = 0; k < epochs; ++k) {
    x = cd::sgs_epoch(p, x);
    for (std::size_t j = 0; j < n; ++j) project(j, r);
    for (std::size_t j = n; j > 0; --j) project(j - 1, r);
    const Vector ax = matvec(p.A, x);
    double dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) dev += (ax[i] - r[i]) * (ax[i] - r[i]);
    max_dev = std::max(max_dev, std::sqrt(dev));
  }
  return max_dev;
}

namespace {

// rho via the two-term power iteration on the one-epoch map itself; valid
// for b = 0 where the epoch is the linear update map.
double epoch_power_radius(const QuadraticProblem& p, OrderRule rule) {
  const auto apply = [&](const Vector& x, Vector& y) {
    switch (rule) {
      case OrderRule::Cyclic: y = cd::ccd_epoch(p, x); break;
      case OrderRule::SGS: y = cd::sgs_epoch(p, x); break;
      case OrderRule::GBS: y = cd::gbs_epoch(p, x); break;
      default: throw ParameterError("epoch_power_radius: unsupported rule");
    }
  };
  return matcore::power_radius(apply, p.n());
}

// O(n) structured applies on the worst-case family: Gamma has unit diagonal
// and constant strict lower part c; Q^{-1} is the rank-one-corrected identity.
Vector wc_gamma_apply(double c, const Vector& x) {
  Vector y(x.size());
  double prefix = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = x[i] + c * prefix;
    prefix += x[i];
  }
  return y;
}

Vector wc_gamma_t_apply(double c, const Vector& x) {
  Vector y(x.size());
  double suffix = 0.0;
  for (std::size_t i = x.size(); i > 0; --i) {
    y[i - 1] = x[i - 1] + c * suffix;
    suffix += x[i - 1];
  }
  return y;
}

Vector wc_qinv_apply(std::size_t n, double c, const Vector& x) {
  const double alpha = 1.0 / (1.0 - c);
  const double gamma = -c / ((1.0 - c) * (1.0 - c + c * double(n)));
  double sum = 0.0;
  for (double v : x) sum += v;
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = alpha * x[i] + gamma * sum;
  return y;
}

// 1 - rho for the symmetrized sGS/GBS maps on the worst-case family, which
// both equal 1 / lambda_max(Gamma^T Q^{-1} Gamma). That Gram matrix has a
// well-separated top eigenvalue, so plain power iteration with a Rayleigh
// quotient converges quickly even when 1 - rho is ~1e-7.
double wc_symmetrized_one_minus_rho(std::size_t n, double c) {
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + double(i) / double(n);
  double lambda = 0.0;
  for (std::size_t it = 0; it < 100000; ++it) {
    const Vector w =
        wc_gamma_t_apply(c, wc_qinv_apply(n, c, wc_gamma_apply(c, x)));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      num += x[i] * w[i];
      den += x[i] * x[i];
    }
    const double next = num / den;
    const double nw = norm2(w);
    x = w;
    for (double& v : x) v /= nw;
    if (it > 2 && std::abs(next - lambda) <= 1e-14 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return 1.0 / lambda;
}

// 1 - rho of the cyclic update map I - Gamma^{-1} Q on the worst-case family
// via shift-inverted power iteration: (I - M)^{-1} = Q^{-1} Gamma has O(n)
// applies, and its dominant (complex-pair) eigenvalues 1/mu are well
// separated. A two-term recurrence fit x_{k+1} = a x_k + b x_{k-1} captures
// the conjugate pair; rho = max |1 - mu| over the fitted roots.
double wc_cyclic_one_minus_rho(std::size_t n, double c) {
  const auto apply = [&](const Vector& v) {
    return wc_qinv_apply(n, c, wc_gamma_apply(c, v));
  };
  Vector prev(n), cur;
  for (std::size_t i = 0; i < n; ++i) prev[i] = 1.0 + double(i) / double(n);
  cur = apply(prev);
  double omr = 1.0, omr_prev = -1.0;
  for (std::size_t it = 0; it < 20000; ++it) {
    const Vector next = apply(cur);
    // least-squares fit next = a*cur + b*prev
    double cc = 0.0, cp = 0.0, pp = 0.0, nc = 0.0, np = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cc += cur[i] * cur[i];
      cp += cur[i] * prev[i];
      pp += prev[i] * prev[i];
      nc += next[i] * cur[i];
      np += next[i] * prev[i];
    }
    const double det = cc * pp - cp * cp;
    if (det != 0.0) {
      const double a = (nc * pp - np * cp) / det;
      const double b = (np * cc - nc * cp) / det;
      const std::complex<double> disc =
          std::sqrt(std::complex<double>(a * a + 4.0 * b, 0.0));
      double best = 0.0;  // max of 2 Re(mu) - |mu|^2 = 1 - |1 - mu|^2
      for (const std::complex<double> root :
           {(a + disc) / 2.0, (a - disc) / 2.0}) {
        if (std::abs(root) == 0.0) continue;
        const std::complex<double> mu = 1.0 / root;
        best = std::max(best, 2.0 * mu.real() - std::norm(mu));
      }
      if (best > 0.0) {
        const double rho = std::sqrt(1.0 - best);
        omr = best / (1.0 + rho);
        if (it > 2 && std::abs(omr - omr_prev) <= 1e-11 * omr) return omr;
        omr_prev = omr;
      }
    }
    const double scale = norm2(next);
    prev = cur;
    cur = next;
    for (std::size_t i = 0; i < n; ++i) {
      prev[i] /= scale;
      cur[i] /= scale;
    }
  }
  return omr;
}

}  // namespace

SpectralReport spectral_report(const QuadraticProblem& p, OrderRule rule, double delta) {
  const std::size_t n = p.n();
  const auto spec = instances::spectrum_of(p);
  const bool zero_b = norm2(p.b) == 0.0;
  SpectralReport rep;
  rep.rule = rule;

  switch (rule) {
    case OrderRule::Gradient:
      rep.one_minus_rho = spec.lambda_min / spec.lambda_max;
      rep.method = RadiusMethod::ExactSymmetric;
      break;
    case OrderRule::Randomized: {
      // expected epoch map (I - (1/n) D^{-1} Q)^n via the symmetric
      // similarity D^{-1/2} Q D^{-1/2}
      double rho_pass;
      if (p.is_worst_case()) {
        rho_pass = 1.0 - (1.0 - p.c) / double(n);
        rep.method = RadiusMethod::ClosedFormExpected;
      } else {
        DenseMatrix s = p.Q;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            s(i, j) /= std::sqrt(p.Q(i, i) * p.Q(j, j));
        const Vector mu = matcore::sym_eigenvalues(s);
        rho_pass = 0.0;
        for (double m : mu) rho_pass = std::max(rho_pass, std::abs(1.0 - m / double(n)));
        rep.method = RadiusMethod::ExactSymmetric;
      }
      rep.one_minus_rho = -std::expm1(double(n) * std::log(rho_pass));
      break;
    }
    case OrderRule::RandomPermuted: {
      if (p.is_worst_case()) {
        rep.one_minus_rho = rpcd_one_minus_rho_closed_form(n, p.c);
        rep.method = RadiusMethod::ClosedFormExpected;
      } else if (n <= 8) {
        rep.one_minus_rho =
            1.0 - max_abs_eig(expected_rpcd_matrix(p, RpcdMode::Enumerate));
        rep.method = RadiusMethod::EnumeratedExpected;
      } else {
        rep.samples = 1000;
        rep.one_minus_rho = 1.0 - max_abs_eig(expected_rpcd_matrix(
                                      p, RpcdMode::MonteCarlo, rep.samples, 1));
        rep.method = RadiusMethod::MonteCarloExpected;
      }
      break;
    }
    case OrderRule::SGS: {
      if (p.is_worst_case())
        rep.one_minus_rho = wc_symmetrized_one_minus_rho(n, p.c);
      else {
        const double z = matcore::spectral_norm(sgs_projector(p));
        rep.one_minus_rho = 1.0 - z * z;
      }
      rep.method = RadiusMethod::ExactSymmetric;
      break;
    }
    case OrderRule::GBS: {
      if (p.is_worst_case())
        rep.one_minus_rho = wc_symmetrized_one_minus_rho(n, p.c);
      else
        rep.one_minus_rho = 1.0 - matcore::spectral_radius_sym(symmetrized_gbs(p));
      rep.method = RadiusMethod::ExactSymmetric;
      break;
    }
    case OrderRule::Cyclic: {
      if (n <= 8) {
        rep.one_minus_rho = 1.0 - max_abs_eig(update_matrix(rule, p));
        rep.method = RadiusMethod::BruteForceNonsymmetric;
      } else if (p.is_worst_case()) {
        rep.one_minus_rho = wc_cyclic_one_minus_rho(n, p.c);
        rep.method = RadiusMethod::BruteForceNonsymmetric;
      } else if (zero_b) {
        rep.one_minus_rho = 1.0 - epoch_power_radius(p, rule);
        rep.method = RadiusMethod::BruteForceNonsymmetric;
      } else {
        rep.one_minus_rho = 1.0 - max_abs_eig(update_matrix(rule, p));
        rep.method = RadiusMethod::BruteForceNonsymmetric;
      }
      break;
    }
  }

  const BoundInputs in = bound_inputs(p, delta);
  const double nk = double(n) * in.kappa;
  if (rule == OrderRule::SGS) {
    rep.bound_upper = upper_bound_sgs(in);
    const double base = std::max(0.0, 1.0 - 4.0 * kPi * kPi / nk);
    rep.bound_lower = base * base;
  } else if (rule == OrderRule::GBS) {
    rep.bound_upper = upper_bound_gbs(in);
    const auto lb = lower_bound_gbs(n, p.c, in.kappa, delta, 0);
    const double base =
        std::max(0.0, 1.0 - 3.0 * kPi * kPi / ((12.0 - kPi * kPi) * p.c * nk));
    rep.bound_lower = base * base;
    rep.valid_lower_1 = p.is_worst_case() && lb.valid_n_condition_1;
    rep.valid_lower_2 = p.is_worst_case() && lb.valid_n_condition_2;
  } else if (rule == OrderRule::Cyclic) {
    const double base = std::max(0.0, 1.0 - 2.0 * kPi * kPi / nk);
    rep.bound_lower = base * base;
  }
  return rep;
}

}  // namespace symcd::spectral
