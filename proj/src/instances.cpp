#include "symcd/instances.hpp"

#include <cmath>

#include "symcd/matcore.hpp"
#include "symcd/rng.hpp"

namespace symcd::instances {

namespace {

constexpr std::uint64_t kHankelTag = 0x48414e4b454cULL;  // "HANKEL"
constexpr std::uint64_t kTridiagTag = 0x545249444947ULL; // "TRIDIG"

void check_worst_case_params(std::size_t n, double c) {
  if (n < 2) throw ParameterError("worst-case family needs n >= 2");
  if (!(c > 0.0 && c < 1.0)) throw ParameterError("worst-case family needs c in (0, 1)");
}

DenseMatrix factor_from(const DenseMatrix& q) {
  // A = C^T so that A^T A = C C^T = Q
  return matcore::cholesky(q).transposed();
}

QuadraticProblem from_factor(DenseMatrix a, InstanceKind kind, std::uint64_t seed) {
  QuadraticProblem p;
  p.Q = matmul(a.transposed(), a);
  // mirror to make symmetry exact
  for (std::size_t i = 0; i < p.Q.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) p.Q(i, j) = p.Q(j, i);
  p.A = std::move(a);
  p.b = Vector(p.Q.rows(), 0.0);
  p.x_star = Vector(p.Q.rows(), 0.0);
  p.kind = kind;
  p.seed = seed;
  return p;
}

}  // namespace

QuadraticProblem make_worst_case(std::size_t n, double c) {
  check_worst_case_params(n, c);
  QuadraticProblem p;
  p.Q = DenseMatrix(n, n, c);
  for (std::size_t i = 0; i < n; ++i) p.Q(i, i) = 1.0;
  p.A = factor_from(p.Q);
  p.b = Vector(n, 0.0);
  p.x_star = Vector(n, 0.0);
  p.kind = InstanceKind::WorstCase;
  p.c = c;
  return p;
}

SpectrumInfo worst_case_spectrum(std::size_t n, double c) {
  check_worst_case_params(n, c);
  SpectrumInfo s;
  s.lambda_min = 1.0 - c;
  s.lambda_max = 1.0 - c + c * double(n);
  s.lambda_avg = 1.0;  // trace n over n
  s.kappa = s.lambda_max / s.lambda_min;
  s.kappa_cd = s.lambda_avg / s.lambda_min;
  return s;
}

DenseMatrix sherman_morrison_inverse(std::size_t n, double c) {
  check_worst_case_params(n, c);
  const double ct = 1.0 - c;
  const double diag = 1.0 / ct - c / (ct * (ct + c * double(n)));
  const double off = -c / (ct * (ct + c * double(n)));
  DenseMatrix inv(n, n, off);
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = diag;
  return inv;
}

QuadraticProblem make_circulant_hankel(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ParameterError("circulant Hankel generator needs n >= 2");
  std::uint64_t sub = rng::derive_seed(seed, kHankelTag, n);
  for (int attempt = 0; attempt < 64; ++attempt) {
    rng::Counter gen(sub);
    Vector delta(n);
    for (double& d : delta) d = gen.normal();
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = delta[(i + j) % n];  // delta_{i+j-1}, wrapped
    QuadraticProblem p = from_factor(std::move(a), InstanceKind::CirculantHankel, seed);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(p.Q(i, i)) <= 1e-12) ok = false;
    if (ok) return p;
    sub = rng::mix64(sub);  // redraw with a fresh sub-seed
  }
  throw ParameterError("circulant Hankel generator: could not find nonzero diagonal");
}

QuadraticProblem make_tridiagonal(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw ParameterError("tridiagonal generator needs n >= 2");
  rng::Counter gen(rng::derive_seed(seed, kTridiagTag, n));
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double t = gen.normal();
    a(i, i + 1) = t;
    a(i + 1, i) = t;
  }
  return from_factor(std::move(a), InstanceKind::Tridiagonal, seed);
}

QuadraticProblem make_custom(DenseMatrix q, Vector b) {
  if (!q.square() || b.size() != q.rows()) throw DimensionError("make_custom: shape mismatch");
  if (!is_symmetric(q)) throw SymmetryViolationError("make_custom: Q must be symmetric");
  QuadraticProblem p;
  try {
    p.A = factor_from(q);
  } catch (const NotPositiveDefiniteError&) {
    // symmetric eigen square root for singular PSD inputs
    const auto ed = matcore::sym_eigen(q);
    const std::size_t n = q.rows();
    DenseMatrix root(n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double s = std::sqrt(std::max(ed.values[k], 0.0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          root(i, j) += s * ed.vectors(i, k) * ed.vectors(j, k);
    }
    p.A = root;
  }
  bool b_zero = true;
  for (double v : b)
    if (v != 0.0) b_zero = false;
  if (b_zero) {
    p.x_star = Vector(q.rows(), 0.0);
  } else {
    const DenseMatrix chol = matcore::cholesky(q);
    p.x_star = matcore::solve_upper(chol.transposed(), matcore::solve_lower(chol, b));
  }
  p.Q = std::move(q);
  p.b = std::move(b);
  p.kind = InstanceKind::Custom;
  return p;
}

SpectrumInfo spectrum_of(const QuadraticProblem& p) {
  if (p.is_worst_case()) return worst_case_spectrum(p.n(), p.c);
  const Vector vals = matcore::sym_eigenvalues(p.Q);
  SpectrumInfo s;
  s.lambda_max = vals.back();
  s.lambda_min = vals.front();
  double tr = 0.0;
  for (double v : vals) tr += v;
  s.lambda_avg = tr / double(vals.size());
  s.kappa = s.lambda_max / s.lambda_min;
  s.kappa_cd = s.lambda_avg / s.lambda_min;
  return s;
}

}  // namespace symcd::instances
