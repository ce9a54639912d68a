#include "symcd/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "symcd/kernels.hpp"

namespace symcd::matcore {

DenseMatrix lower_triangular(const DenseMatrix& q) {
  if (!q.square()) throw DimensionError("lower_triangular: matrix must be square");
  DenseMatrix g(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j) g(i, j) = q(i, j);
  return g;
}

Vector solve_lower(const DenseMatrix& l, const Vector& v) {
  if (!l.square() || l.rows() != v.size()) throw DimensionError("solve_lower: dimension mismatch");
  const std::size_t n = v.size();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double piv = l(i, i);
    if (piv == 0.0) throw SingularTriangularError("solve_lower: zero diagonal entry");
    y[i] = (v[i] - kernels::dot(l.row(i), y.data(), i)) / piv;
  }
  return y;
}

Vector solve_upper(const DenseMatrix& u, const Vector& v) {
  if (!u.square() || u.rows() != v.size()) throw DimensionError("solve_upper: dimension mismatch");
  const std::size_t n = v.size();
  Vector y(n);
  for (std::size_t ii = n; ii-- > 0;) {
    const double piv = u(ii, ii);
    if (piv == 0.0) throw SingularTriangularError("solve_upper: zero diagonal entry");
    double acc = v[ii];
    acc -= kernels::dot(u.row(ii) + ii + 1, y.data() + ii + 1, n - ii - 1);
    y[ii] = acc / piv;
  }
  return y;
}

namespace {

void require_symmetric(const DenseMatrix& s, const char* who) {
  if (!is_symmetric(s)) throw SymmetryViolationError(std::string(who) + ": input not symmetric");
}

double offdiag_sq(const DenseMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
  return acc;
}

// Cyclic Jacobi on a symmetrized working copy. If accum is non-null it
// receives the rotations as rows (i.e. it holds V^T on exit).
Vector jacobi_eigenvalues(const DenseMatrix& s, DenseMatrix* accum) {
  const std::size_t n = s.rows();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = 0.5 * (s(i, j) + s(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  if (accum) *accum = DenseMatrix::identity(n);

  const double fro = frobenius_norm(a);
  if (fro == 0.0) return Vector(n, 0.0);
  const double stop = 1e-30 * fro * fro;
  const double skip = std::numeric_limits<double>::epsilon() * 1e-3 * fro / double(n);

  for (int sweep = 0; sweep < 50; ++sweep) {
    if (offdiag_sq(a) <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= skip) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        const double app = a(p, p);
        const double aqq = a(q, q);
        // rows p and q, then mirror into the columns
        kernels::rotate(c, sn, a.row(p), a.row(q), n);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          a(k, p) = a(p, k);
          a(k, q) = a(q, k);
        }
        if (accum) kernels::rotate(c, sn, accum->row(p), accum->row(q), n);
      }
    }
  }

  Vector vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i);
  return vals;
}

}  // namespace

Vector sym_eigenvalues(const DenseMatrix& s) {
  require_symmetric(s, "sym_eigenvalues");
  Vector vals = jacobi_eigenvalues(s, nullptr);
  std::sort(vals.begin(), vals.end());
  return vals;
}

EigenDecomposition sym_eigen(const DenseMatrix& s) {
  require_symmetric(s, "sym_eigen");
  const std::size_t n = s.rows();
  DenseMatrix vt;
  Vector vals = jacobi_eigenvalues(s, &vt);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return vals[i] < vals[j]; });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = vals[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = vt(order[k], i);
  }
  return out;
}

double spectral_radius_sym(const DenseMatrix& s) {
  const Vector vals = sym_eigenvalues(s);
  double r = 0.0;
  for (double v : vals) r = std::max(r, std::abs(v));
  return r;
}

double spectral_norm(const DenseMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0.0;
  if (frobenius_norm(m) == 0.0) return 0.0;

  Vector x(cols, 1.0 / std::sqrt(double(cols)));
  Vector y(rows), z(cols);
  double lambda = 0.0;
  const std::size_t cap = 10 * rows * cols + 100;
  int stable = 0;
  int stagnant = 0;
  std::size_t perturb_slot = 0;
  for (std::size_t it = 0; it < cap; ++it) {
    y = matvec(m, x);
    z = matvec_transposed(m, y);
    const double zn = norm2(z);
    if (zn == 0.0) {
      // start vector fell into the null space; nudge a coordinate
      x.assign(cols, 0.0);
      x[perturb_slot++ % cols] = 1.0;
      continue;
    }
    const double next = kernels::dot(x.data(), z.data(), cols);  // Rayleigh on M^T M
    const double delta = std::abs(next - lambda);
    if (delta <= 1e-12 * std::max(next, 1e-300)) {
      if (++stable >= 3) {
        lambda = next;
        break;
      }
    } else {
      stable = 0;
    }
    if (delta <= 1e-15 * std::max(next, 1e-300)) {
      if (++stagnant >= 50) {
        // deterministic fallback perturbation against an unlucky start
        x[perturb_slot++ % cols] += 1e-6;
        const double xn = norm2(x);
        for (double& v : x) v /= xn;
        stagnant = 0;
        continue;
      }
    } else {
      stagnant = 0;
    }
    lambda = next;
    for (std::size_t i = 0; i < cols; ++i) x[i] = z[i] / zn;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

DenseMatrix cholesky(const DenseMatrix& s) {
  require_symmetric(s, "cholesky");
  const std::size_t n = s.rows();
  DenseMatrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double acc = s(i, j) - kernels::dot(c.row(i), c.row(j), j);
      if (i == j) {
        if (acc <= 0.0) throw NotPositiveDefiniteError("cholesky: non-positive pivot");
        c(i, j) = std::sqrt(acc);
      } else {
        c(i, j) = acc / c(j, j);
      }
    }
  }
  return c;
}

namespace {

using cplx = std::complex<double>;

// Givens-based shifted QR on a complex upper-Hessenberg matrix.
std::vector<cplx> hessenberg_qr_eigenvalues(std::vector<std::vector<cplx>> h) {
  const std::size_t n = h.size();
  std::vector<cplx> eig;
  eig.reserve(n);
  const double eps = std::numeric_limits<double>::epsilon();

  std::size_t hi = n;
  int iters_here = 0;
  while (hi > 0) {
    if (hi == 1) {
      eig.push_back(h[0][0]);
      break;
    }
    // deflate
    std::size_t lo = hi - 1;
    while (lo > 0) {
      const double sub = std::abs(h[lo][lo - 1]);
      if (sub <= eps * (std::abs(h[lo - 1][lo - 1]) + std::abs(h[lo][lo]) + 1e-300)) {
        h[lo][lo - 1] = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi - 1) {
      eig.push_back(h[hi - 1][hi - 1]);
      --hi;
      iters_here = 0;
      continue;
    }

    // Wilkinson shift from the trailing 2x2 of the active block
    const cplx a = h[hi - 2][hi - 2];
    const cplx b = h[hi - 2][hi - 1];
    const cplx c = h[hi - 1][hi - 2];
    const cplx d = h[hi - 1][hi - 1];
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx r1 = 0.5 * (tr + disc);
    const cplx r2 = 0.5 * (tr - disc);
    cplx mu = (std::abs(r1 - d) < std::abs(r2 - d)) ? r1 : r2;
    if (++iters_here % 40 == 0) mu += std::abs(h[hi - 1][hi - 2]);  // exceptional shift

    for (std::size_t i = lo; i < hi; ++i) h[i][i] -= mu;
    // QR by Givens on rows (i, i+1), then RQ
    std::vector<cplx> cs(hi), sn(hi);
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      const cplx x = h[i][i];
      const cplx y = h[i + 1][i];
      const double nrm = std::sqrt(std::norm(x) + std::norm(y));
      if (nrm == 0.0) {
        cs[i] = 1.0;
        sn[i] = 0.0;
        continue;
      }
      cs[i] = x / nrm;
      sn[i] = y / nrm;
      for (std::size_t j = i; j < hi; ++j) {
        const cplx hij = h[i][j];
        const cplx hi1j = h[i + 1][j];
        h[i][j] = std::conj(cs[i]) * hij + std::conj(sn[i]) * hi1j;
        h[i + 1][j] = -sn[i] * hij + cs[i] * hi1j;
      }
    }
    for (std::size_t i = lo; i + 1 < hi; ++i) {
      const std::size_t top = (i + 2 < hi) ? i + 2 : hi;
      for (std::size_t k = lo; k < top; ++k) {
        const cplx hki = h[k][i];
        const cplx hki1 = h[k][i + 1];
        h[k][i] = hki * cs[i] + hki1 * sn[i];
        h[k][i + 1] = -hki * std::conj(sn[i]) + hki1 * std::conj(cs[i]);
      }
    }
    for (std::size_t i = lo; i < hi; ++i) h[i][i] += mu;
  }
  return eig;
}

}  // namespace

std::vector<std::complex<double>> eig_general(const DenseMatrix& m) {
  if (!m.square()) throw DimensionError("eig_general: matrix must be square");
  const std::size_t n = m.rows();
  std::vector<std::vector<cplx>> h(n, std::vector<cplx>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i][j] = m(i, j);

  // Householder reduction to Hessenberg form
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h[i][k]);
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = h[k + 1][k];
    const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;
    std::vector<cplx> v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h[i][k];
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
    // H <- (I - 2 v v^H) H
    for (std::size_t j = k; j < n; ++j) {
      cplx dotv = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) dotv += std::conj(v[i]) * h[i][j];
      for (std::size_t i = k + 1; i < n; ++i) h[i][j] -= 2.0 * v[i] * dotv;
    }
    // H <- H (I - 2 v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      cplx dotv = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) dotv += h[i][j] * v[j];
      for (std::size_t j = k + 1; j < n; ++j) h[i][j] -= 2.0 * dotv * std::conj(v[j]);
    }
  }
  return hessenberg_qr_eigenvalues(std::move(h));
}

double power_radius(const std::function<void(const Vector&, Vector&)>& apply, std::size_t n,
                    double rel_tol, std::size_t max_iter) {
  if (n == 0) return 0.0;
  Vector a(n, 0.0);                            // v_{k-1}
  Vector b(n, 1.0 / std::sqrt(double(n)));     // v_k
  Vector c(n, 0.0);                            // v_{k+1} = M v_k
  double est = 0.0;
  int stable = 0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    apply(b, c);
    const double cn = norm2(c);
    if (cn < 1e-300) return 0.0;

    double next = cn / std::max(norm2(b), 1e-300);
    if (it > 0) {
      // fit c ~ alpha*b + beta*a; dominant root magnitude of
      // mu^2 - alpha*mu - beta covers a complex-conjugate pair
      const double bb = kernels::dot(b.data(), b.data(), n);
      const double ab = kernels::dot(a.data(), b.data(), n);
      const double aa = kernels::dot(a.data(), a.data(), n);
      const double bc = kernels::dot(b.data(), c.data(), n);
      const double ac = kernels::dot(a.data(), c.data(), n);
      const double det = bb * aa - ab * ab;
      if (det > 1e-12 * bb * aa) {
        const double alpha = (bc * aa - ac * ab) / det;
        const double beta = (ac * bb - bc * ab) / det;
        const std::complex<double> disc = std::sqrt(std::complex<double>(alpha * alpha + 4.0 * beta));
        const double r1 = std::abs(0.5 * (alpha + disc));
        const double r2 = std::abs(0.5 * (alpha - disc));
        next = std::max(r1, r2);
      }
    }
    if (std::abs(next - est) <= rel_tol * std::max(std::abs(next), 1e-300)) {
      if (++stable >= 50) return next;
    } else {
      stable = 0;
    }
    est = next;
    const double inv = 1.0 / cn;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = b[i] * inv;
      b[i] = c[i] * inv;
    }
  }
  return est;
}

}  // namespace symcd::matcore
