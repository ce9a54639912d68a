#include "symcd/types.hpp"

#include <cmath>

#include "symcd/kernels.hpp"

namespace symcd {

Vector matvec(const DenseMatrix& m, const Vector& x) {
  if (x.size() != m.cols()) throw DimensionError("matvec: dimension mismatch");
  Vector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = kernels::dot(m.row(i), x.data(), m.cols());
  return y;
}

Vector matvec_transposed(const DenseMatrix& m, const Vector& x) {
  if (x.size() != m.rows()) throw DimensionError("matvec_transposed: dimension mismatch");
  Vector y(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) kernels::axpy(x[i], m.row(i), y.data(), m.cols());
  return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik != 0.0) kernels::axpy(aik, b.row(k), c.row(i), b.cols());
    }
  }
  return c;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("add: shape mismatch");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("subtract: shape mismatch");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.data().size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

DenseMatrix scale(const DenseMatrix& a, double s) {
  DenseMatrix c = a;
  for (double& v : c.data()) v *= s;
  return c;
}

double frobenius_norm(const DenseMatrix& m) {
  return std::sqrt(kernels::dot(m.data().data(), m.data().data(), m.data().size()));
}

double norm2(const Vector& v) { return std::sqrt(kernels::dot(v.data(), v.data(), v.size())); }

bool is_symmetric(const DenseMatrix& m, double rel_tol) {
  if (!m.square()) return false;
  double max_abs = 0.0;
  double max_dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      max_abs = std::max(max_abs, std::abs(m(i, j)));
      max_dev = std::max(max_dev, std::abs(m(i, j) - m(j, i)));
    }
  }
  return max_dev <= rel_tol * std::max(max_abs, 1e-300) || max_dev == 0.0;
}

}  // namespace symcd
