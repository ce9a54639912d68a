#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace symcd {

using Vector = std::vector<double>;

// Central tolerance constants. Tests and docs reference these instead of
// repeating magic numbers.
namespace tol {
inline constexpr double kReconstruction = 1e-9;   // eigen reconstruction, relative to ||S||_F
inline constexpr double kOrthonormality = 1e-10;  // eigenvector orthonormality
inline constexpr double kSymmetry = 1e-12;        // relative symmetry check on inputs
inline constexpr double kTriangularResidual = 1e-12;
}  // namespace tol

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SingularTriangularError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SymmetryViolationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Dense row-major real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = M x
Vector matvec(const DenseMatrix& m, const Vector& x);
// y = M^T x
Vector matvec_transposed(const DenseMatrix& m, const Vector& x);
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);

double frobenius_norm(const DenseMatrix& m);
double norm2(const Vector& v);

bool is_symmetric(const DenseMatrix& m, double rel_tol = tol::kSymmetry);

}  // namespace symcd
