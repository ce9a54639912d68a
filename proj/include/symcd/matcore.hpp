#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "symcd/types.hpp"

// Dense linear-algebra kernel: triangular extraction/solves, a symmetric
// Jacobi eigensolver, Cholesky, and spectral norm / radius estimation.

namespace symcd::matcore {

struct EigenDecomposition {
  Vector values;        // ascending
  DenseMatrix vectors;  // orthonormal columns, vectors.col(i) pairs with values[i]
};

// Lower-triangular part of a square matrix, diagonal included.
DenseMatrix lower_triangular(const DenseMatrix& q);

// Forward substitution: solves L y = v for lower-triangular L.
Vector solve_lower(const DenseMatrix& l, const Vector& v);
// Backward substitution: solves U y = v for upper-triangular U.
Vector solve_upper(const DenseMatrix& u, const Vector& v);

// Full spectrum of a symmetric matrix via cyclic Jacobi rotations,
// with orthonormal eigenvectors.
EigenDecomposition sym_eigen(const DenseMatrix& s);
// Eigenvalues only (ascending); skips the accumulation of rotations.
Vector sym_eigenvalues(const DenseMatrix& s);

// sqrt(lambda_max(M^T M)) by power iteration on M^T M. Deterministic
// all-ones start; relative accuracy 1e-10 with an iteration cap of
// 10 * rows * cols.
double spectral_norm(const DenseMatrix& m);

// max |eigenvalue| of a symmetric matrix (via sym_eigenvalues).
double spectral_radius_sym(const DenseMatrix& s);

// Lower-triangular C with C C^T = S for symmetric positive definite S.
DenseMatrix cholesky(const DenseMatrix& s);

// All (possibly complex) eigenvalues of a small general real matrix, by
// Hessenberg reduction and shifted QR in complex arithmetic. Intended for
// n <= a few dozen; used as the brute-force spectral oracle.
std::vector<std::complex<double>> eig_general(const DenseMatrix& m);

// Spectral radius estimate for a general real matrix given only its action
// x -> M x. Power iteration with a two-term recurrence fit so that a
// dominant complex-conjugate pair is handled; stops when the estimate is
// stable to rel_tol. Used for the nonsymmetric cyclic-CD update matrix.
double power_radius(const std::function<void(const Vector&, Vector&)>& apply, std::size_t n,
                    double rel_tol = 1e-10, std::size_t max_iter = 2000000);

}  // namespace symcd::matcore
