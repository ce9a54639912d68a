#pragma once

#include <cstdint>
#include <optional>

#include "symcd/types.hpp"

// Problem instance constructors with closed-form metadata: the equal-diagonal
// worst-case family Q(c, n), its spectrum and Sherman-Morrison inverse, and
// the seeded circulant-Hankel / tridiagonal generators.

namespace symcd::instances {

enum class InstanceKind { WorstCase, CirculantHankel, Tridiagonal, Custom };

struct QuadraticProblem {
  DenseMatrix Q;   // symmetric PSD objective matrix
  Vector b;        // linear term, b in range(Q)
  DenseMatrix A;   // factor with A^T A = Q
  Vector x_star;   // a minimizer (Q x* = b)
  InstanceKind kind = InstanceKind::Custom;
  double c = 0.0;            // worst-case family parameter, if applicable
  std::uint64_t seed = 0;    // generator seed, if applicable

  std::size_t n() const { return Q.rows(); }
  bool is_worst_case() const { return kind == InstanceKind::WorstCase; }
};

struct SpectrumInfo {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double lambda_avg = 0.0;
  double kappa = 0.0;     // lambda_max / lambda_min
  double kappa_cd = 0.0;  // lambda_avg / lambda_min
};

// Unit diagonal, constant off-diagonal c in (0,1); b = 0, x* = 0,
// A = transpose of the Cholesky factor.
QuadraticProblem make_worst_case(std::size_t n, double c);

// Closed-form spectrum of Q(c, n): lambda_min = 1-c (multiplicity n-1),
// lambda_max = 1-c+cn, lambda_avg = 1.
SpectrumInfo worst_case_spectrum(std::size_t n, double c);

// Q^{-1} = (1/(1-c)) I - (c / ((1-c)(1-c+cn))) ee^T in closed form.
DenseMatrix sherman_morrison_inverse(std::size_t n, double c);

// A_{i,j} = d_{i+j-1} with wrap d_k = d_{k-n} for k > n and seeded standard
// normal draws d_1..d_n; Q = A^T A. Redraws with a derived sub-seed if some
// Q_ii vanishes.
QuadraticProblem make_circulant_hankel(std::size_t n, std::uint64_t seed);

// Symmetric tridiagonal A with unit diagonal and seeded standard normal
// off-diagonals; Q = A^T A.
QuadraticProblem make_tridiagonal(std::size_t n, std::uint64_t seed);

// Custom problem from an explicit symmetric PSD matrix; A is derived from
// Cholesky (or the symmetric eigen square root if Cholesky fails).
QuadraticProblem make_custom(DenseMatrix q, Vector b);

// Spectrum of an arbitrary problem via the symmetric eigensolver.
SpectrumInfo spectrum_of(const QuadraticProblem& p);

}  // namespace symcd::instances
