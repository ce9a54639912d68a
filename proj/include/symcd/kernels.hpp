#pragma once

#include <cstddef>

// Data-parallel inner loops used throughout the library: dot products for
// coordinate sweeps, axpy for residual updates, plane rotations for the
// Jacobi eigensolver. Each kernel has a scalar reference implementation and
// SIMD variants selected once at startup from CPU capabilities. The SIMD
// variants are equivalence-tested against the scalar references.

namespace symcd::kernels {

enum class Backend { Scalar, Avx2, Neon };

// Backend chosen for this process (queried once, cached).
Backend active_backend();
const char* backend_name(Backend b);

// sum_i x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);
// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
// Apply the plane rotation [c -s; s c] to the vector pair (x, y):
//   x' = c*x - s*y,  y' = s*x + c*y
void rotate(double c, double s, double* x, double* y, std::size_t n);

// Scalar references (always available, used as oracles in tests).
double dot_scalar(const double* x, const double* y, std::size_t n);
void axpy_scalar(double a, const double* x, double* y, std::size_t n);
void rotate_scalar(double c, double s, double* x, double* y, std::size_t n);

}  // namespace symcd::kernels
