#include "symcd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define SYMCD_X86 1
#include <immintrin.h>
#else
#define SYMCD_X86 0
#endif

#if defined(__aarch64__)
#define SYMCD_NEON 1
#include <arm_neon.h>
#else
#define SYMCD_NEON 0
#endif

namespace symcd::kernels {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void rotate_scalar(double c, double s, double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

#if SYMCD_X86

__attribute__((target("avx2,fma"))) static double dot_avx2(const double* x, const double* y,
                                                           std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc0);
  __m128d hi = _mm256_extractf128_pd(acc0, 1);
  lo = _mm_add_pd(lo, hi);
  double acc = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

__attribute__((target("avx2,fma"))) static void axpy_avx2(double a, const double* x, double* y,
                                                          std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) static void rotate_avx2(double c, double s, double* x,
                                                            double* y, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d vx = _mm256_loadu_pd(x + i);
    const __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_fmsub_pd(vc, vx, _mm256_mul_pd(vs, vy)));
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, vx, _mm256_mul_pd(vc, vy)));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

#endif  // SYMCD_X86

#if SYMCD_NEON

static double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += x[i] * y[i];
  return out;
}

static void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

static void rotate_neon(double c, double s, double* x, double* y, std::size_t n) {
  const float64x2_t vc = vdupq_n_f64(c);
  const float64x2_t vs = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t vx = vld1q_f64(x + i);
    const float64x2_t vy = vld1q_f64(y + i);
    vst1q_f64(x + i, vfmsq_f64(vmulq_f64(vc, vx), vs, vy));
    vst1q_f64(y + i, vfmaq_f64(vmulq_f64(vc, vy), vs, vx));
  }
  for (; i < n; ++i) {
    const double xi = x[i];
    const double yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

#endif  // SYMCD_NEON

static Backend detect_backend() {
#if SYMCD_X86
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return Backend::Avx2;
#endif
#if SYMCD_NEON
  return Backend::Neon;
#endif
  return Backend::Scalar;
}

Backend active_backend() {
  static const Backend b = detect_backend();
  return b;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
    default:
      return "scalar";
  }
}

double dot(const double* x, const double* y, std::size_t n) {
#if SYMCD_X86
  if (active_backend() == Backend::Avx2) return dot_avx2(x, y, n);
#endif
#if SYMCD_NEON
  if (active_backend() == Backend::Neon) return dot_neon(x, y, n);
#endif
  return dot_scalar(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
#if SYMCD_X86
  if (active_backend() == Backend::Avx2) return axpy_avx2(a, x, y, n);
#endif
#if SYMCD_NEON
  if (active_backend() == Backend::Neon) return axpy_neon(a, x, y, n);
#endif
  axpy_scalar(a, x, y, n);
}

void rotate(double c, double s, double* x, double* y, std::size_t n) {
#if SYMCD_X86
  if (active_backend() == Backend::Avx2) return rotate_avx2(c, s, x, y, n);
#endif
#if SYMCD_NEON
  if (active_backend() == Backend::Neon) return rotate_neon(c, s, x, y, n);
#endif
  rotate_scalar(c, s, x, y, n);
}

}  // namespace symcd::kernels
