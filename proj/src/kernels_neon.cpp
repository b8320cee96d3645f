// NEON variants (aarch64, where 128-bit double lanes are baseline).

#include "glp/kernels.hpp"

#if defined(__aarch64__)
#define GLP_NEON 1
#include <arm_neon.h>
#else
#define GLP_NEON 0
#endif

namespace glp::kernels {

#if GLP_NEON

namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i] * y[i];
  return vaddvq_f64(acc) + tail;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  const float64x2_t va = vdupq_n_f64(a);
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_neon(double* x, double a, std::size_t n) {
  std::size_t i = 0;
  const float64x2_t va = vdupq_n_f64(a);
  for (; i + 2 <= n; i += 2) vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
  for (; i < n; ++i) x[i] *= a;
}

void add_neon(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vaddq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] + y[i];
}

void sub_neon(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vsubq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] - y[i];
}

void mul_neon(const double* x, const double* y, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
  for (; i < n; ++i) out[i] = x[i] * y[i];
}

double sum_neon(const double* x, std::size_t n) {
  std::size_t i = 0;
  float64x2_t acc = vdupq_n_f64(0.0);
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(x + i));
  double tail = 0.0;
  for (; i < n; ++i) tail += x[i];
  return vaddvq_f64(acc) + tail;
}

double max_neon(const double* x, std::size_t n) {
  if (n < 4) {
    double m = x[0];
    for (std::size_t i = 1; i < n; ++i)
      if (x[i] > m) m = x[i];
    return m;
  }
  float64x2_t acc = vld1q_f64(x);
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(x + i));
  double m = vmaxvq_f64(acc);
  for (; i < n; ++i)
    if (x[i] > m) m = x[i];
  return m;
}

}  // namespace

const Backend* neon_backend_if_supported() {
  static const Backend backend{
      "neon",   dot_neon, axpy_neon, scale_neon, add_neon,
      sub_neon, mul_neon, sum_neon,  max_neon,
  };
  return &backend;
}

#else

const Backend* neon_backend_if_supported() { return nullptr; }

#endif  // GLP_NEON

}  // namespace glp::kernels
