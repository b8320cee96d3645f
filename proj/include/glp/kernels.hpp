#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace glp::kernels {

// Dispatch table for the arithmetic inner loops. `scalar` is the reference
// implementation; wider backends (AVX2, NEON) must agree with it within
// round-off and are selected at runtime from CPU capabilities. Selection can
// be overridden with select_backend() or the GLPROTEIN_KERNELS env var.
struct Backend {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);  // y += a*x
  void (*scale)(double* x, double a, std::size_t n);                  // x *= a
  void (*add)(const double* x, const double* y, double* out, std::size_t n);
  void (*sub)(const double* x, const double* y, double* out, std::size_t n);
  void (*mul)(const double* x, const double* y, double* out, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max)(const double* x, std::size_t n);  // requires n >= 1
};

const Backend& scalar_backend();

// All backends usable on this machine, scalar first.
std::vector<const Backend*> available_backends();

// Currently active backend (lazy-initialized: env override, else widest
// supported, else scalar).
const Backend& active();

// Select by name ("scalar", "avx2", "neon") or "auto". Returns false if the
// named backend is unavailable on this CPU.
bool select_backend(const std::string& name);

inline double dot(const double* x, const double* y, std::size_t n) { return active().dot(x, y, n); }
inline void axpy(double a, const double* x, double* y, std::size_t n) { active().axpy(a, x, y, n); }
inline void scale(double* x, double a, std::size_t n) { active().scale(x, a, n); }
inline void add(const double* x, const double* y, double* out, std::size_t n) { active().add(x, y, out, n); }
inline void sub(const double* x, const double* y, double* out, std::size_t n) { active().sub(x, y, out, n); }
inline void mul(const double* x, const double* y, double* out, std::size_t n) { active().mul(x, y, out, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double max(const double* x, std::size_t n) { return active().max(x, n); }

}  // namespace glp::kernels
