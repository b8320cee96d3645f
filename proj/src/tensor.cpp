#include "glp/tensor.hpp"

#include <cassert>
#include <cmath>
#include <cstring>

#include "glp/kernels.hpp"

namespace glp {

Tensor Tensor::randn(int r, int c, double stddev, std::mt19937_64& gen) {
  Tensor t(r, c);
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& v : t.data) v = dist(gen);
  return t;
}

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

std::string Tensor::shape_str() const {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

void matmul_nn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate) {
  assert(a.cols == b.rows);
  if (!accumulate) {
    c.rows = a.rows;
    c.cols = b.cols;
    c.data.assign(static_cast<std::size_t>(a.rows) * b.cols, 0.0);
  }
  for (int i = 0; i < a.rows; ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int p = 0; p < a.cols; ++p) {
      double aip = ai[p];
      if (aip != 0.0) kernels::axpy(aip, b.row(p), ci, static_cast<std::size_t>(b.cols));
    }
  }
}

void matmul_nt(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate) {
  assert(a.cols == b.cols);
  if (!accumulate) {
    c.rows = a.rows;
    c.cols = b.rows;
    c.data.assign(static_cast<std::size_t>(a.rows) * b.rows, 0.0);
  }
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    double* ci = c.row(i);
    for (int j = 0; j < b.rows; ++j)
      ci[j] += kernels::dot(ai, b.row(j), static_cast<std::size_t>(a.cols));
  }
}

void matmul_tn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate) {
  assert(a.rows == b.rows);
  if (!accumulate) {
    c.rows = a.cols;
    c.cols = b.cols;
    c.data.assign(static_cast<std::size_t>(a.cols) * b.cols, 0.0);
  }
  for (int i = 0; i < a.rows; ++i) {
    const double* ai = a.row(i);
    const double* bi = b.row(i);
    for (int p = 0; p < a.cols; ++p) {
      double aip = ai[p];
      if (aip != 0.0) kernels::axpy(aip, bi, c.row(p), static_cast<std::size_t>(b.cols));
    }
  }
}

}  // namespace glp
