#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace glp {

// Dense row-major matrix of doubles. Row and column vectors are 1xN / Nx1.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
  Tensor(int r, int c, std::vector<double> d) : rows(r), cols(c), data(std::move(d)) {}

  static Tensor zeros(int r, int c) { return Tensor(r, c); }
  static Tensor full(int r, int c, double v) {
    Tensor t(r, c);
    std::fill(t.data.begin(), t.data.end(), v);
    return t;
  }
  static Tensor randn(int r, int c, double stddev, std::mt19937_64& gen);

  std::size_t size() const { return data.size(); }
  double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }

  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  bool all_finite() const;
  std::string shape_str() const;
};

// C (m x n) = A (m x k) * B (k x n); accumulate variants add into C.
void matmul_nn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate = false);
// C (m x n) = A (m x k) * B^T with B (n x k).
void matmul_nt(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate = false);
// C (k x n) = A^T * B with A (m x k), B (m x n).
void matmul_tn(const Tensor& a, const Tensor& b, Tensor& c, bool accumulate = false);

}  // namespace glp
