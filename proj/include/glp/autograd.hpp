#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "glp/tensor.hpp"

namespace glp {

// One node of the reverse-mode graph. Nodes live on a Tape and are addressed
// by raw pointer; the tape's creation order doubles as the topological order.
struct Node {
  Tensor value;
  Tensor grad;
  bool grad_ready = false;
  bool requires_grad = true;
  std::string name;
  std::function<void()> backprop;

  void ensure_grad() {
    if (!grad_ready) {
      grad = Tensor::zeros(value.rows, value.cols);
      grad_ready = true;
    }
  }
};

using Value = Node*;

// Tape-based reverse-mode differentiation over Tensor ops. A tape is built
// per forward pass and discarded after backward().
class Tape {
 public:
  // Leaves are memoized by name so a parameter used in several places is one
  // node and its gradients accumulate.
  Value leaf(const std::string& name, const Tensor& v);
  Value constant(const Tensor& v, const std::string& name = "const");
  Value constant_scalar(double v);

  Value add(Value a, Value b);
  Value add_rowvec(Value a, Value row);  // row broadcast over a's rows
  Value sub(Value a, Value b);
  Value hadamard(Value a, Value b);
  Value scale(Value a, double s);
  Value shift(Value a, double s);
  Value matmul(Value a, Value b);
  Value matmul_transposed(Value a, Value b);  // A * B^T
  Value softmax_rows(Value a);
  Value layer_norm(Value x, Value gain, Value bias);  // row-wise, eps 1e-5
  Value gelu(Value a);                                // tanh approximation
  Value relu(Value a);
  Value sqrt_elem(Value a);  // d/dx at 0 treated as 0
  Value lookup_rows(Value table, std::vector<int> ids);
  // Row i = sum of table rows listed in id_lists[i].
  Value sum_embeddings(Value table, std::vector<std::vector<int>> id_lists);
  Value slice_cols(Value a, int start, int count);
  Value concat_cols(const std::vector<Value>& parts);
  Value mean_rows(Value a);  // 1 x cols
  Value sum_all(Value a);    // 1 x 1
  Value reshape(Value a, int rows, int cols);

  // Mean over `positions` of -log softmax(logits_row)[target]; positions
  // must be non-empty.
  Value masked_cross_entropy(Value logits, std::vector<int> targets, std::vector<int> positions);
  // Mean elementwise stable BCE; logits and labels are flat n x 1.
  Value binary_cross_entropy_with_logits(Value logits, std::vector<double> labels);

  // Negated Gaussian density features over pair distances: output[p][k] =
  //   -(1/(sqrt(2*pi)*s_k)) * exp(-((scale[t_p]*d_p + shift[t_p] - c_k)/s_k)^2 / 2)
  // with s_k = max(|widths_k|, width_floor). Differentiable in centers,
  // widths, pair_scale, pair_shift; distances are data.
  Value gaussian_basis(Value centers, Value widths, Value pair_scale, Value pair_shift,
                       std::vector<double> distances, std::vector<int> pair_types,
                       double width_floor);

  // Row p = e_i ++ e_j ++ (e_i * e_j) for pairs[p] = (i, j).
  Value pair_features(Value e, std::vector<std::pair<int, int>> pairs);

  void backward(Value loss);

  // When on, every op validates its output and throws DataError naming the
  // op on the first non-finite intermediate.
  void set_finite_checks(bool on) { finite_checks_ = on; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  Value make(Tensor value, std::string name);
  void check_finite(Value v);

  std::vector<std::unique_ptr<Node>> nodes_;
  std::unordered_map<std::string, Value> leaves_;
  bool finite_checks_ = false;
};

// Scalar GELU (tanh form) and its derivative; shared by the op and by
// forward-only evaluation paths.
double gelu_scalar(double x);
double gelu_grad_scalar(double x);

}  // namespace glp
