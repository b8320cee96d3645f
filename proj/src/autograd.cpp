#include "glp/autograd.hpp"

#include <cassert>
#include <cmath>

#include "glp/errors.hpp"
#include "glp/kernels.hpp"

namespace glp {

namespace {
constexpr double kLayerNormEps = 1e-5;
constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)
constexpr double kGeluC = 0.7978845608028654;       // sqrt(2/pi)
}  // namespace

double gelu_scalar(double x) {
  double u = kGeluC * (x + 0.044715 * x * x * x);
  return 0.5 * x * (1.0 + std::tanh(u));
}

double gelu_grad_scalar(double x) {
  double u = kGeluC * (x + 0.044715 * x * x * x);
  double t = std::tanh(u);
  double du = kGeluC * (1.0 + 3.0 * 0.044715 * x * x);
  return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
}

Value Tape::make(Tensor value, std::string name) {
  nodes_.push_back(std::make_unique<Node>());
  Node* n = nodes_.back().get();
  n->value = std::move(value);
  n->name = std::move(name);
  if (finite_checks_) check_finite(n);
  return n;
}

void Tape::check_finite(Value v) {
  if (!v->value.all_finite())
    throw DataError("non-finite intermediate in '" + v->name + "' (" + v->value.shape_str() + ")");
}

Value Tape::leaf(const std::string& name, const Tensor& v) {
  auto it = leaves_.find(name);
  if (it != leaves_.end()) {
    assert(it->second->value.same_shape(v));
    return it->second;
  }
  Value n = make(v, name);
  leaves_[name] = n;
  return n;
}

Value Tape::constant(const Tensor& v, const std::string& name) {
  Value n = make(v, name);
  n->requires_grad = false;
  return n;
}

Value Tape::constant_scalar(double v) {
  Tensor t(1, 1);
  t.data[0] = v;
  return constant(t, "scalar");
}

namespace {

// g flows into parent p (same shape).
void accumulate(Node* p, const Tensor& g) {
  if (!p->requires_grad) return;
  p->ensure_grad();
  kernels::add(p->grad.data.data(), g.data.data(), p->grad.data.data(), g.size());
}

}  // namespace

Value Tape::add(Value a, Value b) {
  assert(a->value.same_shape(b->value));
  Tensor out(a->value.rows, a->value.cols);
  kernels::add(a->value.data.data(), b->value.data.data(), out.data.data(), out.size());
  Value n = make(std::move(out), "add");
  n->backprop = [n, a, b] {
    accumulate(a, n->grad);
    accumulate(b, n->grad);
  };
  return n;
}

Value Tape::add_rowvec(Value a, Value row) {
  assert(row->value.rows == 1 && row->value.cols == a->value.cols);
  Tensor out = a->value;
  for (int r = 0; r < out.rows; ++r)
    kernels::add(out.row(r), row->value.data.data(), out.row(r), out.cols);
  Value n = make(std::move(out), "add_rowvec");
  n->backprop = [n, a, row] {
    accumulate(a, n->grad);
    if (row->requires_grad) {
      row->ensure_grad();
      for (int r = 0; r < n->grad.rows; ++r)
        kernels::add(row->grad.data.data(), n->grad.row(r), row->grad.data.data(), n->grad.cols);
    }
  };
  return n;
}

Value Tape::sub(Value a, Value b) {
  assert(a->value.same_shape(b->value));
  Tensor out(a->value.rows, a->value.cols);
  kernels::sub(a->value.data.data(), b->value.data.data(), out.data.data(), out.size());
  Value n = make(std::move(out), "sub");
  n->backprop = [n, a, b] {
    accumulate(a, n->grad);
    if (b->requires_grad) {
      b->ensure_grad();
      kernels::axpy(-1.0, n->grad.data.data(), b->grad.data.data(), n->grad.size());
    }
  };
  return n;
}

Value Tape::hadamard(Value a, Value b) {
  assert(a->value.same_shape(b->value));
  Tensor out(a->value.rows, a->value.cols);
  kernels::mul(a->value.data.data(), b->value.data.data(), out.data.data(), out.size());
  Value n = make(std::move(out), "hadamard");
  n->backprop = [n, a, b] {
    if (a->requires_grad) {
      a->ensure_grad();
      for (std::size_t i = 0; i < n->grad.size(); ++i)
        a->grad.data[i] += n->grad.data[i] * b->value.data[i];
    }
    if (b->requires_grad) {
      b->ensure_grad();
      for (std::size_t i = 0; i < n->grad.size(); ++i)
        b->grad.data[i] += n->grad.data[i] * a->value.data[i];
    }
  };
  return n;
}

Value Tape::scale(Value a, double s) {
  Tensor out = a->value;
  kernels::scale(out.data.data(), s, out.size());
  Value n = make(std::move(out), "scale");
  n->backprop = [n, a, s] {
    if (a->requires_grad) {
      a->ensure_grad();
      kernels::axpy(s, n->grad.data.data(), a->grad.data.data(), n->grad.size());
    }
  };
  return n;
}

Value Tape::shift(Value a, double s) {
  Tensor out = a->value;
  for (double& v : out.data) v += s;
  Value n = make(std::move(out), "shift");
  n->backprop = [n, a] { accumulate(a, n->grad); };
  return n;
}

Value Tape::matmul(Value a, Value b) {
  assert(a->value.cols == b->value.rows);
  Tensor out;
  matmul_nn(a->value, b->value, out);
  Value n = make(std::move(out), "matmul");
  n->backprop = [n, a, b] {
    if (a->requires_grad) {
      a->ensure_grad();
      matmul_nt(n->grad, b->value, a->grad, /*accumulate=*/true);
    }
    if (b->requires_grad) {
      b->ensure_grad();
      matmul_tn(a->value, n->grad, b->grad, /*accumulate=*/true);
    }
  };
  return n;
}

Value Tape::matmul_transposed(Value a, Value b) {
  assert(a->value.cols == b->value.cols);
  Tensor out;
  matmul_nt(a->value, b->value, out);
  Value n = make(std::move(out), "matmul_nt");
  n->backprop = [n, a, b] {
    if (a->requires_grad) {
      a->ensure_grad();
      matmul_nn(n->grad, b->value, a->grad, /*accumulate=*/true);
    }
    if (b->requires_grad) {
      b->ensure_grad();
      matmul_tn(n->grad, a->value, b->grad, /*accumulate=*/true);
    }
  };
  return n;
}

Value Tape::softmax_rows(Value a) {
  Tensor out = a->value;
  for (int r = 0; r < out.rows; ++r) {
    double* row = out.row(r);
    double m = kernels::max(row, out.cols);
    double z = 0.0;
    for (int c = 0; c < out.cols; ++c) {
      row[c] = std::exp(row[c] - m);
      z += row[c];
    }
    kernels::scale(row, 1.0 / z, out.cols);
  }
  Value n = make(std::move(out), "softmax");
  n->backprop = [n, a] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (int r = 0; r < n->value.rows; ++r) {
      const double* p = n->value.row(r);
      const double* g = n->grad.row(r);
      double gp = kernels::dot(g, p, n->value.cols);
      double* da = a->grad.row(r);
      for (int c = 0; c < n->value.cols; ++c) da[c] += p[c] * (g[c] - gp);
    }
  };
  return n;
}

Value Tape::layer_norm(Value x, Value gain, Value bias) {
  const int rows = x->value.rows, cols = x->value.cols;
  assert(gain->value.rows == 1 && gain->value.cols == cols);
  assert(bias->value.rows == 1 && bias->value.cols == cols);
  Tensor out(rows, cols);
  Tensor xhat(rows, cols);
  std::vector<double> inv_std(rows);
  for (int r = 0; r < rows; ++r) {
    const double* xr = x->value.row(r);
    double mean = kernels::sum(xr, cols) / cols;
    double var = 0.0;
    for (int c = 0; c < cols; ++c) {
      double d = xr[c] - mean;
      var += d * d;
    }
    var /= cols;
    double s = 1.0 / std::sqrt(var + kLayerNormEps);
    inv_std[r] = s;
    double* xh = xhat.row(r);
    double* o = out.row(r);
    for (int c = 0; c < cols; ++c) {
      xh[c] = (xr[c] - mean) * s;
      o[c] = xh[c] * gain->value.data[c] + bias->value.data[c];
    }
  }
  Value n = make(std::move(out), "layer_norm");
  n->backprop = [n, x, gain, bias, xhat = std::move(xhat), inv_std = std::move(inv_std)] {
    const int rows = n->value.rows, cols = n->value.cols;
    if (gain->requires_grad) gain->ensure_grad();
    if (bias->requires_grad) bias->ensure_grad();
    if (x->requires_grad) x->ensure_grad();
    std::vector<double> h(cols);
    for (int r = 0; r < rows; ++r) {
      const double* g = n->grad.row(r);
      const double* xh = xhat.row(r);
      if (gain->requires_grad)
        for (int c = 0; c < cols; ++c) gain->grad.data[c] += g[c] * xh[c];
      if (bias->requires_grad) kernels::add(bias->grad.data.data(), g, bias->grad.data.data(), cols);
      if (!x->requires_grad) continue;
      for (int c = 0; c < cols; ++c) h[c] = g[c] * gain->value.data[c];
      double mean_h = kernels::sum(h.data(), cols) / cols;
      double mean_hx = kernels::dot(h.data(), xh, cols) / cols;
      double* dx = x->grad.row(r);
      double s = inv_std[r];
      for (int c = 0; c < cols; ++c) dx[c] += s * (h[c] - mean_h - xh[c] * mean_hx);
    }
  };
  return n;
}

Value Tape::gelu(Value a) {
  Tensor out = a->value;
  for (double& v : out.data) v = gelu_scalar(v);
  Value n = make(std::move(out), "gelu");
  n->backprop = [n, a] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (std::size_t i = 0; i < n->grad.size(); ++i)
      a->grad.data[i] += n->grad.data[i] * gelu_grad_scalar(a->value.data[i]);
  };
  return n;
}

Value Tape::relu(Value a) {
  Tensor out = a->value;
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  Value n = make(std::move(out), "relu");
  n->backprop = [n, a] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (std::size_t i = 0; i < n->grad.size(); ++i)
      if (a->value.data[i] > 0.0) a->grad.data[i] += n->grad.data[i];
  };
  return n;
}

Value Tape::sqrt_elem(Value a) {
  Tensor out = a->value;
  for (double& v : out.data) v = std::sqrt(std::max(v, 0.0));
  Value n = make(std::move(out), "sqrt");
  n->backprop = [n, a] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (std::size_t i = 0; i < n->grad.size(); ++i) {
      double y = n->value.data[i];
      if (y > 0.0) a->grad.data[i] += n->grad.data[i] * 0.5 / y;
    }
  };
  return n;
}

Value Tape::lookup_rows(Value table, std::vector<int> ids) {
  const int cols = table->value.cols;
  Tensor out(static_cast<int>(ids.size()), cols);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    assert(ids[i] >= 0 && ids[i] < table->value.rows);
    std::copy_n(table->value.row(ids[i]), cols, out.row(static_cast<int>(i)));
  }
  Value n = make(std::move(out), "lookup_rows");
  n->backprop = [n, table, ids = std::move(ids)] {
    if (!table->requires_grad) return;
    table->ensure_grad();
    for (std::size_t i = 0; i < ids.size(); ++i)
      kernels::add(table->grad.row(ids[i]), n->grad.row(static_cast<int>(i)),
                   table->grad.row(ids[i]), n->grad.cols);
  };
  return n;
}

Value Tape::sum_embeddings(Value table, std::vector<std::vector<int>> id_lists) {
  const int cols = table->value.cols;
  Tensor out(static_cast<int>(id_lists.size()), cols);
  for (std::size_t i = 0; i < id_lists.size(); ++i) {
    double* o = out.row(static_cast<int>(i));
    for (int id : id_lists[i]) {
      assert(id >= 0 && id < table->value.rows);
      kernels::add(o, table->value.row(id), o, cols);
    }
  }
  Value n = make(std::move(out), "sum_embeddings");
  n->backprop = [n, table, id_lists = std::move(id_lists)] {
    if (!table->requires_grad) return;
    table->ensure_grad();
    for (std::size_t i = 0; i < id_lists.size(); ++i) {
      const double* g = n->grad.row(static_cast<int>(i));
      for (int id : id_lists[i])
        kernels::add(table->grad.row(id), g, table->grad.row(id), n->grad.cols);
    }
  };
  return n;
}

Value Tape::slice_cols(Value a, int start, int count) {
  assert(start >= 0 && start + count <= a->value.cols);
  Tensor out(a->value.rows, count);
  for (int r = 0; r < out.rows; ++r)
    std::copy_n(a->value.row(r) + start, count, out.row(r));
  Value n = make(std::move(out), "slice_cols");
  n->backprop = [n, a, start, count] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (int r = 0; r < n->grad.rows; ++r)
      kernels::add(a->grad.row(r) + start, n->grad.row(r), a->grad.row(r) + start, count);
  };
  return n;
}

Value Tape::concat_cols(const std::vector<Value>& parts) {
  assert(!parts.empty());
  int rows = parts[0]->value.rows;
  int cols = 0;
  for (Value p : parts) {
    assert(p->value.rows == rows);
    cols += p->value.cols;
  }
  Tensor out(rows, cols);
  int offset = 0;
  for (Value p : parts) {
    for (int r = 0; r < rows; ++r)
      std::copy_n(p->value.row(r), p->value.cols, out.row(r) + offset);
    offset += p->value.cols;
  }
  Value n = make(std::move(out), "concat_cols");
  std::vector<Value> ps = parts;
  n->backprop = [n, ps = std::move(ps)] {
    int offset = 0;
    for (Value p : ps) {
      if (p->requires_grad) {
        p->ensure_grad();
        for (int r = 0; r < n->grad.rows; ++r)
          kernels::add(p->grad.row(r), n->grad.row(r) + offset, p->grad.row(r), p->value.cols);
      }
      offset += p->value.cols;
    }
  };
  return n;
}

Value Tape::mean_rows(Value a) {
  const int rows = a->value.rows, cols = a->value.cols;
  Tensor out(1, cols);
  for (int r = 0; r < rows; ++r)
    kernels::add(out.data.data(), a->value.row(r), out.data.data(), cols);
  kernels::scale(out.data.data(), 1.0 / rows, cols);
  Value n = make(std::move(out), "mean_rows");
  n->backprop = [n, a, rows] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    for (int r = 0; r < rows; ++r)
      kernels::axpy(1.0 / rows, n->grad.data.data(), a->grad.row(r), n->grad.cols);
  };
  return n;
}

Value Tape::sum_all(Value a) {
  Tensor out(1, 1);
  out.data[0] = kernels::sum(a->value.data.data(), a->value.size());
  Value n = make(std::move(out), "sum_all");
  n->backprop = [n, a] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    double g = n->grad.data[0];
    for (double& v : a->grad.data) v += g;
  };
  return n;
}

Value Tape::reshape(Value a, int rows, int cols) {
  assert(static_cast<std::size_t>(rows) * cols == a->value.size());
  Tensor out(rows, cols, a->value.data);
  Value n = make(std::move(out), "reshape");
  n->backprop = [n, a] {
    if (!a->requires_grad) return;
    a->ensure_grad();
    kernels::add(a->grad.data.data(), n->grad.data.data(), a->grad.data.data(), n->grad.size());
  };
  return n;
}

Value Tape::masked_cross_entropy(Value logits, std::vector<int> targets,
                                 std::vector<int> positions) {
  if (positions.empty()) throw DataError("masked_cross_entropy: empty mask");
  const int cols = logits->value.cols;
  double loss = 0.0;
  for (int pos : positions) {
    assert(pos >= 0 && pos < logits->value.rows);
    const double* row = logits->value.row(pos);
    int t = targets[pos];
    assert(t >= 0 && t < cols);
    double m = kernels::max(row, cols);
    double z = 0.0;
    for (int c = 0; c < cols; ++c) z += std::exp(row[c] - m);
    loss += std::log(z) + m - row[t];
  }
  Tensor out(1, 1);
  out.data[0] = loss / positions.size();
  Value n = make(std::move(out), "masked_cross_entropy");
  n->backprop = [n, logits, targets = std::move(targets), positions = std::move(positions)] {
    if (!logits->requires_grad) return;
    logits->ensure_grad();
    const int cols = logits->value.cols;
    const double g = n->grad.data[0] / positions.size();
    for (int pos : positions) {
      const double* row = logits->value.row(pos);
      double* drow = logits->grad.row(pos);
      double m = kernels::max(row, cols);
      double z = 0.0;
      for (int c = 0; c < cols; ++c) z += std::exp(row[c] - m);
      for (int c = 0; c < cols; ++c) drow[c] += g * std::exp(row[c] - m) / z;
      drow[targets[pos]] -= g;
    }
  };
  return n;
}

Value Tape::binary_cross_entropy_with_logits(Value logits, std::vector<double> labels) {
  assert(logits->value.size() == labels.size());
  if (labels.empty()) throw DataError("binary_cross_entropy_with_logits: no elements");
  double loss = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double x = logits->value.data[i];
    loss += std::max(x, 0.0) - x * labels[i] + std::log1p(std::exp(-std::abs(x)));
  }
  Tensor out(1, 1);
  out.data[0] = loss / labels.size();
  Value n = make(std::move(out), "bce_with_logits");
  n->backprop = [n, logits, labels = std::move(labels)] {
    if (!logits->requires_grad) return;
    logits->ensure_grad();
    const double g = n->grad.data[0] / labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      double x = logits->value.data[i];
      double sig = 1.0 / (1.0 + std::exp(-x));
      logits->grad.data[i] += g * (sig - labels[i]);
    }
  };
  return n;
}

Value Tape::gaussian_basis(Value centers, Value widths, Value pair_scale, Value pair_shift,
                           std::vector<double> distances, std::vector<int> pair_types,
                           double width_floor) {
  assert(centers->value.rows == 1 && widths->value.rows == 1);
  assert(centers->value.cols == widths->value.cols);
  assert(distances.size() == pair_types.size());
  const int num_kernels = centers->value.cols;
  const int num_pairs = static_cast<int>(distances.size());

  Tensor out(num_pairs, num_kernels);
  for (int p = 0; p < num_pairs; ++p) {
    int tp = pair_types[p];
    double x = pair_scale->value.data[tp] * distances[p] + pair_shift->value.data[tp];
    double* o = out.row(p);
    for (int k = 0; k < num_kernels; ++k) {
      double s = std::max(std::abs(widths->value.data[k]), width_floor);
      double t = (x - centers->value.data[k]) / s;
      o[k] = -(kInvSqrt2Pi / s) * std::exp(-0.5 * t * t);
    }
  }
  Value n = make(std::move(out), "gaussian_basis");
  n->backprop = [n, centers, widths, pair_scale, pair_shift, distances = std::move(distances),
                 pair_types = std::move(pair_types), width_floor] {
    const int num_kernels = centers->value.cols;
    const int num_pairs = static_cast<int>(distances.size());
    if (centers->requires_grad) centers->ensure_grad();
    if (widths->requires_grad) widths->ensure_grad();
    if (pair_scale->requires_grad) pair_scale->ensure_grad();
    if (pair_shift->requires_grad) pair_shift->ensure_grad();
    for (int p = 0; p < num_pairs; ++p) {
      int tp = pair_types[p];
      double d = distances[p];
      double x = pair_scale->value.data[tp] * d + pair_shift->value.data[tp];
      const double* g = n->grad.row(p);
      for (int k = 0; k < num_kernels; ++k) {
        if (g[k] == 0.0) continue;
        double sigma = widths->value.data[k];
        double s = std::max(std::abs(sigma), width_floor);
        double t = (x - centers->value.data[k]) / s;
        double e = std::exp(-0.5 * t * t);
        double a_over_s2 = kInvSqrt2Pi / (s * s);
        double dphi_dx = a_over_s2 * t * e;
        if (pair_scale->requires_grad) pair_scale->grad.data[tp] += g[k] * dphi_dx * d;
        if (pair_shift->requires_grad) pair_shift->grad.data[tp] += g[k] * dphi_dx;
        if (centers->requires_grad) centers->grad.data[k] -= g[k] * dphi_dx;
        if (widths->requires_grad && std::abs(sigma) > width_floor) {
          double dphi_ds = a_over_s2 * e * (1.0 - t * t);
          widths->grad.data[k] += g[k] * dphi_ds * (sigma >= 0 ? 1.0 : -1.0);
        }
      }
    }
  };
  return n;
}

Value Tape::pair_features(Value e, std::vector<std::pair<int, int>> pairs) {
  const int d = e->value.cols;
  Tensor out(static_cast<int>(pairs.size()), 3 * d);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    const double* ei = e->value.row(i);
    const double* ej = e->value.row(j);
    double* o = out.row(static_cast<int>(p));
    std::copy_n(ei, d, o);
    std::copy_n(ej, d, o + d);
    kernels::mul(ei, ej, o + 2 * d, d);
  }
  Value n = make(std::move(out), "pair_features");
  n->backprop = [n, e, pairs = std::move(pairs), d] {
    if (!e->requires_grad) return;
    e->ensure_grad();
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      auto [i, j] = pairs[p];
      const double* g = n->grad.row(static_cast<int>(p));
      const double* ei = e->value.row(i);
      const double* ej = e->value.row(j);
      double* di = e->grad.row(i);
      double* dj = e->grad.row(j);
      for (int c = 0; c < d; ++c) {
        di[c] += g[c] + g[2 * d + c] * ej[c];
        dj[c] += g[d + c] + g[2 * d + c] * ei[c];
      }
    }
  };
  return n;
}

void Tape::backward(Value loss) {
  assert(loss->value.rows == 1 && loss->value.cols == 1);
  loss->ensure_grad();
  loss->grad.data[0] = 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    Node* n = it->get();
    if (n->backprop && n->grad_ready) n->backprop();
  }
}

}  // namespace glp
