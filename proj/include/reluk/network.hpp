#pragma once

// Shallow and deep ReLU^k networks with exact parameters.
//
//   h_0 = x,  h_i = sigma_k(A_i h_{i-1} + b_i),  output = c . h_L
//
// A shallow network is the L = 1 case. Each parameter array records which
// positions are free; everything else is fixed to zero by the architecture.
// Free positions may hold the value 0 (a bias the construction happens to
// leave at zero is still a parameter of the sparse architecture).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "reluk/linear_algebra.hpp"

namespace reluk {

/// sigma_k(t) = t^k for t >= 0, else 0; sigma_k(0) = 0 for k >= 1.
inline Rational relu_k(const Rational& t, int k) { return t.sign() > 0 ? t.pow(k) : Rational(0); }

inline double relu_k(double t, int k) {
  if (!(t > 0.0)) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= t;
  return r;
}

/// Row-wise sparse matrix; stored entries are the free positions.
class SparseMatrix {
 public:
  using Entry = std::pair<std::size_t, Rational>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  /// Stores the nonzero entries of a dense matrix.
  static SparseMatrix from_dense(const ExactMatrix& m) {
    SparseMatrix s(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (!m(r, c).is_zero()) s.rows_[r].emplace_back(c, m(r, c));
    return s;
  }

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  /// Marks (r, c) free and assigns it. Entries within a row stay sorted.
  void set(std::size_t r, std::size_t c, Rational v) {
    if (r >= rows_.size() || c >= cols_) throw ShapeError("sparse index out of range");
    auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, std::size_t col) { return e.first < col; });
    if (it != row.end() && it->first == c)
      it->second = std::move(v);
    else
      row.emplace(it, c, std::move(v));
  }

  Rational at(std::size_t r, std::size_t c) const {
    for (const auto& [col, v] : rows_.at(r))
      if (col == c) return v;
    return Rational(0);
  }

  std::span<const Entry> row(std::size_t r) const { return rows_[r]; }
  std::span<Entry> row(std::size_t r) { return rows_[r]; }

  std::size_t free_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }

  std::size_t nonzero_count() const {
    std::size_t n = 0;
    for (const auto& r : rows_)
      for (const auto& [c, v] : r) n += !v.is_zero();
    return n;
  }

  ExactMatrix to_dense() const {
    ExactMatrix m(rows(), cols_);
    for (std::size_t r = 0; r < rows(); ++r)
      for (const auto& [c, v] : rows_[r]) m(r, c) = v;
    return m;
  }

  Rational max_abs() const {
    Rational m;
    for (const auto& r : rows_)
      for (const auto& [c, v] : r)
        if (v.abs() > m) m = v.abs();
    return m;
  }

  /// Value equality; the free pattern is not compared.
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows() != b.rows() || a.cols_ != b.cols_) return false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      auto nz = [](std::span<const Entry> row) {
        std::vector<Entry> out;
        for (const auto& e : row)
          if (!e.second.is_zero()) out.push_back(e);
        return out;
      };
      if (nz(a.row(r)) != nz(b.row(r))) return false;
    }
    return true;
  }

 private:
  std::size_t cols_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

/// Vector with a free-position mask (see the file comment).
struct ParamVector {
  ExactVector values;
  std::vector<bool> free;

  ParamVector() = default;
  explicit ParamVector(std::size_t n) : values(n), free(n, false) {}
  /// Free positions are the nonzero values.
  explicit ParamVector(ExactVector v) : values(std::move(v)), free(values.size()) {
    for (std::size_t i = 0; i < values.size(); ++i) free[i] = !values[i].is_zero();
  }

  std::size_t size() const noexcept { return values.size(); }
  void set(std::size_t i, Rational v) {
    values.at(i) = std::move(v);
    free[i] = true;
  }
  const Rational& operator[](std::size_t i) const { return values[i]; }

  std::size_t free_count() const { return static_cast<std::size_t>(std::count(free.begin(), free.end(), true)); }
  std::size_t nonzero_count() const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [](const Rational& v) { return !v.is_zero(); }));
  }
  Rational max_abs() const {
    Rational m;
    for (const auto& v : values)
      if (v.abs() > m) m = v.abs();
    return m;
  }

  friend bool operator==(const ParamVector& a, const ParamVector& b) { return a.values == b.values; }
};

struct Layer {
  SparseMatrix weights;  // n_i x n_{i-1}
  ParamVector bias;      // n_i

  Layer() = default;
  Layer(std::size_t out, std::size_t in) : weights(out, in), bias(out) {}
  Layer(SparseMatrix w, ParamVector b) : weights(std::move(w)), bias(std::move(b)) {
    if (weights.rows() != bias.size()) throw ShapeError("bias length does not match weight rows");
  }

  std::size_t width() const noexcept { return weights.rows(); }
  friend bool operator==(const Layer&, const Layer&) = default;
};

enum class NetworkKind { shallow, deep };

struct DeclaredBounds {
  Rational B;
  Rational M;
  friend bool operator==(const DeclaredBounds&, const DeclaredBounds&) = default;
};

class Network {
 public:
  Network(NetworkKind kind, int k, std::size_t input_dim, std::vector<Layer> layers, ParamVector output,
          std::optional<DeclaredBounds> declared = std::nullopt)
      : kind_(kind), k_(k), input_dim_(input_dim), layers_(std::move(layers)), output_(std::move(output)),
        declared_(std::move(declared)) {
    if (k_ < 1) throw DomainError("activation exponent must be >= 1");
    if (input_dim_ < 1) throw ShapeError("input dimension must be >= 1");
    if (layers_.empty()) throw ShapeError("network needs at least one layer");
    if (kind_ == NetworkKind::shallow && layers_.size() != 1)
      throw ShapeError("a shallow network has exactly one layer");
    std::size_t prev = input_dim_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (layers_[i].weights.cols() != prev)
        throw ShapeError("layer " + std::to_string(i) + " expects " + std::to_string(layers_[i].weights.cols()) +
                         " inputs but previous width is " + std::to_string(prev));
      if (layers_[i].bias.size() != layers_[i].width())
        throw ShapeError("layer " + std::to_string(i) + " bias length mismatch");
      prev = layers_[i].width();
    }
    if (output_.size() != prev) throw ShapeError("output vector length does not match last width");
  }

  NetworkKind kind() const noexcept { return kind_; }
  bool is_shallow() const noexcept { return kind_ == NetworkKind::shallow; }
  int k() const noexcept { return k_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t depth() const noexcept { return layers_.size(); }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }
  const ParamVector& output() const noexcept { return output_; }
  ParamVector& output() noexcept { return output_; }
  const std::optional<DeclaredBounds>& declared_bounds() const noexcept { return declared_; }
  void set_declared_bounds(std::optional<DeclaredBounds> b) { declared_ = std::move(b); }

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w;
    for (const auto& l : layers_) w.push_back(l.width());
    return w;
  }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  NetworkKind kind_;
  int k_;
  std::size_t input_dim_;
  std::vector<Layer> layers_;
  ParamVector output_;
  std::optional<DeclaredBounds> declared_;
};

// ---------------------------------------------------------------------------
// Evaluation

/// Hidden activations of every layer (exact).
inline std::vector<ExactVector> forward_trace(const Network& net, const ExactVector& x) {
  if (x.size() != net.input_dim())
    throw ShapeError("point has dimension " + std::to_string(x.size()) + ", network expects " +
                     std::to_string(net.input_dim()));
  std::vector<ExactVector> trace;
  const ExactVector* h = &x;
  for (const auto& layer : net.layers()) {
    ExactVector next(layer.width());
    for (std::size_t r = 0; r < layer.width(); ++r) {
      Rational z = layer.bias[r];
      for (const auto& [c, w] : layer.weights.row(r))
        if (!w.is_zero() && !(*h)[c].is_zero()) z += w * (*h)[c];
      next[r] = relu_k(z, net.k());
    }
    trace.push_back(std::move(next));
    h = &trace.back();
  }
  return trace;
}

inline Rational evaluate_exact(const Network& net, const ExactVector& x) {
  auto trace = forward_trace(net, x);
  const ExactVector& h = trace.back();
  Rational out;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!net.output()[i].is_zero() && !h[i].is_zero()) out += net.output()[i] * h[i];
  return out;
}

/// Double-precision copy of a network for repeated float evaluation.
class FloatNetwork {
 public:
  explicit FloatNetwork(const Network& net) : k_(net.k()), input_dim_(net.input_dim()) {
    for (const auto& layer : net.layers()) {
      FloatLayer fl;
      fl.rows.resize(layer.width());
      fl.bias.resize(layer.width());
      for (std::size_t r = 0; r < layer.width(); ++r) {
        fl.bias[r] = layer.bias[r].to_double();
        for (const auto& [c, w] : layer.weights.row(r))
          if (!w.is_zero()) fl.rows[r].emplace_back(c, w.to_double());
      }
      layers_.push_back(std::move(fl));
    }
    for (const auto& v : net.output().values) output_.push_back(v.to_double());
  }

  double operator()(std::span<const double> x) const {
    if (x.size() != input_dim_) throw ShapeError("point has wrong dimension");
    std::vector<double> h(x.begin(), x.end()), next;
    for (const auto& layer : layers_) {
      next.assign(layer.rows.size(), 0.0);
      for (std::size_t r = 0; r < layer.rows.size(); ++r) {
        double z = layer.bias[r];
        for (const auto& [c, w] : layer.rows[r]) z += w * h[c];
        next[r] = relu_k(z, k_);
      }
      h.swap(next);
    }
    double out = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) out += output_[i] * h[i];
    return out;
  }

 private:
  struct FloatLayer {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::vector<double> bias;
  };
  int k_;
  std::size_t input_dim_;
  std::vector<FloatLayer> layers_;
  std::vector<double> output_;
};

inline double evaluate_float(const Network& net, std::span<const double> x) { return FloatNetwork(net)(x); }

// ---------------------------------------------------------------------------
// Parameter accounting and bounds

struct ParameterCount {
  /// n_L + sum_i n_i (n_{i-1} + 1): every entry of a fully connected net.
  std::size_t dense = 0;
  /// Parameters not fixed to zero by the sparse architecture.
  std::size_t nonzero = 0;
  /// Parameters whose current value is nonzero.
  std::size_t nonzero_values = 0;
};

inline ParameterCount count_parameters(const Network& net) {
  ParameterCount pc;
  std::size_t prev = net.input_dim();
  for (const auto& l : net.layers()) {
    pc.dense += l.width() * (prev + 1);
    pc.nonzero += l.weights.free_count() + l.bias.free_count();
    pc.nonzero_values += l.weights.nonzero_count() + l.bias.nonzero_count();
    prev = l.width();
  }
  pc.dense += prev;
  pc.nonzero += net.output().free_count();
  pc.nonzero_values += net.output().nonzero_count();
  return pc;
}

struct BoundsReport {
  Rational max_weight;  // max over ||A_i||_max and ||b_i||_inf
  Rational max_output;  // ||c||_inf
  Rational declared_B;
  Rational declared_M;
  std::size_t dense_count = 0;
  std::size_t nonzero_count = 0;
  bool pass = false;
};

/// Uses <= for both bounds.
inline BoundsReport check_bounds(const Network& net, const Rational& B, const Rational& M) {
  BoundsReport r;
  for (const auto& l : net.layers()) {
    Rational w = l.weights.max_abs();
    if (w > r.max_weight) r.max_weight = w;
    Rational b = l.bias.max_abs();
    if (b > r.max_weight) r.max_weight = b;
  }
  r.max_output = net.output().max_abs();
  r.declared_B = B;
  r.declared_M = M;
  auto pc = count_parameters(net);
  r.dense_count = pc.dense;
  r.nonzero_count = pc.nonzero;
  r.pass = r.max_weight <= B && r.max_output <= M;
  return r;
}

/// Drops hidden units that cannot reach the output: a last-layer unit is
/// live when its output weight is nonzero, an earlier unit when a live unit
/// reads it through a nonzero weight. The realized function is unchanged.
inline Network prune_dead_units(const Network& net) {
  const auto& layers = net.layers();
  const std::size_t L = layers.size();
  std::vector<std::vector<bool>> live(L);
  live[L - 1].resize(layers[L - 1].width());
  for (std::size_t r = 0; r < layers[L - 1].width(); ++r) live[L - 1][r] = !net.output()[r].is_zero();
  for (std::size_t i = L - 1; i-- > 0;) {
    live[i].assign(layers[i].width(), false);
    for (std::size_t r = 0; r < layers[i + 1].width(); ++r) {
      if (!live[i + 1][r]) continue;
      for (const auto& [c, w] : layers[i + 1].weights.row(r))
        if (!w.is_zero()) live[i][c] = true;
    }
  }
  std::vector<std::vector<std::size_t>> new_index(L);
  for (std::size_t i = 0; i < L; ++i) {
    new_index[i].assign(live[i].size(), SIZE_MAX);
    std::size_t next = 0;
    for (std::size_t r = 0; r < live[i].size(); ++r)
      if (live[i][r]) new_index[i][r] = next++;
  }
  std::vector<Layer> out_layers;
  std::size_t prev_width = net.input_dim();
  for (std::size_t i = 0; i < L; ++i) {
    std::size_t width = static_cast<std::size_t>(std::count(live[i].begin(), live[i].end(), true));
    Layer nl(width, prev_width);
    for (std::size_t r = 0; r < layers[i].width(); ++r) {
      if (!live[i][r]) continue;
      std::size_t nr = new_index[i][r];
      for (const auto& [c, w] : layers[i].weights.row(r)) {
        std::size_t nc = i == 0 ? c : new_index[i - 1][c];
        if (nc != SIZE_MAX) nl.weights.set(nr, nc, w);
      }
      nl.bias.values[nr] = layers[i].bias.values[r];
      nl.bias.free[nr] = layers[i].bias.free[r];
    }
    out_layers.push_back(std::move(nl));
    prev_width = width;
  }
  ParamVector out(prev_width);
  for (std::size_t r = 0; r < live[L - 1].size(); ++r)
    if (live[L - 1][r]) {
      out.values[new_index[L - 1][r]] = net.output()[r];
      out.free[new_index[L - 1][r]] = net.output().free[r];
    }
  return Network(net.kind(), net.k(), net.input_dim(), std::move(out_layers), std::move(out), net.declared_bounds());
}

}  // namespace reluk
