#pragma once

// Polynomial of degree <= k^L  ->  deep ReLU^k network of depth L.
//
// The shallow ReLU^{k^L} form P = sum c_j sigma_{k^L}(w_j . x + b_j) is built
// with unit weight bound, so w_j in [-1,1]^d and |b_j| <= 1. Layer 1 applies
// B (w_j, b_j); layers 2..L are B * I with zero bias. Since every hidden value
// is nonnegative, positive homogeneity gives
//   h_i = B^{k (k^i - 1)/(k - 1)} sigma_{k^i}(w . x + b),
// and the output weights undo the accumulated scale.

#include <vector>

#include "reluk/shallow_compile.hpp"

namespace reluk {

/// k^L; throws when the exponent would not fit in an int.
inline int int_power(int k, int L) {
  long long r = 1;
  for (int i = 0; i < L; ++i) {
    r *= k;
    if (r > (1LL << 30)) throw DomainError("k^L is too large");
  }
  return static_cast<int>(r);
}

/// Exponent of B in the hidden scale after layer i: k (k^i - 1) / (k - 1).
inline long hidden_scale_exponent(int k, int i) {
  long e = 0, p = 1;
  for (int t = 0; t < i; ++t) {
    p *= k;
    e += p;
  }
  return e;  // k + k^2 + ... + k^i
}

inline Network compile_deep(const Polynomial& p, int k, int L, const Rational& B, bool prune = false) {
  if (k < 2) throw DomainError("polynomial compilation requires k >= 2");
  if (L < 1) throw DomainError("depth L must be >= 1");
  if (B.sign() <= 0) throw DomainError("weight bound B must be positive");
  const int K = int_power(k, L);
  if (!p.is_zero() && p.degree() > K)
    throw DegreeExceedsBudget("degree exceeds k^L: deg P = " + std::to_string(p.degree()) +
                              " > " + std::to_string(K));
  Network shallow = compile_shallow(p, K, Rational(1));
  const Layer& s = shallow.layers().front();
  const std::size_t width = s.width();
  const std::size_t d = p.dim();

  std::vector<Layer> layers;
  Layer first(width, d);
  for (std::size_t r = 0; r < width; ++r) {
    for (const auto& [c, w] : s.weights.row(r)) first.weights.set(r, c, B * w);
    first.bias.set(r, B * s.bias[r]);
  }
  layers.push_back(std::move(first));
  for (int i = 2; i <= L; ++i) {
    Layer diag(width, width);
    for (std::size_t r = 0; r < width; ++r) {
      diag.weights.set(r, r, B);
      diag.bias.set(r, Rational(0));
    }
    layers.push_back(std::move(diag));
  }
  const Rational undo = B.pow_signed(-hidden_scale_exponent(k, L));
  ParamVector out(width);
  for (std::size_t r = 0; r < width; ++r) out.set(r, undo * shallow.output()[r]);

  Network net(NetworkKind::deep, k, d, std::move(layers), std::move(out));
  return prune ? prune_dead_units(net) : net;
}

/// B^{-k (k^L - 1)/(k - 1)} (k^L/2 + 1)^{2(d+1)+k^L} sum |a_alpha|.
inline Rational deep_M_bound(const Polynomial& p, int k, int L, const Rational& B) {
  const int K = int_power(k, L);
  const std::size_t d = p.dim();
  return B.pow_signed(-hidden_scale_exponent(k, L)) * (Rational(K) / 2 + 1).pow(2 * (d + 1) + K) *
         p.abs_coefficient_sum();
}

struct DeepCounts {
  std::vector<std::size_t> widths;
  std::size_t nonzero = 0;
};

/// Widths 2(k^L+1)^d, nonzero parameters 2(2L+d)(k^L+1)^d.
inline DeepCounts expected_deep_counts(int k, int L, std::size_t d) {
  const std::size_t w = shallow_width(int_power(k, L), d);
  return {std::vector<std::size_t>(static_cast<std::size_t>(L), w), (2 * static_cast<std::size_t>(L) + d) * w};
}

}  // namespace reluk
