#pragma once

// Shallow ReLU^K network (K = k^l, l <= L)  ->  deep ReLU^k network of depth L
// and width 2(k+1)n.
//
// Layers 1..l raise powers: slot m holds sigma_{k^i}(w_m . x + u_m). The
// remaining L - l layers carry y_m = sigma_K(w_m . x + u_m) through unchanged
// using the identity
//   y = sum_t a_t [sigma_k(y + s_t) + (-1)^k sigma_k(-y - s_t)],  s_t = t - floor(k/2).
// The first carry layer expands slot m into the 2(k+1) values
// sigma_k(+-(y_m + s_t)) of block m. Every later carry layer reads y_m back
// from block m (weights a_t, (-1)^k a_t) and expands it again in the same
// layer, because sigma_k is applied after every affine map. The output layer
// reads y_m back with c_m a_t.

#include <vector>

#include "reluk/deep_compile.hpp"
#include "reluk/vandermonde.hpp"

namespace reluk {

struct IdentityCombination {
  int k = 0;
  std::vector<long> shifts;  // t - floor(k/2), t = 0..k
  ExactVector a;
};

inline IdentityCombination identity_combination(int k) {
  if (k < 1) throw DomainError("identity combination requires k >= 1");
  return {k, vandermonde_nodes(k), solve_bhat(k, 1)};
}

/// Returns l with k^l == K, or 0 when K is not a positive power of k.
inline int power_level(int K, int k) {
  if (k < 2 || K < k) return 0;
  int l = 0;
  long long p = 1;
  while (p < K) {
    p *= k;
    ++l;
  }
  return p == K ? l : 0;
}

inline Network embed_shallow(const Network& f, int k, int L) {
  if (!f.is_shallow()) throw DomainError("embed_shallow expects a shallow network");
  if (k < 2) throw DomainError("embedding requires k >= 2");
  if (L < 1) throw DomainError("depth L must be >= 1");
  const int K = f.k();
  const int level = power_level(K, k);
  if (level == 0 || level > L)
    throw NotEmbeddable("exponent not embeddable at this depth: K = " + std::to_string(K) + ", k = " +
                        std::to_string(k) + ", L = " + std::to_string(L));

  const Layer& src = f.layers().front();
  const std::size_t n = src.width();
  const std::size_t d = f.input_dim();
  const std::size_t block = 2 * static_cast<std::size_t>(k + 1);
  const std::size_t width = block * n;
  const IdentityCombination id = identity_combination(k);
  const Rational pair_sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
  auto plus_slot = [&](std::size_t m, int t) { return block * m + 2 * static_cast<std::size_t>(t); };

  std::vector<Layer> layers;
  Layer first(width, d);
  for (std::size_t m = 0; m < n; ++m) {
    for (const auto& [c, w] : src.weights.row(m)) first.weights.set(m, c, w);
    first.bias.set(m, src.bias[m]);
  }
  layers.push_back(std::move(first));

  for (int i = 2; i <= level; ++i) {
    Layer raise(width, width);
    for (std::size_t m = 0; m < n; ++m) raise.weights.set(m, m, Rational(1));
    layers.push_back(std::move(raise));
  }

  for (int i = level + 1; i <= L; ++i) {
    const bool from_power_slots = (i == level + 1);
    Layer carry(width, width);
    for (std::size_t m = 0; m < n; ++m) {
      for (int t = 0; t <= k; ++t) {
        const std::size_t row = plus_slot(m, t);
        for (int sgn : {1, -1}) {
          const std::size_t r = sgn == 1 ? row : row + 1;
          if (from_power_slots) {
            carry.weights.set(r, m, Rational(sgn));
          } else {
            for (int u = 0; u <= k; ++u) {
              carry.weights.set(r, plus_slot(m, u), Rational(sgn) * id.a[u]);
              carry.weights.set(r, plus_slot(m, u) + 1, Rational(sgn) * pair_sign * id.a[u]);
            }
          }
          carry.bias.set(r, Rational(sgn * id.shifts[t]));
        }
      }
    }
    layers.push_back(std::move(carry));
  }

  ParamVector out(width);
  if (level == L) {
    for (std::size_t m = 0; m < n; ++m) out.set(m, f.output()[m]);
  } else {
    for (std::size_t m = 0; m < n; ++m)
      for (int t = 0; t <= k; ++t) {
        out.set(plus_slot(m, t), f.output()[m] * id.a[t]);
        out.set(plus_slot(m, t) + 1, f.output()[m] * pair_sign * id.a[t]);
      }
  }
  return Network(NetworkKind::deep, k, d, std::move(layers), std::move(out));
}

/// [(4L - 2)(k + 1) + d] n, the count stated for the embedding architecture.
inline std::size_t embed_param_count(int k, int L, std::size_t n, std::size_t d) {
  return ((4 * static_cast<std::size_t>(L) - 2) * static_cast<std::size_t>(k + 1) + d) * n;
}

/// Free-parameter count of the network embed_shallow actually builds for a
/// width-n input of level l, assuming the source network's parameters are
/// all free:
///   l = L:  (d + 1 + (L - 1) + 1) n
///   l < L:  (d + 1 + (l - 1) + 2W + (L - l - 1)(W^2 + W) + W) n,  W = 2(k+1).
inline std::size_t embed_structural_count(int k, int L, int level, std::size_t n, std::size_t d) {
  const std::size_t W = 2 * static_cast<std::size_t>(k + 1);
  const std::size_t Ls = static_cast<std::size_t>(L), ls = static_cast<std::size_t>(level);
  if (level == L) return (d + 1 + (Ls - 1) + 1) * n;
  return (d + 1 + (ls - 1) + 2 * W + (Ls - ls - 1) * (W * W + W) + W) * n;
}

/// max(B, (k/2+1)^4) and (k/2+1)^4 M.
inline Rational embed_weight_bound(int k, const Rational& B) {
  Rational c = (Rational(k) / 2 + 1).pow(4);
  return B > c ? B : c;
}

inline Rational embed_output_bound(int k, const Rational& M) { return (Rational(k) / 2 + 1).pow(4) * M; }

}  // namespace reluk
