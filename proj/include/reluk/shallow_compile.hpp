#pragma once

// Polynomial of degree <= k  ->  shallow ReLU^k network of width 2(k+1)^d.
//
// Every monomial is decomposed over the common grid of affine forms
// l(x) = x_1 + n_2 x_2 + ... + n_d x_d + n_{d+1}; the per-form coefficients
// beta are summed over the monomials, and each term beta l(x)^k becomes the
// unit pair sigma_k(s l) + (-1)^k sigma_k(-s l) with s = B / ceil(k/2).

#include <vector>

#include "reluk/monomial_decomp.hpp"
#include "reluk/network.hpp"

namespace reluk {

namespace detail {

/// All tuples in {-floor(k/2), ..., k - floor(k/2)}^len, lexicographic.
inline std::vector<std::vector<long>> slope_grid(int k, std::size_t len) {
  std::vector<std::vector<long>> out;
  const long lo = -floor_half(k), hi = k - floor_half(k);
  std::vector<long> cur(len, lo);
  while (true) {
    out.push_back(cur);
    std::size_t i = len;
    while (i > 0 && cur[i - 1] == hi) cur[--i] = lo;
    if (i == 0) break;
    ++cur[i - 1];
  }
  return out;
}

inline void check_compile_inputs(const Polynomial& p, int k, const Rational& B) {
  if (k < 2) throw DomainError("polynomial compilation requires k >= 2");
  if (B.sign() <= 0) throw DomainError("weight bound B must be positive");
  if (!p.is_zero() && p.degree() > k)
    throw DegreeExceedsBudget("degree exceeds k: deg P = " + std::to_string(p.degree()) +
                              " > k = " + std::to_string(k));
}

}  // namespace detail

/// Aggregated coefficients beta over the full grid (zeros included), keyed
/// by (n_2, ..., n_{d+1}) in lexicographic order.
inline std::vector<std::pair<std::vector<long>, Rational>> aggregate_form_coefficients(const Polynomial& p,
                                                                                      int k) {
  std::map<std::vector<long>, Rational> beta;
  for (const auto& key : detail::slope_grid(k, p.dim())) beta.emplace(key, Rational(0));
  for (const auto& [alpha, a] : p.terms()) {
    DecompositionTable t = decompose_inhomogeneous(alpha, k);
    for (const auto& [key, c] : t.entries)
      if (!c.is_zero()) beta.at(key) += a * c;
  }
  return {beta.begin(), beta.end()};
}

inline Network compile_shallow(const Polynomial& p, int k, const Rational& B, bool prune = false) {
  detail::check_compile_inputs(p, k, B);
  const std::size_t d = p.dim();
  auto beta = aggregate_form_coefficients(p, k);
  const std::size_t width = 2 * beta.size();

  const Rational scale = B / Rational(ceil_half(k));
  const Rational out_scale = (Rational(ceil_half(k)) / B).pow(k);
  const Rational pair_sign = (k % 2 == 0) ? Rational(1) : Rational(-1);

  Layer layer(width, d);
  ParamVector out(width);
  std::size_t unit = 0;
  for (const auto& [key, b] : beta) {
    for (int sgn : {1, -1}) {
      Rational s = scale * Rational(sgn);
      layer.weights.set(unit, 0, s);
      for (std::size_t i = 1; i < d; ++i) layer.weights.set(unit, i, s * Rational(key[i - 1]));
      layer.bias.set(unit, s * Rational(key[d - 1]));
      out.set(unit, sgn == 1 ? out_scale * b : pair_sign * out_scale * b);
      ++unit;
    }
  }
  Network net(NetworkKind::shallow, k, d, {std::move(layer)}, std::move(out));
  return prune ? prune_dead_units(net) : net;
}

/// B^{-k} (k/2 + 1)^{2(d+1)+k} sum |a_alpha|.
inline Rational shallow_M_bound(const Polynomial& p, int k, const Rational& B) {
  const std::size_t d = p.dim();
  return B.pow_signed(-k) * (Rational(k) / 2 + 1).pow(2 * (d + 1) + k) * p.abs_coefficient_sum();
}

inline std::size_t shallow_width(int k, std::size_t d) {
  std::size_t w = 2;
  for (std::size_t i = 0; i < d; ++i) w *= static_cast<std::size_t>(k + 1);
  return w;
}

}  // namespace reluk
