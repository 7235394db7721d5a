#pragma once

// Writes a degree-n monomial x^alpha as
//   x^alpha = sum c_{n_2..n_d} (x_1 + n_2 x_2 + ... + n_d x_d)^n
// with integer slopes on the grid -floor(n/2)..n-floor(n/2). The table is
// built one variable at a time: the leading d-1 variables are decomposed at
// degree j = n - alpha_d and each of their forms xi is then combined with
// the last variable through the weights bhat = solve_bhat(n, j).

#include <map>
#include <vector>

#include "reluk/polynomial.hpp"
#include "reluk/vandermonde.hpp"

namespace reluk {

/// Integer affine form x_1 + n_2 x_2 + ... + n_d x_d + constant.
struct LinearForm {
  std::vector<long> slopes;
  long constant = 0;
};

struct DecompositionTable {
  MultiIndex alpha;
  int degree = 0;
  bool homogeneous = true;
  /// Key is (n_2, ..., n_d) for homogeneous tables and (n_2, ..., n_d,
  /// n_{d+1}) for inhomogeneous ones, whose last slot is the constant.
  /// Grid points outside the recursion's support are omitted (they are 0).
  std::map<std::vector<long>, Rational> entries;

  std::size_t dim() const { return alpha.size(); }

  LinearForm form(const std::vector<long>& key) const {
    LinearForm f;
    f.slopes.push_back(1);
    if (homogeneous) {
      f.slopes.insert(f.slopes.end(), key.begin(), key.end());
    } else {
      f.slopes.insert(f.slopes.end(), key.begin(), key.end() - 1);
      f.constant = key.back();
    }
    return f;
  }

  /// Number of points in the full slope grid, (n+1)^(key length).
  std::size_t dense_grid_size() const {
    std::size_t key_len = homogeneous ? dim() - 1 : dim();
    std::size_t s = 1;
    for (std::size_t i = 0; i < key_len; ++i) s *= static_cast<std::size_t>(degree + 1);
    return s;
  }

  /// Homogeneous: (n/2+1)^{2d}; inhomogeneous: (k/2+1)^{2(d+1)}.
  Rational coefficient_bound() const {
    std::size_t dd = homogeneous ? dim() : dim() + 1;
    return (Rational(degree) / 2 + 1).pow(2 * dd);
  }

  Rational max_abs_coefficient() const {
    Rational m;
    for (const auto& [key, c] : entries)
      if (c.abs() > m) m = c.abs();
    return m;
  }
};

namespace detail {

// alpha may be all zeros (degree 0) for inner recursion levels; the empty
// product is represented by the all-zero slope tuple.
inline std::map<std::vector<long>, Rational> decompose_rec(const std::vector<int>& alpha) {
  const std::size_t d = alpha.size();
  std::map<std::vector<long>, Rational> out;
  if (d == 1) {
    out.emplace(std::vector<long>{}, Rational(1));
    return out;
  }
  int n = 0;
  for (int a : alpha) n += a;
  if (n == 0) {
    out.emplace(std::vector<long>(d - 1, 0), Rational(1));
    return out;
  }
  const int j = n - alpha.back();
  std::vector<int> inner(alpha.begin(), alpha.end() - 1);
  auto inner_table = decompose_rec(inner);
  ExactVector bhat = solve_bhat(n, j);
  const long shift = floor_half(n);
  for (const auto& [key, c] : inner_table) {
    for (int s = 0; s <= n; ++s) {
      std::vector<long> k2 = key;
      k2.push_back(s - shift);
      out.emplace(std::move(k2), c * bhat[s]);
    }
  }
  return out;
}

}  // namespace detail

inline DecompositionTable decompose_monomial(const MultiIndex& alpha) {
  if (alpha.size() == 0) throw DomainError("monomial needs at least one variable");
  const int n = alpha.degree();
  if (n == 0 && alpha.size() > 1)
    throw DegreeExceedsBudget("constant monomial needs the inhomogeneous decomposition");
  DecompositionTable t;
  t.alpha = alpha;
  t.degree = n;
  t.homogeneous = true;
  t.entries = detail::decompose_rec(alpha.entries());
  return t;
}

/// x^alpha = sum c (x_1 + n_2 x_2 + ... + n_d x_d + n_{d+1})^k, obtained by
/// padding alpha with k - |alpha| in an auxiliary variable set to 1.
inline DecompositionTable decompose_inhomogeneous(const MultiIndex& alpha, int k) {
  if (k < 1) throw DomainError("degree budget k must be >= 1");
  if (alpha.degree() > k)
    throw DegreeExceedsBudget("degree exceeds budget: |alpha| = " + std::to_string(alpha.degree()) +
                              " > k = " + std::to_string(k));
  std::vector<int> padded = alpha.entries();
  padded.push_back(k - alpha.degree());
  DecompositionTable t;
  t.alpha = alpha;
  t.degree = k;
  t.homogeneous = false;
  t.entries = detail::decompose_rec(padded);
  return t;
}

/// sum c (form)^n - x^alpha, expanded exactly; zero iff the table is right.
inline Polynomial verify_table(const DecompositionTable& t, int cap = kDefaultExpansionCap) {
  Polynomial sum(t.dim());
  for (const auto& [key, c] : t.entries) {
    if (c.is_zero()) continue;
    LinearForm f = t.form(key);
    sum.add_scaled(multinomial_expand(f.slopes, f.constant, t.degree, cap), c);
  }
  sum -= Polynomial::monomial(t.alpha);
  return sum;
}

}  // namespace reluk
