#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "reluk/error.hpp"
#include "reluk/rational.hpp"

namespace reluk {

/// Exponent tuple alpha; x^alpha = prod x_i^{alpha_i}.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
    for (int v : e_)
      if (v < 0) throw DomainError("multi-index entries must be non-negative");
  }
  MultiIndex(std::initializer_list<int> entries) : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zeros(std::size_t d) { return MultiIndex(std::vector<int>(d, 0)); }

  std::size_t size() const noexcept { return e_.size(); }
  int operator[](std::size_t i) const { return e_[i]; }
  int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  const std::vector<int>& entries() const noexcept { return e_; }

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < e_.size(); ++i) s += (i ? "," : "") + std::to_string(e_[i]);
    return s + ")";
  }

 private:
  std::vector<int> e_;
};

/// Sparse multivariate polynomial with exact coefficients. Zero
/// coefficients are never stored; the zero polynomial has no terms.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  explicit Polynomial(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw DomainError("polynomial dimension must be positive");
  }

  static Polynomial constant(std::size_t dim, const Rational& c) {
    Polynomial p(dim);
    p.add_term(MultiIndex::zeros(dim), c);
    return p;
  }

  static Polynomial monomial(const MultiIndex& alpha, const Rational& c = 1) {
    Polynomial p(alpha.size());
    p.add_term(alpha, c);
    return p;
  }

  std::size_t dim() const noexcept { return dim_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  /// Total degree; 0 for the zero polynomial (check is_zero()).
  int degree() const {
    int d = 0;
    for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
    return d;
  }

  Rational coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const MultiIndex& alpha, const Rational& c) {
    if (alpha.size() != dim_) throw ShapeError("multi-index length does not match dimension");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(alpha, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Rational abs_coefficient_sum() const {
    Rational s;
    for (const auto& [a, c] : terms_) s += c.abs();
    return s;
  }

  Polynomial& operator+=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_dim(o);
    for (const auto& [a, c] : o.terms_) add_term(a, -c);
    return *this;
  }
  Polynomial& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [a, c] : terms_) c *= s;
    return *this;
  }

  /// Adds s * o without materializing the scaled copy.
  void add_scaled(const Polynomial& o, const Rational& s) {
    check_dim(o);
    if (s.is_zero()) return;
    for (const auto& [a, c] : o.terms_) add_term(a, c * s);
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_dim(b);
    Polynomial r(a.dim_);
    std::vector<int> e(a.dim_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < a.dim_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(MultiIndex(e), ca * cb);
      }
    return r;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  template <typename T>
  T evaluate(std::span<const T> x) const {
    if (x.size() != dim_) throw ShapeError("evaluation point has wrong dimension");
    T sum = T(0);
    for (const auto& [a, c] : terms_) {
      T term = coefficient_as<T>(c);
      for (std::size_t i = 0; i < dim_; ++i)
        for (int p = 0; p < a[i]; ++p) term *= x[i];
      sum += term;
    }
    return sum;
  }

  Rational evaluate(const std::vector<Rational>& x) const { return evaluate<Rational>(std::span(x)); }
  double evaluate(const std::vector<double>& x) const { return evaluate<double>(std::span(x)); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [a, c] : terms_) {
      if (!s.empty()) s += " + ";
      s += c.str();
      for (std::size_t i = 0; i < dim_; ++i)
        if (a[i] > 0) s += "*x" + std::to_string(i + 1) + (a[i] > 1 ? "^" + std::to_string(a[i]) : "");
    }
    return s;
  }

 private:
  template <typename T>
  static T coefficient_as(const Rational& c) {
    if constexpr (std::is_same_v<T, Rational>)
      return c;
    else
      return static_cast<T>(c.to_double());
  }

  void check_dim(const Polynomial& o) const {
    if (o.dim_ != dim_) throw ShapeError("polynomial dimensions differ");
  }

  std::size_t dim_;
  TermMap terms_;
};

inline constexpr int kDefaultExpansionCap = 64;

/// Exact expansion of (s . x + c)^power in d = slopes.size() variables.
inline Polynomial expand_affine_power(std::span<const Rational> slopes, const Rational& constant,
                                      int power, int cap = kDefaultExpansionCap) {
  if (power < 0) throw DomainError("power must be non-negative");
  if (power > cap)
    throw ExpansionTooLarge("expansion too large: power " + std::to_string(power) +
                            " exceeds cap " + std::to_string(cap));
  const std::size_t d = slopes.size();
  Polynomial out(d);
  // pw[i][e] = slopes[i]^e, the last row holds powers of the constant.
  std::vector<std::vector<Rational>> pw(d + 1, std::vector<Rational>(power + 1));
  for (std::size_t i = 0; i <= d; ++i) {
    const Rational& base = i < d ? slopes[i] : constant;
    pw[i][0] = 1;
    for (int e = 1; e <= power; ++e) pw[i][e] = pw[i][e - 1] * base;
  }
  std::vector<int> e(d, 0);
  // Depth-first over exponent tuples with sum <= power; the constant takes
  // the remainder. coef accumulates the multinomial coefficient.
  auto rec = [&](auto&& self, std::size_t i, int remaining, const mpz_class& multi,
                 const Rational& prod) -> void {
    if (i == d) {
      if (remaining > 0 && constant.is_zero()) return;
      out.add_term(MultiIndex(e), prod * pw[d][remaining] * Rational(multi));
      return;
    }
    for (int p = 0; p <= remaining; ++p) {
      if (p > 0 && slopes[i].is_zero()) break;
      e[i] = p;
      self(self, i + 1, remaining - p, multi * binomial(remaining, p), prod * pw[i][p]);
    }
    e[i] = 0;
  };
  rec(rec, 0, power, mpz_class(1), Rational(1));
  return out;
}

/// (s . x + c)^power for integer slopes and constant.
inline Polynomial multinomial_expand(std::span<const long> slopes, long constant, int power,
                                     int cap = kDefaultExpansionCap) {
  std::vector<Rational> s(slopes.begin(), slopes.end());
  return expand_affine_power(s, Rational(constant), power, cap);
}

inline Polynomial multinomial_expand(const std::vector<long>& slopes, long constant, int power,
                                     int cap = kDefaultExpansionCap) {
  return multinomial_expand(std::span<const long>(slopes), constant, power, cap);
}

}  // namespace reluk
