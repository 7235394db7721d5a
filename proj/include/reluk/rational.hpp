#pragma once

// Exact rational scalar backed by GMP. Values are always canonical (lowest
// terms, positive denominator); the string form "p/q" (or "p" when q == 1)
// is the interchange format used by every file the library reads or writes.

#include <gmpxx.h>

#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "reluk/error.hpp"

namespace reluk {

class Rational {
 public:
  Rational() = default;
  Rational(int v) : q_(v) {}             // NOLINT(google-explicit-constructor)
  Rational(long v) : q_(v) {}            // NOLINT(google-explicit-constructor)
  Rational(long long v) : q_(static_cast<long>(v)) {  // NOLINT(google-explicit-constructor)
    static_assert(sizeof(long) == sizeof(long long));
  }
  Rational(const mpz_class& v) : q_(v) {}  // NOLINT(google-explicit-constructor)

  Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw DomainError("division by zero");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }

  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  /// Exact value of a finite binary64.
  static Rational from_double(double v) {
    if (!std::isfinite(v)) throw DomainError("non-finite value has no rational form");
    Rational r;
    mpq_set_d(r.q_.get_mpq_t(), v);
    return r;
  }

  /// Parses "p" or "p/q" with an optional leading '-' on p. Non-lowest
  /// forms such as "2/4" are accepted and normalized.
  static Rational parse(std::string_view s) {
    auto digits = [](std::string_view t) {
      if (t.empty()) return false;
      for (char ch : t)
        if (ch < '0' || ch > '9') return false;
      return true;
    };
    auto slash = s.find('/');
    std::string_view num = s.substr(0, slash);
    std::string_view body = (!num.empty() && num.front() == '-') ? num.substr(1) : num;
    if (!digits(body)) throw ParseError("", "invalid rational \"" + std::string(s) + "\"");
    mpz_class n(std::string(num), 10);
    mpz_class d(1);
    if (slash != std::string_view::npos) {
      std::string_view den = s.substr(slash + 1);
      if (!digits(den)) throw ParseError("", "invalid rational \"" + std::string(s) + "\"");
      d = mpz_class(std::string(den), 10);
      if (d == 0) throw ParseError("", "zero denominator in \"" + std::string(s) + "\"");
    }
    return Rational(n, d);
  }

  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  double to_double() const { return q_.get_d(); }

  const mpq_class& raw() const noexcept { return q_; }
  mpz_class numerator() const { return q_.get_num(); }
  mpz_class denominator() const { return q_.get_den(); }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }

  Rational abs() const { return Rational(mpq_class(::abs(q_))); }

  Rational pow(unsigned long e) const {
    Rational r;
    mpz_pow_ui(r.q_.get_num_mpz_t(), q_.get_num_mpz_t(), e);
    mpz_pow_ui(r.q_.get_den_mpz_t(), q_.get_den_mpz_t(), e);
    return r;
  }

  /// Integer power; negative exponents require a nonzero base.
  Rational pow_signed(long e) const {
    if (e >= 0) return pow(static_cast<unsigned long>(e));
    if (is_zero()) throw DomainError("division by zero");
    return Rational(1) / pow(static_cast<unsigned long>(-e));
  }

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw DomainError("division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

// n >= 0 only.
constexpr long floor_half(long n) { return n / 2; }
constexpr long ceil_half(long n) { return (n + 1) / 2; }

inline mpz_class binomial(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

}  // namespace reluk
