#pragma once

// Seeded generators shared by tests, the CLI and the experiments. Mappings
// from raw 64-bit draws are written out so streams do not depend on the
// standard library's distribution implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "reluk/network.hpp"
#include "reluk/polynomial.hpp"

namespace reluk {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], rejection-sampled.
  long integer(long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t v;
    do v = gen_();
    while (v >= limit);
    return lo + static_cast<long>(v % span);
  }

  /// p/q with q in [1, max_den] and |p/q| <= bound.
  Rational rational(long max_den, long bound = 1) {
    const long q = integer(1, max_den);
    return Rational(mpz_class(integer(-bound * q, bound * q)), mpz_class(q));
  }

 private:
  std::mt19937_64 gen_;
};

/// Rational point in the closed unit ball with coordinates j / den.
inline ExactVector random_ball_point(Rng& rng, std::size_t d, long den = 1024) {
  while (true) {
    ExactVector x(d);
    Rational n2;
    for (auto& v : x) {
      v = Rational(mpz_class(rng.integer(-den, den)), mpz_class(den));
      n2 += v * v;
    }
    if (n2 <= Rational(1)) return x;
  }
}

inline std::vector<ExactVector> random_ball_points(Rng& rng, std::size_t d, std::size_t n, long den = 1024) {
  std::vector<ExactVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_ball_point(rng, d, den));
  return out;
}

/// Every monomial of degree <= deg in d variables.
inline std::vector<MultiIndex> monomials_up_to(std::size_t d, int deg) {
  std::vector<MultiIndex> out;
  std::vector<int> e(d, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == d) {
      out.emplace_back(e);
      return;
    }
    for (int p = 0; p <= left; ++p) {
      e[i] = p;
      self(self, i + 1, left - p);
    }
    e[i] = 0;
  };
  rec(rec, 0, deg);
  return out;
}

/// Random polynomial of total degree <= deg; each monomial is kept with
/// probability 1/2 and gets a coefficient p/q, |p/q| <= 4, q <= 9.
inline Polynomial random_polynomial(Rng& rng, std::size_t d, int deg) {
  Polynomial p(d);
  for (const auto& a : monomials_up_to(d, deg))
    if (rng.integer(0, 1)) p.add_term(a, rng.rational(9, 4));
  return p;
}

/// Random shallow ReLU^K network with ||w||_inf <= 1, |u| <= 1 and
/// output weights |c| <= 2.
inline Network random_shallow_network(Rng& rng, int K, std::size_t d, std::size_t width) {
  Layer l(width, d);
  ParamVector c(width);
  for (std::size_t r = 0; r < width; ++r) {
    for (std::size_t i = 0; i < d; ++i) l.weights.set(r, i, rng.rational(8));
    l.bias.set(r, rng.rational(8));
    c.set(r, rng.rational(8, 2));
  }
  return Network(NetworkKind::shallow, K, d, {std::move(l)}, std::move(c));
}

}  // namespace reluk
