#pragma once

// Chebyshev interpolation on [-1,1] (d = 1) and [-1,1]^2 (d = 2, tensor
// product truncated to total degree n), evaluated by Clenshaw recurrence.
// to_polynomial() converts the float coefficients to the monomial basis
// exactly: each coefficient is taken at its binary value and T_m is expanded
// with integer coefficients.

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "reluk/polynomial.hpp"

namespace reluk::approx {

using Target = std::function<double(std::span<const double>)>;

inline constexpr int kMaxChebyshevDegree = 200;

/// Chebyshev points of the first kind, cos(pi (j + 1/2) / (n + 1)).
inline std::vector<double> chebyshev_points(int n) {
  std::vector<double> x(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) x[static_cast<std::size_t>(j)] = std::cos(std::numbers::pi * (j + 0.5) / (n + 1));
  return x;
}

/// Integer monomial coefficients of T_0..T_n; row m has m + 1 entries.
inline std::vector<std::vector<mpz_class>> chebyshev_monomials(int n) {
  std::vector<std::vector<mpz_class>> T(static_cast<std::size_t>(n + 1));
  T[0] = {1};
  if (n >= 1) T[1] = {0, 1};
  for (int m = 2; m <= n; ++m) {
    auto& t = T[static_cast<std::size_t>(m)];
    t.assign(static_cast<std::size_t>(m + 1), 0);
    const auto& a = T[static_cast<std::size_t>(m - 1)];
    const auto& b = T[static_cast<std::size_t>(m - 2)];
    for (std::size_t i = 0; i < a.size(); ++i) t[i + 1] += 2 * a[i];
    for (std::size_t i = 0; i < b.size(); ++i) t[i] -= b[i];
  }
  return T;
}

inline double clenshaw(std::span<const double> c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t m = c.size(); m-- > 1;) {
    double b0 = 2.0 * x * b1 - b2 + c[m];
    b2 = b1;
    b1 = b0;
  }
  return (c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

struct ChebyshevFit {
  int dim = 1;
  int degree = 0;
  /// d = 1: coeffs[m]; d = 2: coeffs[i][j] for i + j <= n (rows of length n+1-i).
  std::vector<std::vector<double>> coeffs;

  double operator()(std::span<const double> x) const {
    if (dim == 1) return clenshaw(coeffs[0], x[0]);
    std::vector<double> inner(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) inner[i] = clenshaw(coeffs[i], x[1]);
    return clenshaw(inner, x[0]);
  }
  double operator()(double x) const { return clenshaw(coeffs[0], x); }

  Polynomial to_polynomial() const {
    const auto T = chebyshev_monomials(degree);
    Polynomial p(static_cast<std::size_t>(dim));
    if (dim == 1) {
      for (std::size_t m = 0; m < coeffs[0].size(); ++m) {
        const Rational c = Rational::from_double(coeffs[0][m]);
        if (c.is_zero()) continue;
        for (std::size_t e = 0; e < T[m].size(); ++e)
          if (T[m][e] != 0) p.add_term(MultiIndex{static_cast<int>(e)}, c * Rational(T[m][e]));
      }
      return p;
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i)
      for (std::size_t j = 0; j < coeffs[i].size(); ++j) {
        const Rational c = Rational::from_double(coeffs[i][j]);
        if (c.is_zero()) continue;
        for (std::size_t a = 0; a < T[i].size(); ++a) {
          if (T[i][a] == 0) continue;
          for (std::size_t b = 0; b < T[j].size(); ++b)
            if (T[j][b] != 0)
              p.add_term(MultiIndex{static_cast<int>(a), static_cast<int>(b)}, c * Rational(mpz_class(T[i][a] * T[j][b])));
        }
      }
    return p;
  }
};

inline ChebyshevFit chebyshev_fit(const Target& f, int n, int d = 1) {
  if (n < 0 || n > kMaxChebyshevDegree) throw DomainError("Chebyshev degree must be in [0, 200]");
  if (d != 1 && d != 2) throw DomainError("Chebyshev fit supports d = 1 or 2");
  const std::size_t N = static_cast<std::size_t>(n + 1);
  const auto x = chebyshev_points(n);
  // cosines[m][j] = T_m(x_j)
  std::vector<std::vector<double>> cosines(N, std::vector<double>(N));
  for (std::size_t m = 0; m < N; ++m)
    for (std::size_t j = 0; j < N; ++j)
      cosines[m][j] = std::cos(std::numbers::pi * static_cast<double>(m) * (j + 0.5) / static_cast<double>(N));
  auto weight = [&](std::size_t m) { return (m == 0 ? 1.0 : 2.0) / static_cast<double>(N); };

  ChebyshevFit fit;
  fit.dim = d;
  fit.degree = n;
  if (d == 1) {
    std::vector<double> fx(N);
    for (std::size_t j = 0; j < N; ++j) fx[j] = f(std::span<const double>(&x[j], 1));
    fit.coeffs.assign(1, std::vector<double>(N, 0.0));
    for (std::size_t m = 0; m < N; ++m) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += fx[j] * cosines[m][j];
      fit.coeffs[0][m] = weight(m) * s;
    }
    return fit;
  }
  std::vector<std::vector<double>> fx(N, std::vector<double>(N));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      const double p[2] = {x[a], x[b]};
      fx[a][b] = f(p);
    }
  // Transform along the second coordinate, then the first.
  std::vector<std::vector<double>> half(N, std::vector<double>(N));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (std::size_t b = 0; b < N; ++b) s += fx[a][b] * cosines[j][b];
      half[a][j] = weight(j) * s;
    }
  fit.coeffs.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    fit.coeffs[i].assign(N - i, 0.0);
    for (std::size_t j = 0; j + i < N; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < N; ++a) s += half[a][j] * cosines[i][a];
      fit.coeffs[i][j] = weight(i) * s;
    }
  }
  return fit;
}

}  // namespace reluk::approx
