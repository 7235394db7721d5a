#pragma once

// The (n+1)x(n+1) system B_n[s][i] = binom(n,i) * node_s^i over the integer
// nodes -floor(n/2), ..., n - floor(n/2). Row j of the inverse (read through
// the transposed system) gives the weights bhat with
//   sum_s bhat_s (xi + node_s * y)^n = xi^j * y^(n-j).

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "reluk/linear_algebra.hpp"

namespace reluk {

inline constexpr int kDefaultInverseCap = 40;

struct VandermondeSystem {
  int n = 0;
  std::vector<long> nodes;
  ExactMatrix matrix;
};

inline std::vector<long> vandermonde_nodes(int n) {
  std::vector<long> nodes(n + 1);
  for (int s = 0; s <= n; ++s) nodes[s] = s - floor_half(n);
  return nodes;
}

inline VandermondeSystem build_system(int n) {
  if (n < 1) throw DomainError("Vandermonde system requires n >= 1");
  VandermondeSystem sys{n, vandermonde_nodes(n), ExactMatrix(n + 1, n + 1)};
  for (int s = 0; s <= n; ++s)
    for (int i = 0; i <= n; ++i)
      sys.matrix(s, i) = Rational(binomial(n, i)) * Rational(sys.nodes[s]).pow(i);
  return sys;
}

/// Memoizes the factorization of B_n^T and the solved rows per (n, j).
/// Concurrent lookups share the lock; fills are idempotent, so two threads
/// racing on the same key store identical values.
class BhatCache {
 public:
  ExactVector get(int n, int j) {
    {
      std::shared_lock lock(mu_);
      if (auto it = rows_.find({n, j}); it != rows_.end()) return it->second;
    }
    std::shared_ptr<const ExactLU> lu = factor(n);
    ExactVector e(n + 1);
    e[n - j] = 1;  // e_{n-j+1} in 1-based numbering
    ExactVector row = lu->solve(e);
    std::unique_lock lock(mu_);
    rows_.try_emplace({n, j}, row);
    return row;
  }

  static BhatCache& global() {
    static BhatCache cache;
    return cache;
  }

 private:
  std::shared_ptr<const ExactLU> factor(int n) {
    {
      std::shared_lock lock(mu_);
      if (auto it = lus_.find(n); it != lus_.end()) return it->second;
    }
    auto lu = std::make_shared<const ExactLU>(build_system(n).matrix.transpose());
    std::unique_lock lock(mu_);
    return lus_.try_emplace(n, std::move(lu)).first->second;
  }

  std::shared_mutex mu_;
  std::map<int, std::shared_ptr<const ExactLU>> lus_;
  std::map<std::pair<int, int>, ExactVector> rows_;
};

/// bhat with bhat^T B_n = e_{n-j+1}^T.
inline ExactVector solve_bhat(int n, int j) {
  if (n < 1) throw DomainError("solve_bhat requires n >= 1");
  if (j < 0 || j > n) throw DomainError("solve_bhat requires 0 <= j <= n");
  return BhatCache::global().get(n, j);
}

/// Closed-form bound (n/2 + 1)^2 on max |(B_n^{-1})_{ik}|.
inline Rational gautschi_bound(int n) {
  if (n < 1) throw DomainError("gautschi_bound requires n >= 1");
  return (Rational(n) / 2 + 1).pow(2);
}

/// B_n^{-1}, assembled column by column from exact solves.
inline ExactMatrix vandermonde_inverse(int n) {
  ExactLU lu(build_system(n).matrix);
  ExactMatrix inv(n + 1, n + 1);
  for (int c = 0; c <= n; ++c) {
    ExactVector e(n + 1);
    e[c] = 1;
    ExactVector col = lu.solve(e);
    for (int r = 0; r <= n; ++r) inv(r, c) = std::move(col[r]);
  }
  return inv;
}

inline Rational inverse_max_norm(int n, int cap = kDefaultInverseCap) {
  if (n < 1) throw DomainError("inverse_max_norm requires n >= 1");
  if (n > cap) throw DomainError("inverse_max_norm: n exceeds cap " + std::to_string(cap));
  return vandermonde_inverse(n).max_abs();
}

}  // namespace reluk
