#pragma once

// Orthogonal greedy fitting over a finite discretization of the ridge
// dictionary { sigma_K(w . x + b) : |w| = 1, |b| <= 1 }.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "reluk/network.hpp"

namespace reluk::approx {

struct DictionaryElement {
  std::vector<double> omega;
  double offset = 0.0;
  int K = 1;

  double operator()(std::span<const double> x) const {
    double t = offset;
    for (std::size_t i = 0; i < omega.size(); ++i) t += omega[i] * x[i];
    return relu_k(t, K);
  }
};

/// d = 1: directions {+1, -1}; d = 2: `directions` equi-angular unit
/// vectors. Offsets -1 + 2i/(offsets-1).
inline std::vector<DictionaryElement> make_dictionary(std::size_t d, int K, int directions = 64, int offsets = 33) {
  if (d != 1 && d != 2) throw DomainError("dictionary supports d = 1 or 2");
  if (offsets < 2) throw DomainError("need at least two offsets");
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs = {{1.0}, {-1.0}};
  } else {
    for (int i = 0; i < directions; ++i) {
      const double th = 2.0 * std::numbers::pi * i / directions;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
  }
  std::vector<DictionaryElement> out;
  for (const auto& w : dirs)
    for (int i = 0; i < offsets; ++i) out.push_back({w, -1.0 + 2.0 * i / (offsets - 1), K});
  return out;
}

/// Halton points (bases 2, 3) mapped to [-1,1]^d, restricted to the ball.
inline std::vector<std::vector<double>> ball_samples(std::size_t d, std::size_t count) {
  static const unsigned bases[] = {2, 3};
  if (d < 1 || d > 2) throw DomainError("ball samples support d = 1 or 2");
  std::vector<std::vector<double>> pts;
  for (unsigned long idx = 1; pts.size() < count; ++idx) {
    std::vector<double> x(d);
    double n2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double f = 1.0, r = 0.0;
      for (unsigned long n = idx; n > 0; n /= bases[i]) {
        f /= bases[i];
        r += f * static_cast<double>(n % bases[i]);
      }
      x[i] = 2.0 * r - 1.0;
      n2 += x[i] * x[i];
    }
    if (n2 <= 1.0) pts.push_back(std::move(x));
  }
  return pts;
}

struct GreedyStep {
  std::size_t width = 0;
  double rms_error = 0.0;
  Network network;
};

struct GreedyResult {
  std::vector<GreedyStep> steps;
  std::vector<std::string> events;  // dropped elements after rank loss
};

inline Network shallow_from_elements(const std::vector<DictionaryElement>& els, const Eigen::VectorXd& coef,
                                     std::size_t d, int K) {
  Layer l(els.size(), d);
  ParamVector c(els.size());
  for (std::size_t r = 0; r < els.size(); ++r) {
    for (std::size_t i = 0; i < d; ++i) l.weights.set(r, i, Rational::from_double(els[r].omega[i]));
    l.bias.set(r, Rational::from_double(els[r].offset));
    c.set(r, Rational::from_double(coef[static_cast<Eigen::Index>(r)]));
  }
  return Network(NetworkKind::shallow, K, d, {std::move(l)}, std::move(c));
}

/// Runs the orthogonal greedy algorithm up to max(widths) selections and
/// records the fitted network at every width in the schedule. Errors are
/// root-mean-square over the samples.
inline GreedyResult greedy_fit(const std::vector<std::vector<double>>& samples, const std::vector<double>& values,
                               const std::vector<DictionaryElement>& dict, std::vector<std::size_t> widths) {
  if (samples.size() != values.size() || samples.empty()) throw DomainError("samples and values must match");
  if (dict.empty()) throw DomainError("empty dictionary");
  std::sort(widths.begin(), widths.end());
  if (widths.empty() || widths.front() < 1 || widths.back() > 64) throw DomainError("widths must lie in [1, 64]");
  const std::size_t d = samples.front().size();
  const int K = dict.front().K;
  const auto N = static_cast<Eigen::Index>(samples.size());
  const auto D = static_cast<Eigen::Index>(dict.size());

  Eigen::MatrixXd G(N, D);
  for (Eigen::Index j = 0; j < D; ++j)
    for (Eigen::Index i = 0; i < N; ++i) G(i, j) = dict[static_cast<std::size_t>(j)](samples[static_cast<std::size_t>(i)]);
  Eigen::VectorXd norms = G.colwise().norm().transpose();
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), N);

  GreedyResult res;
  std::vector<bool> excluded(static_cast<std::size_t>(D), false);
  std::vector<Eigen::Index> chosen;
  Eigen::VectorXd r = y, coef;
  std::size_t next_width = 0;
  while (chosen.size() < widths.back()) {
    Eigen::VectorXd corr = G.transpose() * r;
    Eigen::Index best = -1;
    double best_v = 0.0;
    for (Eigen::Index j = 0; j < D; ++j) {
      if (excluded[static_cast<std::size_t>(j)] || norms[j] == 0.0) continue;
      const double v = std::abs(corr[j]) / norms[j];
      if (best < 0 || v > best_v) {
        best = j;
        best_v = v;
      }
    }
    if (best < 0) break;
    chosen.push_back(best);
    Eigen::MatrixXd S(N, static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t c = 0; c < chosen.size(); ++c) S.col(static_cast<Eigen::Index>(c)) = G.col(chosen[c]);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(S);
    excluded[static_cast<std::size_t>(best)] = true;
    if (qr.rank() < static_cast<Eigen::Index>(chosen.size())) {
      chosen.pop_back();
      res.events.push_back("rank loss at width " + std::to_string(chosen.size() + 1) + ": dropped element " +
                           std::to_string(best));
      continue;
    }
    coef = qr.solve(y);
    r = y - S * coef;
    while (next_width < widths.size() && widths[next_width] == chosen.size()) {
      std::vector<DictionaryElement> els;
      for (auto c : chosen) els.push_back(dict[static_cast<std::size_t>(c)]);
      res.steps.push_back({chosen.size(), r.norm() / std::sqrt(static_cast<double>(N)),
                           shallow_from_elements(els, coef, d, K)});
      ++next_width;
    }
  }
  return res;
}

}  // namespace reluk::approx
