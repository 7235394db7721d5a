#include <gtest/gtest.h>

#include <cmath>

#include "reluk/certifier.hpp"
#include "reluk/deep_compile.hpp"
#include "reluk/random.hpp"

using reluk::Network;
using reluk::Polynomial;
using reluk::Rational;

namespace {

Rational q(long p, long d) { return Rational(mpz_class(p), mpz_class(d)); }

}  // namespace

TEST(CompileDeep, ExpectedCounts) {
  auto c = reluk::expected_deep_counts(2, 2, 1);
  EXPECT_EQ(c.widths, (std::vector<std::size_t>{10, 10}));
  EXPECT_EQ(c.nonzero, 50u);
  c = reluk::expected_deep_counts(3, 1, 1);
  EXPECT_EQ(c.widths, (std::vector<std::size_t>{8}));
  EXPECT_EQ(c.nonzero, 24u);
  c = reluk::expected_deep_counts(2, 3, 2);
  EXPECT_EQ(c.widths, (std::vector<std::size_t>(3, 162)));
  EXPECT_EQ(c.nonzero, 1296u);
}

TEST(CompileDeep, QuarticAtHalf) {
  Network n = reluk::compile_deep(Polynomial::monomial({4}), 2, 2, 1);
  EXPECT_EQ(reluk::evaluate_exact(n, {q(1, 2)}), q(1, 16));
  EXPECT_EQ(reluk::count_parameters(n).nonzero, 50u);
  EXPECT_EQ(n.widths(), (std::vector<std::size_t>{10, 10}));
}

TEST(CompileDeep, HiddenScale) {
  EXPECT_EQ(reluk::hidden_scale_exponent(2, 2), 6);
  EXPECT_EQ(reluk::hidden_scale_exponent(3, 3), 3 + 9 + 27);
  Network one = reluk::compile_deep(Polynomial::monomial({4}), 2, 2, 1);
  Network three = reluk::compile_deep(Polynomial::monomial({4}), 2, 2, 3);
  for (std::size_t r = 0; r < 10; ++r) EXPECT_EQ(three.output()[r], one.output()[r] / 729);
  reluk::Rng rng(4);
  for (const auto& x : reluk::random_ball_points(rng, 1, 50)) {
    EXPECT_EQ(reluk::evaluate_exact(three, x), x[0].pow(4));
    // Layer-2 activations carry the 3^6 scale relative to B = 1.
    auto t1 = reluk::forward_trace(one, x), t3 = reluk::forward_trace(three, x);
    for (std::size_t r = 0; r < 10; ++r) EXPECT_EQ(t3[1][r], 729 * t1[1][r]);
  }
}

TEST(CompileDeep, OutputBound) {
  EXPECT_EQ(reluk::deep_M_bound(Polynomial::monomial({4}), 2, 2, 1), Rational(6561));
  Polynomial x = Polynomial::monomial({1});
  EXPECT_EQ(reluk::deep_M_bound(x, 2, 1, 1), reluk::shallow_M_bound(x, 2, 1));
}

TEST(CompileDeep, Errors) {
  EXPECT_THROW(reluk::compile_deep(Polynomial::monomial({5}), 2, 2, 1), reluk::DegreeExceedsBudget);
  EXPECT_THROW(reluk::compile_deep(Polynomial::monomial({1}), 2, 0, 1), reluk::DomainError);
}

TEST(CompileDeep, RandomProperties) {
  reluk::Rng rng(23);
  for (int k : {2, 3})
    for (int L : {1, 2, 3})
      for (std::size_t d : {1, 2}) {
        const int K = reluk::int_power(k, L);
        if (K * static_cast<int>(d) > 18) continue;
        Polynomial p = reluk::random_polynomial(rng, d, K);
        const Rational B = L == 2 ? q(1, 2) : Rational(1);
        Network n = reluk::compile_deep(p, k, L, B);
        EXPECT_EQ(reluk::count_parameters(n).nonzero, reluk::expected_deep_counts(k, L, d).nonzero);
        EXPECT_TRUE(reluk::check_bounds(n, B, reluk::deep_M_bound(p, k, L, B)).pass);
        EXPECT_EQ(reluk::certify_equal(n, p).status, reluk::CertStatus::proven);
        for (const auto& x : reluk::random_ball_points(rng, d, 20))
          for (const auto& h : reluk::forward_trace(n, x))
            for (const auto& v : h) EXPECT_GE(v.sign(), 0);
      }
}

TEST(CompileDeep, DepthOneMatchesShallow) {
  reluk::Rng rng(6);
  Polynomial p = reluk::random_polynomial(rng, 2, 3);
  Network deep = reluk::compile_deep(p, 3, 1, 1), shallow = reluk::compile_shallow(p, 3, 1);
  for (const auto& x : reluk::random_ball_points(rng, 2, 100))
    EXPECT_EQ(reluk::evaluate_exact(deep, x), reluk::evaluate_exact(shallow, x));
}

TEST(CompileDeep, FloatEvaluationModerateDegree) {
  reluk::Rng rng(12);
  Polynomial p = reluk::random_polynomial(rng, 2, 4);
  Network n = reluk::compile_deep(p, 2, 2, 1);
  reluk::FloatNetwork fn(n);
  for (const auto& x : reluk::random_ball_points(rng, 2, 500)) {
    const double xf[2] = {x[0].to_double(), x[1].to_double()};
    const double want = p.evaluate(x).to_double();
    EXPECT_LE(std::abs(fn(xf) - want), 1e-9 * std::max(1.0, std::abs(want)));
  }
}
