#include <gtest/gtest.h>

#include <cmath>

#include "reluk/deep_compile.hpp"
#include "reluk/random.hpp"

using reluk::ExactVector;
using reluk::Layer;
using reluk::Network;
using reluk::NetworkKind;
using reluk::ParamVector;
using reluk::Rational;

namespace {

Rational q(long p, long d) { return Rational(mpz_class(p), mpz_class(d)); }

Network unit_net() {
  Layer l(1, 1);
  l.weights.set(0, 0, 1);
  l.bias.set(0, 0);
  ParamVector c(1);
  c.set(0, 1);
  return Network(NetworkKind::shallow, 2, 1, {l}, c);
}

reluk::Polynomial poly_x() {
  reluk::Polynomial p(1);
  p.add_term({1}, 1);
  return p;
}

}  // namespace

TEST(Network, ReluK) {
  EXPECT_EQ(reluk::relu_k(Rational(0), 1), Rational(0));
  EXPECT_EQ(reluk::relu_k(Rational(0), 3), Rational(0));
  EXPECT_EQ(reluk::relu_k(q(-1, 2), 2), Rational(0));
  EXPECT_EQ(reluk::relu_k(q(1, 2), 3), q(1, 8));
  EXPECT_EQ(reluk::relu_k(-0.5, 2), 0.0);
}

TEST(Network, SingleUnit) {
  Network n = unit_net();
  EXPECT_EQ(reluk::evaluate_exact(n, {q(-1, 2)}), Rational(0));
  EXPECT_EQ(reluk::evaluate_exact(n, {q(1, 2)}), q(1, 4));
  EXPECT_THROW(reluk::evaluate_exact(n, {1, 2}), reluk::ShapeError);
}

TEST(Network, CompiledIdentityAtPoint) {
  Network n = reluk::compile_shallow(poly_x(), 2, 1);
  EXPECT_EQ(reluk::evaluate_exact(n, {q(3, 7)}), q(3, 7));
}

TEST(Network, ShapeValidation) {
  Layer l(2, 3);
  ParamVector c(1);
  EXPECT_THROW(Network(NetworkKind::shallow, 2, 2, {l}, ParamVector(2)), reluk::ShapeError);
  EXPECT_THROW(Network(NetworkKind::shallow, 2, 3, {l}, c), reluk::ShapeError);
  EXPECT_THROW(Network(NetworkKind::shallow, 2, 3, {l, Layer(2, 2)}, ParamVector(2)), reluk::ShapeError);
  EXPECT_THROW(Network(NetworkKind::deep, 0, 3, {l}, ParamVector(2)), reluk::DomainError);
}

TEST(Network, ParameterCounts) {
  Network s = reluk::compile_shallow(poly_x(), 2, 1);
  EXPECT_EQ(reluk::count_parameters(s).dense, 18u);
  Network d = reluk::compile_deep(reluk::Polynomial::monomial({4}), 2, 2, 1);
  EXPECT_EQ(reluk::count_parameters(d).nonzero, 50u);

  Network zero(NetworkKind::deep, 2, 2, {Layer(3, 2), Layer(3, 3)}, ParamVector(ExactVector(3)));
  EXPECT_EQ(reluk::count_parameters(zero).nonzero, 0u);
  EXPECT_EQ(reluk::count_parameters(zero).dense, 3u * 3 + 3u * 4 + 3);
}

TEST(Network, Bounds) {
  Network s = reluk::compile_shallow(poly_x(), 2, 1);
  auto r = reluk::check_bounds(s, 1, 64);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.max_output, q(1, 4));
  EXPECT_EQ(r.max_weight, Rational(1));
  EXPECT_FALSE(reluk::check_bounds(s, 1, q(1, 8)).pass);

  Network zero(NetworkKind::shallow, 2, 1, {Layer(1, 1)}, ParamVector(1));
  EXPECT_TRUE(reluk::check_bounds(zero, q(1, 100), q(1, 100)).pass);
}

TEST(Network, FloatMatchesExact) {
  reluk::Rng rng(21);
  for (int k : {2, 3})
    for (int L : {1, 2}) {
      if (reluk::int_power(k, L) > 9) continue;
      auto p = reluk::random_polynomial(rng, 1, reluk::int_power(k, L));
      Network n = reluk::compile_deep(p, k, L, 1);
      reluk::FloatNetwork fn(n);
      for (const auto& x : reluk::random_ball_points(rng, 1, 200)) {
        const double exact = reluk::evaluate_exact(n, x).to_double();
        const double xf = x[0].to_double();
        const double got = fn(std::span<const double>(&xf, 1));
        EXPECT_LE(std::abs(got - exact), 1e-10 * std::max(1.0, std::abs(exact))) << k << " " << L;
      }
    }
}

TEST(Network, PruneKeepsFunction) {
  reluk::Polynomial p(2);
  p.add_term({1, 1}, 1);
  Network full = reluk::compile_shallow(p, 2, 1);
  Network pruned = reluk::prune_dead_units(full);
  EXPECT_LT(pruned.layers()[0].width(), full.layers()[0].width());
  reluk::Rng rng(1);
  for (const auto& x : reluk::random_ball_points(rng, 2, 50))
    EXPECT_EQ(reluk::evaluate_exact(pruned, x), reluk::evaluate_exact(full, x));

  Network deep = reluk::compile_deep(reluk::Polynomial::monomial({4}), 2, 2, 1);
  Network dp = reluk::prune_dead_units(deep);
  EXPECT_LT(reluk::count_parameters(dp).nonzero, 50u);
  for (const auto& x : reluk::random_ball_points(rng, 1, 50))
    EXPECT_EQ(reluk::evaluate_exact(dp, x), reluk::evaluate_exact(deep, x));
}
