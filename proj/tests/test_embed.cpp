#include <gtest/gtest.h>

#include "reluk/certifier.hpp"
#include "reluk/random.hpp"
#include "reluk/shallow_embed.hpp"

using reluk::Layer;
using reluk::Network;
using reluk::NetworkKind;
using reluk::ParamVector;
using reluk::Polynomial;
using reluk::Rational;

namespace {

Rational q(long p, long d) { return Rational(mpz_class(p), mpz_class(d)); }

Network single_unit(int K) {
  Layer l(1, 1);
  l.weights.set(0, 0, 1);
  l.bias.set(0, 0);
  ParamVector c(1);
  c.set(0, 1);
  return Network(NetworkKind::shallow, K, 1, {l}, c);
}

}  // namespace

TEST(IdentityCombination, SmallCases) {
  auto id2 = reluk::identity_combination(2);
  EXPECT_EQ(id2.shifts, (std::vector<long>{-1, 0, 1}));
  EXPECT_EQ(id2.a, (reluk::ExactVector{q(-1, 4), 0, q(1, 4)}));
  auto id1 = reluk::identity_combination(1);
  EXPECT_EQ(id1.shifts, (std::vector<long>{0, 1}));
  EXPECT_EQ(id1.a, (reluk::ExactVector{1, 0}));
}

TEST(IdentityCombination, ReproducesIdentity) {
  const Polynomial y = Polynomial::monomial({1});
  for (int k = 1; k <= 12; ++k) {
    auto id = reluk::identity_combination(k);
    Polynomial s(1);
    for (int t = 0; t <= k; ++t) s.add_scaled(reluk::multinomial_expand(std::vector<long>{1}, id.shifts[t], k), id.a[t]);
    EXPECT_EQ(s, y) << k;
    for (const auto& a : id.a) EXPECT_LE(a.abs(), (Rational(k) / 2 + 1).pow(4));
  }
}

TEST(EmbedShallow, ParamCountFormula) {
  EXPECT_EQ(reluk::embed_param_count(2, 2, 1, 1), 19u);
  EXPECT_EQ(reluk::embed_param_count(2, 1, 1, 1), 7u);
  EXPECT_EQ(reluk::embed_param_count(3, 3, 2, 2), 84u);
}

TEST(EmbedShallow, StructuralCountMatchesBuiltNetwork) {
  reluk::Rng rng(30);
  for (int k : {2, 3})
    for (int L = 1; L <= 3; ++L)
      for (int level = 1; level <= L; ++level)
        for (std::size_t d : {1, 2}) {
          const std::size_t n = static_cast<std::size_t>(rng.integer(1, 4));
          Network f = reluk::random_shallow_network(rng, reluk::int_power(k, level), d, n);
          Network g = reluk::embed_shallow(f, k, L);
          EXPECT_EQ(reluk::count_parameters(g).nonzero, reluk::embed_structural_count(k, L, level, n, d));
          EXPECT_EQ(g.widths(), std::vector<std::size_t>(static_cast<std::size_t>(L), 2 * (k + 1) * n));
        }
}

TEST(EmbedShallow, SingleQuarticUnit) {
  Network g = reluk::embed_shallow(single_unit(4), 2, 2);
  reluk::Rng rng(9);
  for (const auto& x : reluk::random_ball_points(rng, 1, 100)) {
    const Rational want = x[0].sign() > 0 ? x[0].pow(4) : Rational(0);
    EXPECT_EQ(reluk::evaluate_exact(g, x), want);
  }
}

TEST(EmbedShallow, ZeroOutput) {
  Network f = single_unit(2);
  f.output() = ParamVector(1);
  Network g = reluk::embed_shallow(f, 2, 3);
  for (const auto& c : g.output().values) EXPECT_TRUE(c.is_zero());
  reluk::Rng rng(1);
  for (const auto& x : reluk::random_ball_points(rng, 1, 20)) EXPECT_TRUE(reluk::evaluate_exact(g, x).is_zero());
}

TEST(EmbedShallow, NotEmbeddable) {
  EXPECT_THROW(reluk::embed_shallow(single_unit(5), 2, 2), reluk::NotEmbeddable);
  EXPECT_THROW(reluk::embed_shallow(single_unit(8), 2, 2), reluk::NotEmbeddable);
  EXPECT_THROW(reluk::embed_shallow(single_unit(1), 2, 2), reluk::NotEmbeddable);
  try {
    reluk::embed_shallow(single_unit(5), 2, 2);
  } catch (const reluk::NotEmbeddable& e) {
    EXPECT_NE(std::string(e.what()).find("exponent not embeddable"), std::string::npos);
  }
}

TEST(EmbedShallow, RandomExactBoundedCertified) {
  reluk::Rng rng(77);
  for (int k : {2, 3})
    for (int level = 1; level <= 3; ++level)
      for (std::size_t d : {1, 2}) {
        const std::size_t n = static_cast<std::size_t>(rng.integer(1, 5));
        Network f = reluk::random_shallow_network(rng, reluk::int_power(k, level), d, n);
        Network g = reluk::embed_shallow(f, k, 3);
        for (const auto& x : reluk::random_ball_points(rng, d, 100))
          EXPECT_EQ(reluk::evaluate_exact(g, x), reluk::evaluate_exact(f, x));
        const auto fb = reluk::check_bounds(f, 0, 0);
        const Rational B = fb.max_weight, M = fb.max_output;
        EXPECT_TRUE(reluk::check_bounds(g, reluk::embed_weight_bound(k, B), reluk::embed_output_bound(k, M)).pass);
        EXPECT_EQ(reluk::certify_equal(g, f).status, reluk::CertStatus::proven);
      }
}

TEST(EmbedShallow, ContractExpandRoundTrip) {
  // One block read back through the identity weights gives y for any real y.
  for (int k = 2; k <= 5; ++k) {
    auto id = reluk::identity_combination(k);
    const Rational sign = k % 2 == 0 ? Rational(1) : Rational(-1);
    for (Rational y : {q(-7, 3), Rational(0), q(1, 5), Rational(4)}) {
      Rational back;
      for (int t = 0; t <= k; ++t)
        back += id.a[t] * (reluk::relu_k(y + Rational(id.shifts[t]), k) +
                           sign * reluk::relu_k(-(y + Rational(id.shifts[t])), k));
      EXPECT_EQ(back, y);
    }
  }
}
