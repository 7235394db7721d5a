#include <gtest/gtest.h>

#include "reluk/certifier.hpp"
#include "reluk/random.hpp"
#include "reluk/shallow_embed.hpp"

using reluk::CertStatus;
using reluk::Network;
using reluk::Polynomial;
using reluk::Rational;

namespace {

Rational q(long p, long d) { return Rational(mpz_class(p), mpz_class(d)); }

Polynomial x1x2() {
  Polynomial p(2);
  p.add_term({1, 1}, 1);
  return p;
}

}  // namespace

TEST(Certifier, ReduceShallowProduct) {
  EXPECT_EQ(reluk::reduce_to_polynomial(reluk::compile_shallow(x1x2(), 2, 1)), x1x2());
}

TEST(Certifier, ReduceDeepQuartic) {
  Polynomial x4 = Polynomial::monomial({4});
  EXPECT_EQ(reluk::reduce_to_polynomial(reluk::compile_deep(x4, 2, 2, 1)), x4);
}

TEST(Certifier, BrokenPairIsNotRecognized) {
  Network n = reluk::compile_shallow(x1x2(), 2, 1);
  // Find a pair with nonzero output and negate its second weight.
  for (std::size_t u = 0; u < n.output().size(); u += 2)
    if (!n.output()[u].is_zero()) {
      n.output().set(u + 1, -n.output()[u + 1]);
      break;
    }
  EXPECT_THROW(reluk::reduce_to_polynomial(n), reluk::NotRecognized);
  EXPECT_EQ(reluk::certify_equal(n, x1x2()).status, CertStatus::not_recognized);
}

TEST(Certifier, PlantedDiscrepancy) {
  reluk::Rng rng(40);
  Polynomial p = reluk::random_polynomial(rng, 2, 2);
  Polynomial target = p;
  target.add_term({1, 0}, 1);
  auto rep = reluk::certify_equal(reluk::compile_shallow(p, 2, 1), target);
  EXPECT_EQ(rep.status, CertStatus::refuted);
  EXPECT_EQ(rep.residual, Polynomial::monomial({1, 0}, -1));
  EXPECT_GT(rep.point_check.failures, 0u);
}

TEST(Certifier, ProvenReportInvariant) {
  reluk::Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    Polynomial p = reluk::random_polynomial(rng, 2, 3);
    auto rep = reluk::certify_equal(reluk::compile_shallow(p, 3, 1), p);
    ASSERT_EQ(rep.status, CertStatus::proven);
    EXPECT_TRUE(rep.residual.is_zero());
    EXPECT_EQ(rep.point_check.failures, 0u);
    EXPECT_EQ(rep.point_check.count, reluk::kCertificatePoints);
    EXPECT_FALSE(rep.checked_structure.empty());
  }
}

TEST(Certifier, EmbeddingAgainstShallowTarget) {
  reluk::Rng rng(42);
  Network f = reluk::random_shallow_network(rng, 4, 2, 3);
  auto rep = reluk::certify_equal(reluk::embed_shallow(f, 2, 3), f);
  EXPECT_EQ(rep.status, CertStatus::proven);
  bool saw_identity = false;
  for (const auto& s : rep.checked_structure) saw_identity |= s.find("identity-combination") != std::string::npos;
  EXPECT_TRUE(saw_identity);

  Network other = f;
  other.output().set(0, f.output()[0] + 1);
  EXPECT_EQ(reluk::certify_equal(reluk::embed_shallow(f, 2, 3), other).status, CertStatus::refuted);
}

TEST(Certifier, SoundnessOnManyPoints) {
  reluk::Rng rng(43);
  Polynomial p = reluk::random_polynomial(rng, 2, 4);
  Network n = reluk::compile_deep(p, 2, 2, 1);
  ASSERT_EQ(reluk::certify_equal(n, p).status, CertStatus::proven);
  for (const auto& x : reluk::random_ball_points(rng, 2, 2000)) EXPECT_EQ(reluk::evaluate_exact(n, x), p.evaluate(x));
}

TEST(Certifier, PointsAreInBallAndDeterministic) {
  auto a = reluk::certificate_points(3, 128), b = reluk::certificate_points(3, 128);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 128u);
  for (const auto& x : a) {
    Rational n2;
    for (const auto& v : x) n2 += v * v;
    EXPECT_LE(n2, Rational(1));
  }
  EXPECT_EQ(reluk::certificate_points(1, 1)[0], reluk::ExactVector{Rational(0)});
}

TEST(Certifier, MutationsNeverProven) {
  reluk::Rng rng(44);
  int checked = 0;
  while (checked < 40) {
    Polynomial p = reluk::random_polynomial(rng, 1, 4);
    Network n = reluk::compile_deep(p, 2, 2, 1);
    // Perturb one output weight or one first-layer parameter.
    Network m = n;
    const std::size_t u = static_cast<std::size_t>(rng.integer(0, static_cast<long>(n.output().size()) - 1));
    const Rational delta = rng.rational(5, 1) + q(1, 7);
    if (rng.integer(0, 1))
      m.output().set(u, n.output()[u] + delta);
    else
      m.layers()[0].bias.set(u, n.layers()[0].bias[u] + delta);
    bool differs = false;
    for (const auto& x : reluk::random_ball_points(rng, 1, 200))
      if (reluk::evaluate_exact(m, x) != reluk::evaluate_exact(n, x)) {
        differs = true;
        break;
      }
    if (!differs) continue;
    ++checked;
    EXPECT_NE(reluk::certify_equal(m, p).status, CertStatus::proven);
  }
}
