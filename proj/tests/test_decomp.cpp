#include <gtest/gtest.h>

#include "reluk/monomial_decomp.hpp"
#include "reluk/random.hpp"

using reluk::DecompositionTable;
using reluk::MultiIndex;
using reluk::Rational;

namespace {

Rational q(long p, long d) { return Rational(mpz_class(p), mpz_class(d)); }

Rational entry(const DecompositionTable& t, std::vector<long> key) {
  auto it = t.entries.find(key);
  return it == t.entries.end() ? Rational(0) : it->second;
}

void expect_valid(const DecompositionTable& t) {
  EXPECT_TRUE(reluk::verify_table(t).is_zero()) << t.alpha.str();
  const Rational bound = t.coefficient_bound();
  const long lo = -reluk::floor_half(t.degree), hi = t.degree - reluk::floor_half(t.degree);
  for (const auto& [key, c] : t.entries) {
    EXPECT_LE(c.abs(), bound);
    for (long v : key) {
      EXPECT_GE(v, lo);
      EXPECT_LE(v, hi);
    }
  }
}

}  // namespace

TEST(Decompose, SingleVariable) {
  auto t = reluk::decompose_monomial({3});
  ASSERT_EQ(t.entries.size(), 1u);
  EXPECT_EQ(entry(t, {}), Rational(1));
  EXPECT_TRUE(reluk::verify_table(t).is_zero());
}

TEST(Decompose, ProductOfTwo) {
  auto t = reluk::decompose_monomial({1, 1});
  EXPECT_EQ(entry(t, {-1}), q(-1, 4));
  EXPECT_EQ(entry(t, {0}), Rational(0));
  EXPECT_EQ(entry(t, {1}), q(1, 4));
  EXPECT_TRUE(reluk::verify_table(t).is_zero());
}

TEST(Decompose, SquareOfFirst) {
  auto t = reluk::decompose_monomial({2, 0});
  EXPECT_EQ(entry(t, {0}), Rational(1));
  EXPECT_EQ(entry(t, {-1}), Rational(0));
  EXPECT_EQ(entry(t, {1}), Rational(0));
}

TEST(Decompose, FormsStartWithUnitSlope) {
  auto t = reluk::decompose_inhomogeneous({1, 0}, 2);
  for (const auto& [key, c] : t.entries) {
    auto f = t.form(key);
    EXPECT_EQ(f.slopes.front(), 1);
    EXPECT_EQ(f.slopes.size(), 2u);
  }
  expect_valid(t);
}

TEST(Decompose, InhomogeneousLinear) {
  auto t = reluk::decompose_inhomogeneous({1}, 2);
  EXPECT_EQ(entry(t, {-1}), q(-1, 4));
  EXPECT_EQ(entry(t, {0}), Rational(0));
  EXPECT_EQ(entry(t, {1}), q(1, 4));
  EXPECT_TRUE(reluk::verify_table(t).is_zero());
}

TEST(Decompose, InhomogeneousConstant) {
  // 1 = 1/2 (x-1)^2 - x^2 + 1/2 (x+1)^2
  auto t = reluk::decompose_inhomogeneous({0}, 2);
  EXPECT_EQ(entry(t, {-1}), q(1, 2));
  EXPECT_EQ(entry(t, {0}), Rational(-1));
  EXPECT_EQ(entry(t, {1}), q(1, 2));
  EXPECT_TRUE(reluk::verify_table(t).is_zero());
}

TEST(Decompose, Errors) {
  EXPECT_THROW(reluk::decompose_inhomogeneous({2, 1}, 2), reluk::DegreeExceedsBudget);
  EXPECT_THROW(reluk::decompose_monomial({0, 0}), reluk::DegreeExceedsBudget);
}

TEST(Decompose, PerturbedTableLeavesResidual) {
  auto t = reluk::decompose_monomial({1, 1});
  t.entries.begin()->second += 1;
  EXPECT_FALSE(reluk::verify_table(t).is_zero());
}

TEST(Decompose, ExhaustiveSmallBox) {
  for (std::size_t d = 1; d <= 3; ++d)
    for (int n = 1; n <= (d == 3 ? 6 : 9); ++n)
      for (const auto& a : reluk::monomials_up_to(d, n))
        if (a.degree() == n) expect_valid(reluk::decompose_monomial(a));
}

TEST(Decompose, SupportPerLevel) {
  // At the last level only the j+1 ... n+1 slopes carried by bhat can be
  // nonzero; for x1^n every slope except 0 vanishes.
  auto t = reluk::decompose_monomial({5, 0, 0});
  std::size_t nz = 0;
  for (const auto& [k, c] : t.entries) nz += !c.is_zero();
  EXPECT_EQ(nz, 1u);
  EXPECT_EQ(entry(t, {0, 0}), Rational(1));
}

TEST(Decompose, InhomogeneousRandom) {
  reluk::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = static_cast<std::size_t>(rng.integer(1, 3));
    const int k = static_cast<int>(rng.integer(2, 5));
    std::vector<int> a(d);
    int left = static_cast<int>(rng.integer(0, k));
    for (auto& v : a) {
      v = static_cast<int>(rng.integer(0, left));
      left -= v;
    }
    expect_valid(reluk::decompose_inhomogeneous(MultiIndex(a), k));
  }
}
