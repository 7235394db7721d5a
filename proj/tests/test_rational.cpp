#include <gtest/gtest.h>

#include "reluk/linear_algebra.hpp"
#include "reluk/random.hpp"
#include "reluk/rational.hpp"

using reluk::Rational;

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(Rational::parse("3").str(), "3");
  EXPECT_EQ(Rational::parse("-3/4").str(), "-3/4");
  EXPECT_EQ(Rational::parse("2/4").str(), "1/2");
  EXPECT_EQ(Rational::parse("0/7").str(), "0");
  EXPECT_EQ(Rational::parse("-6/3").str(), "-2");
}

TEST(Rational, ParseRejectsMalformed) {
  for (const char* s : {"", "1/0", "a", "1/", "/2", "1.5", "--1", "1/-2", " 1", "+1"})
    EXPECT_THROW(Rational::parse(s), reluk::ParseError) << s;
}

TEST(Rational, Arithmetic) {
  Rational a(1, 3), b(mpz_class(-5), mpz_class(6));
  EXPECT_EQ(a + b, Rational(mpz_class(-1), mpz_class(2)));
  EXPECT_EQ(a * b, Rational(mpz_class(-5), mpz_class(18)));
  EXPECT_EQ(a / b, Rational(mpz_class(-2), mpz_class(5)));
  EXPECT_THROW(a / Rational(0), reluk::DomainError);
  EXPECT_TRUE(b < a);
  EXPECT_EQ(b.abs(), Rational(mpz_class(5), mpz_class(6)));
}

TEST(Rational, Powers) {
  EXPECT_EQ(Rational(mpz_class(2), mpz_class(3)).pow(3), Rational(mpz_class(8), mpz_class(27)));
  EXPECT_EQ(Rational(3).pow_signed(-6), Rational(mpz_class(1), mpz_class(729)));
  EXPECT_EQ(Rational(-2).pow(0), Rational(1));
  EXPECT_THROW(Rational(0).pow_signed(-1), reluk::DomainError);
}

TEST(Rational, FromDoubleIsExact) {
  EXPECT_EQ(Rational::from_double(0.5), Rational(mpz_class(1), mpz_class(2)));
  EXPECT_EQ(Rational::from_double(-0.75), Rational(mpz_class(-3), mpz_class(4)));
  // 0.1 is not 1/10 in binary.
  Rational tenth = Rational::from_double(0.1);
  EXPECT_NE(tenth, Rational(mpz_class(1), mpz_class(10)));
  EXPECT_EQ(tenth.to_double(), 0.1);
  EXPECT_EQ(tenth.denominator(), mpz_class(1) << 55);
  EXPECT_THROW(Rational::from_double(std::nan("")), reluk::DomainError);
}

TEST(Rational, HalvesAndBinomials) {
  EXPECT_EQ(reluk::floor_half(5), 2);
  EXPECT_EQ(reluk::ceil_half(5), 3);
  EXPECT_EQ(reluk::ceil_half(4), 2);
  EXPECT_EQ(reluk::binomial(6, 2), 15);
  EXPECT_EQ(reluk::binomial(64, 32), mpz_class("1832624140942590534"));
}

TEST(Rational, RoundTripProperty) {
  reluk::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    Rational a = rng.rational(1000, 50), b = rng.rational(1000, 50);
    EXPECT_EQ((a + b) - b, a);
    if (!b.is_zero()) EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(Rational::parse(a.str()), a);
  }
}

// ---------------------------------------------------------------------------
// Exact linear algebra

using reluk::ExactMatrix;
using reluk::ExactVector;

TEST(ExactSolve, Identity) {
  ExactVector v{1, 2, 3};
  EXPECT_EQ(reluk::solve_linear_exact(ExactMatrix::identity(3), v), v);
}

TEST(ExactSolve, TransposedSystemOfDegreeTwo) {
  ExactMatrix m{{1, 1, 1}, {-2, 0, 2}, {1, 0, 1}};
  ExactVector x = reluk::solve_linear_exact(m, {0, 1, 0});
  EXPECT_EQ(x, (ExactVector{Rational(mpz_class(-1), mpz_class(4)), 0, Rational(mpz_class(1), mpz_class(4))}));
}

TEST(ExactSolve, SingularSystem) {
  ExactMatrix m{{1, 1}, {1, 1}};
  try {
    reluk::solve_linear_exact(m, {1, 2});
    FAIL() << "expected singular system";
  } catch (const reluk::SingularSystem& e) {
    EXPECT_STREQ(e.what(), "singular system");
  }
}

TEST(ExactSolve, RandomRoundTrip) {
  reluk::Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = static_cast<std::size_t>(rng.integer(1, 8));
    ExactMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m(r, c) = rng.rational(7, 3);
    // Diagonal shift keeps the draw invertible with overwhelming probability;
    // a singular draw is skipped rather than counted.
    for (std::size_t i = 0; i < n; ++i) m(i, i) += Rational(10);
    ExactVector x(n);
    for (auto& v : x) v = rng.rational(9, 5);
    EXPECT_EQ(reluk::solve_linear_exact(m, m * x), x);
  }
}
