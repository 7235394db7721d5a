#include <gtest/gtest.h>

#include "reluk/io.hpp"
#include "reluk/random.hpp"
#include "reluk/shallow_embed.hpp"

using reluk::Network;
using reluk::Polynomial;

TEST(Io, RoundTripSynthesized) {
  reluk::Rng rng(50);
  for (int trial = 0; trial < 6; ++trial) {
    Polynomial p = reluk::random_polynomial(rng, 2, 4);
    Network n = reluk::compile_deep(p, 2, 2, reluk::Rational(mpz_class(1), mpz_class(3)));
    n.set_declared_bounds(reluk::DeclaredBounds{1, reluk::deep_M_bound(p, 2, 2, 1)});
    const std::string text = reluk::serialize(n);
    Network back = reluk::deserialize(text);
    EXPECT_EQ(back, n);
    EXPECT_EQ(reluk::serialize(back), text);
  }
  Network s = reluk::compile_shallow(Polynomial::monomial({1}), 2, 1);
  Network e = reluk::embed_shallow(reluk::random_shallow_network(rng, 2, 1, 2), 2, 2);
  EXPECT_EQ(reluk::deserialize(reluk::serialize(s)), s);
  EXPECT_EQ(reluk::deserialize(reluk::serialize(e)), e);
}

TEST(Io, PolynomialRoundTrip) {
  reluk::Rng rng(51);
  Polynomial p = reluk::random_polynomial(rng, 3, 3);
  EXPECT_EQ(reluk::polynomial_from_json(reluk::to_json(p)), p);
}

namespace {

std::string error_path(const std::string& doc) {
  try {
    reluk::deserialize(doc);
  } catch (const reluk::ParseError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST(Io, RejectsMalformedNetworks) {
  const std::string ok = R"({"kind":"shallow","k":2,"input_dim":1,"layers":[{"A":[["1"]],"b":["0"]}],"c":["1"]})";
  EXPECT_NO_THROW(reluk::deserialize(ok));
  EXPECT_EQ(error_path(R"({"kind":"shallow","k":2,"input_dim":2,"layers":[{"A":[["1"]],"b":["0"]}],"c":["1"]})"),
            "$.layers[0].A[0]");
  EXPECT_EQ(error_path(R"({"kind":"shallow","k":2,"input_dim":1,"layers":[{"A":[["1"]],"b":["0"]}],"c":["1/0"]})"),
            "$.c[0]");
  EXPECT_EQ(error_path(R"({"kind":"shallow","k":2,"input_dim":1,"layers":[{"A":[["1"]],"b":["0"]}],"c":["1"],"x":1})"),
            "$.x");
  EXPECT_EQ(error_path(R"({"kind":"wide","k":2,"input_dim":1,"layers":[],"c":[]})"), "$.kind");
  EXPECT_EQ(error_path(R"({"kind":"deep","k":2,"input_dim":1,"layers":[{"A":[["1"]],"b":["0","1"]}],"c":["1"]})"),
            "$.layers[0].b");
  EXPECT_EQ(error_path(R"({"kind":"deep","k":2,"layers":[],"c":[]})"), "$.input_dim");
  EXPECT_EQ(error_path("{not json"), "$");
}

TEST(Io, DeserializedMaskFollowsValues) {
  const std::string zero = R"({"kind":"deep","k":2,"input_dim":1,"layers":[{"A":[["0"],["0"]],"b":["0","0"]}],"c":["0","0"]})";
  EXPECT_EQ(reluk::count_parameters(reluk::deserialize(zero)).nonzero, 0u);
}

TEST(Io, TableJson) {
  auto j = reluk::to_json(reluk::decompose_monomial({1, 1}));
  EXPECT_EQ(j["alpha"], reluk::json({1, 1}));
  EXPECT_EQ(j["n"], 2);
  ASSERT_EQ(j["entries"].size(), 3u);
  EXPECT_EQ(j["entries"][0]["slopes"], reluk::json({1, -1}));
  EXPECT_EQ(j["entries"][0]["c"], "-1/4");
  EXPECT_EQ(j["entries"][1]["c"], "0");
  EXPECT_EQ(j["entries"][2]["c"], "1/4");
}

TEST(Io, PolynomialErrors) {
  auto bad = [](const char* s) {
    try {
      reluk::polynomial_from_json(reluk::json::parse(s));
    } catch (const reluk::ParseError& e) {
      return e.path();
    }
    return std::string("<no error>");
  };
  EXPECT_EQ(bad(R"({"d":2,"terms":[{"alpha":[1],"a":"1"}]})"), "$.terms[0].alpha");
  EXPECT_EQ(bad(R"({"d":1,"terms":[{"alpha":[1],"a":"x"}]})"), "$.terms[0].a");
  EXPECT_EQ(bad(R"({"d":1,"terms":[{"alpha":[-1],"a":"1"}]})"), "$.terms[0].alpha[0]");
}
