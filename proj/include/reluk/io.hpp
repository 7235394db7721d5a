#pragma once

// JSON interchange. Rationals are strings "p" or "p/q" in lowest terms.
// Readers reject unknown fields and report the JSON path of the first
// offending value.

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"
#include "reluk/certifier.hpp"
#include "reluk/monomial_decomp.hpp"
#include "reluk/network.hpp"
#include "reluk/polynomial.hpp"

namespace reluk {

using json = nlohmann::ordered_json;

namespace io_detail {

inline void allow_fields(const json& j, const std::string& path, std::initializer_list<const char*> fields) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  std::set<std::string> ok(fields.begin(), fields.end());
  for (const auto& [key, v] : j.items())
    if (!ok.contains(key)) throw ParseError(path + "." + key, "unknown field");
}

inline const json& field(const json& j, const std::string& path, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(path + "." + name, "missing field");
  return *it;
}

inline Rational rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw ParseError(path, "expected a rational string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

inline long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<long long>();
}

inline const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

inline std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Networks

inline json to_json(const Network& net) {
  json j;
  j["kind"] = net.is_shallow() ? "shallow" : "deep";
  j["k"] = net.k();
  j["input_dim"] = net.input_dim();
  json layers = json::array();
  for (const auto& l : net.layers()) {
    json A = json::array();
    const ExactMatrix dense = l.weights.to_dense();
    for (std::size_t r = 0; r < dense.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < dense.cols(); ++c) row.push_back(dense(r, c).str());
      A.push_back(std::move(row));
    }
    json b = json::array();
    for (const auto& v : l.bias.values) b.push_back(v.str());
    layers.push_back(json{{"A", std::move(A)}, {"b", std::move(b)}});
  }
  j["layers"] = std::move(layers);
  json c = json::array();
  for (const auto& v : net.output().values) c.push_back(v.str());
  j["c"] = std::move(c);
  if (net.declared_bounds()) j["declared_bounds"] = {{"B", net.declared_bounds()->B.str()},
                                                     {"M", net.declared_bounds()->M.str()}};
  return j;
}

inline Network network_from_json(const json& j) {
  using namespace io_detail;
  allow_fields(j, "$", {"kind", "k", "input_dim", "layers", "c", "declared_bounds"});
  const json& kind_j = field(j, "$", "kind");
  if (!kind_j.is_string() || (kind_j != "shallow" && kind_j != "deep"))
    throw ParseError("$.kind", "expected \"shallow\" or \"deep\"");
  const NetworkKind kind = kind_j == "shallow" ? NetworkKind::shallow : NetworkKind::deep;
  const long long k = integer(field(j, "$", "k"), "$.k");
  if (k < 1) throw ParseError("$.k", "must be >= 1");
  const long long d = integer(field(j, "$", "input_dim"), "$.input_dim");
  if (d < 1) throw ParseError("$.input_dim", "must be >= 1");

  std::vector<Layer> layers;
  std::size_t prev = static_cast<std::size_t>(d);
  const json& lj = array(field(j, "$", "layers"), "$.layers");
  if (lj.empty()) throw ParseError("$.layers", "network needs at least one layer");
  for (std::size_t i = 0; i < lj.size(); ++i) {
    const std::string lp = idx("$.layers", i);
    allow_fields(lj[i], lp, {"A", "b"});
    const json& A = array(field(lj[i], lp, "A"), lp + ".A");
    const json& b = array(field(lj[i], lp, "b"), lp + ".b");
    if (A.size() != b.size())
      throw ParseError(lp + ".b", "length " + std::to_string(b.size()) + " does not match " +
                                      std::to_string(A.size()) + " rows of A");
    ExactMatrix m(A.size(), prev);
    ExactVector bias(b.size());
    for (std::size_t r = 0; r < A.size(); ++r) {
      const std::string rp = idx(lp + ".A", r);
      const json& row = array(A[r], rp);
      if (row.size() != prev)
        throw ParseError(rp, "expected " + std::to_string(prev) + " entries, got " + std::to_string(row.size()));
      for (std::size_t c = 0; c < prev; ++c) m(r, c) = rational(row[c], idx(rp, c));
      bias[r] = rational(b[r], idx(lp + ".b", r));
    }
    layers.emplace_back(SparseMatrix::from_dense(m), ParamVector(std::move(bias)));
    prev = A.size();
  }
  const json& cj = array(field(j, "$", "c"), "$.c");
  if (cj.size() != prev)
    throw ParseError("$.c", "length " + std::to_string(cj.size()) + " does not match last width " +
                                std::to_string(prev));
  ExactVector c(cj.size());
  for (std::size_t i = 0; i < cj.size(); ++i) c[i] = rational(cj[i], idx("$.c", i));

  std::optional<DeclaredBounds> declared;
  if (auto it = j.find("declared_bounds"); it != j.end()) {
    allow_fields(*it, "$.declared_bounds", {"B", "M"});
    declared = DeclaredBounds{rational(field(*it, "$.declared_bounds", "B"), "$.declared_bounds.B"),
                              rational(field(*it, "$.declared_bounds", "M"), "$.declared_bounds.M")};
  }
  if (kind == NetworkKind::shallow && layers.size() != 1)
    throw ParseError("$.layers", "a shallow network has exactly one layer");
  try {
    return Network(kind, static_cast<int>(k), static_cast<std::size_t>(d), std::move(layers),
                   ParamVector(std::move(c)), std::move(declared));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError("$", e.what());
  }
}

inline std::string serialize(const Network& net) { return to_json(net).dump(1) + "\n"; }

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("invalid JSON: ") + e.what());
  }
}

inline Network deserialize(const std::string& text) { return network_from_json(parse_json_text(text)); }

// ---------------------------------------------------------------------------
// Polynomials

inline json to_json(const Polynomial& p) {
  json terms = json::array();
  for (const auto& [a, c] : p.terms()) terms.push_back(json{{"alpha", a.entries()}, {"a", c.str()}});
  return json{{"d", p.dim()}, {"terms", std::move(terms)}};
}

inline Polynomial polynomial_from_json(const json& j) {
  using namespace io_detail;
  allow_fields(j, "$", {"d", "terms"});
  const long long d = integer(field(j, "$", "d"), "$.d");
  if (d < 1) throw ParseError("$.d", "must be >= 1");
  Polynomial p(static_cast<std::size_t>(d));
  const json& terms = array(field(j, "$", "terms"), "$.terms");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tp = idx("$.terms", i);
    allow_fields(terms[i], tp, {"alpha", "a"});
    const json& aj = array(field(terms[i], tp, "alpha"), tp + ".alpha");
    if (aj.size() != static_cast<std::size_t>(d))
      throw ParseError(tp + ".alpha", "expected " + std::to_string(d) + " exponents");
    std::vector<int> alpha;
    for (std::size_t v = 0; v < aj.size(); ++v) {
      long long e = integer(aj[v], idx(tp + ".alpha", v));
      if (e < 0) throw ParseError(idx(tp + ".alpha", v), "exponent must be non-negative");
      alpha.push_back(static_cast<int>(e));
    }
    p.add_term(MultiIndex(std::move(alpha)), rational(field(terms[i], tp, "a"), tp + ".a"));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Reports

inline json to_json(const DecompositionTable& t) {
  json entries = json::array();
  for (const auto& [key, c] : t.entries) {
    LinearForm f = t.form(key);
    json e{{"slopes", f.slopes}};
    if (!t.homogeneous) e["constant"] = f.constant;
    e["c"] = c.str();
    entries.push_back(std::move(e));
  }
  json j{{"alpha", t.alpha.entries()}, {"n", t.degree}};
  if (!t.homogeneous) j["homogeneous"] = false;
  j["entries"] = std::move(entries);
  return j;
}

inline json to_json(const BoundsReport& r) {
  return json{{"max_weight", r.max_weight.str()},  {"max_output", r.max_output.str()},
              {"declared_B", r.declared_B.str()},  {"declared_M", r.declared_M.str()},
              {"dense_count", r.dense_count},      {"nonzero_count", r.nonzero_count},
              {"pass", r.pass}};
}

inline json to_json(const CertificateReport& r) {
  return json{{"status", status_name(r.status)},
              {"residual", r.residual.str()},
              {"checked_structure", r.checked_structure},
              {"point_check", {{"count", r.point_check.count}, {"failures", r.point_check.failures}}},
              {"message", r.message}};
}

// ---------------------------------------------------------------------------
// Files

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_file_atomic(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, p);
}

}  // namespace reluk
