#pragma once

// Symbolic certification of compiled and embedded networks.
//
// A forward pass tracks every hidden unit as one of
//   Zero | Const c | Ridge: f * sigma_E(z) | Shifted: sigma_k(a * sigma_E(z) + b)
// where z is an affine form normalized so its first nonzero slope is +-1 and
// f, a != 0. A hidden pre-activation is accepted when its Shifted inputs
// collapse in sign-matched pairs through
//   g sigma_k(a y + b) + (-1)^k g sigma_k(-a y - b) = g (a y + b)^k
// to something affine in a single y = sigma_E(z). Then sigma_k(c y) with c > 0
// is sigma_{kE}(z) scaled by c^k (y >= 0), anything else becomes Shifted.
// At the output, y^j = sigma_{jE}(z) and the remaining ridges are collapsed
// the same way into polynomials. Every rewrite is an identity on all of R^d,
// so a reduction that succeeds is a proof; anything else is not-recognized.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "reluk/network.hpp"
#include "reluk/polynomial.hpp"

namespace reluk {

enum class CertStatus { proven, refuted, not_recognized };

inline const char* status_name(CertStatus s) {
  switch (s) {
    case CertStatus::proven: return "proven";
    case CertStatus::refuted: return "refuted";
    case CertStatus::not_recognized: return "not-recognized";
  }
  return "?";
}

struct PointCheck {
  std::size_t count = 0;
  std::size_t failures = 0;
};

struct CertificateReport {
  CertStatus status = CertStatus::not_recognized;
  Polynomial residual{1};
  std::vector<std::string> checked_structure;
  PointCheck point_check;
  std::string message;
};

namespace detail {

/// sigma_E(z) with z = slopes . x + constant, first nonzero slope is +-1.
struct Atom {
  std::vector<Rational> z;  // slopes then constant
  int E = 0;
  friend auto operator<=>(const Atom&, const Atom&) = default;
  friend bool operator==(const Atom&, const Atom&) = default;

  Atom negated() const {
    Atom a = *this;
    for (auto& v : a.z) v = -v;
    return a;
  }
  bool leading_positive() const {
    for (std::size_t i = 0; i + 1 < z.size(); ++i)
      if (!z[i].is_zero()) return z[i].sign() > 0;
    return true;
  }
  Polynomial power(int e) const {
    std::vector<Rational> s(z.begin(), z.end() - 1);
    return expand_affine_power(s, z.back(), e, 1 << 20);
  }
};

struct Zero {};
struct Const {
  Rational c;
};
struct Ridge {
  Atom atom;
  Rational factor;
};
struct Shifted {
  Atom atom;
  Rational a, b;
};
using Sym = std::variant<Zero, Const, Ridge, Shifted>;

struct ShiftKey {
  Atom atom;
  Rational a, b;
  friend auto operator<=>(const ShiftKey&, const ShiftKey&) = default;
  friend bool operator==(const ShiftKey&, const ShiftKey&) = default;
};

/// Accumulated affine combination of symbolic values.
struct Accum {
  Rational constant;
  std::map<Atom, Rational> lin;           // coefficient of sigma_E(z)
  std::map<ShiftKey, Rational> shifted;   // coefficient of sigma_k(a sigma_E(z) + b)

  void add(const Sym& s, const Rational& w) {
    if (w.is_zero()) return;
    if (auto* c = std::get_if<Const>(&s)) {
      constant += w * c->c;
    } else if (auto* r = std::get_if<Ridge>(&s)) {
      lin[r->atom] += w * r->factor;
    } else if (auto* sh = std::get_if<Shifted>(&s)) {
      shifted[{sh->atom, sh->a, sh->b}] += w;
    }
  }

  /// Collapses the shifted bag into powers of y per atom: result[atom][j] is
  /// the coefficient of sigma_E(z)^j, j >= 1; j = 0 goes to constant.
  /// Throws NotRecognized for an unmatched unit. Returns the pair count.
  std::size_t collapse(int k, std::map<Atom, std::vector<Rational>>& powers) {
    const Rational pair_sign = (k % 2 == 0) ? Rational(1) : Rational(-1);
    std::map<ShiftKey, bool> used;
    std::size_t pairs = 0;
    for (const auto& [key, g] : shifted) {
      if (used[key] || g.is_zero()) continue;
      ShiftKey partner{key.atom, -key.a, -key.b};
      auto it = shifted.find(partner);
      Rational g2 = it == shifted.end() ? Rational(0) : it->second;
      Rational weight = g;
      if (g2 == pair_sign * g) {
        used[key] = used[partner] = true;
        ++pairs;
      } else if (g2.is_zero() && key.a.sign() < 0 && key.b.sign() <= 0) {
        // y = sigma_E(z) >= 0, so a y + b <= 0 and the unit is identically 0;
        // its partner, if any, was recognized as a power-raising ridge.
        used[key] = true;
        continue;
      } else if (g2.is_zero() && key.a.sign() > 0 && key.b.sign() >= 0) {
        // a y + b >= 0: the unit is the full power (a y + b)^k.
        used[key] = true;
      } else {
        throw NotRecognized("unpaired shifted unit");
      }
      auto& p = powers[key.atom];
      if (p.size() < static_cast<std::size_t>(k + 1)) p.resize(static_cast<std::size_t>(k + 1));
      // g (a y + b)^k = sum_j C(k,j) a^j b^{k-j} y^j
      for (int j = 0; j <= k; ++j) {
        Rational t = weight * Rational(binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(j))) *
                     key.a.pow(static_cast<unsigned long>(j)) * key.b.pow(static_cast<unsigned long>(k - j));
        if (j == 0)
          constant += t;
        else
          p[static_cast<std::size_t>(j)] += t;
      }
    }
    // Zero-coefficient units whose partner is missing are harmless.
    return pairs;
  }
};

/// Moves lin entries sigma_{jE}(z) = sigma_E(z)^j into the power table of
/// atom (z, E) when that table exists.
inline void fold_ridges(std::map<Atom, Rational>& lin, std::map<Atom, std::vector<Rational>>& powers) {
  for (auto it = lin.begin(); it != lin.end();) {
    bool moved = false;
    for (auto& [atom, p] : powers) {
      if (atom.z != it->first.z || it->first.E % atom.E != 0) continue;
      const auto j = static_cast<std::size_t>(it->first.E / atom.E);
      if (j < 1 || j >= p.size()) continue;
      p[j] += it->second;
      moved = true;
      break;
    }
    it = moved ? lin.erase(it) : std::next(it);
  }
}

struct LayerFacts {
  std::size_t power_raise = 0, shifted = 0, constant = 0, zero = 0, pairs = 0;
};

/// Result of the symbolic pass: output = poly + sum ridges[atom] sigma_E(atom).
struct SymbolicOutput {
  Polynomial poly;
  std::map<Atom, Rational> ridges;
  std::vector<std::string> facts;
};

inline Sym first_layer_unit(const Layer& l, std::size_t r, std::size_t d, int k) {
  std::vector<Rational> z(d + 1);
  for (const auto& [c, w] : l.weights.row(r)) z[c] = w;
  z[d] = l.bias[r];
  Rational lead;
  for (std::size_t i = 0; i < d; ++i)
    if (!z[i].is_zero()) {
      lead = z[i].abs();
      break;
    }
  if (lead.is_zero()) {
    if (z[d].is_zero()) return Zero{};
    return Const{relu_k(z[d], k)};
  }
  for (auto& v : z) v /= lead;
  return Ridge{Atom{std::move(z), k}, lead.pow(static_cast<unsigned long>(k))};
}

inline SymbolicOutput symbolic_pass(const Network& net) {
  const int k = net.k();
  const std::size_t d = net.input_dim();
  SymbolicOutput out{Polynomial(d), {}, {}};
  std::vector<Sym> h;
  {
    const Layer& l = net.layers().front();
    std::size_t ridges = 0;
    for (std::size_t r = 0; r < l.width(); ++r) {
      h.push_back(first_layer_unit(l, r, d, k));
      ridges += std::holds_alternative<Ridge>(h.back());
    }
    out.facts.push_back("layer 1: " + std::to_string(ridges) + " ridge units sigma_" + std::to_string(k) +
                        "(w.x+b)");
  }
  for (std::size_t li = 1; li < net.layers().size(); ++li) {
    const Layer& l = net.layers()[li];
    std::vector<Sym> next;
    next.reserve(l.width());
    LayerFacts f;
    for (std::size_t r = 0; r < l.width(); ++r) {
      Accum acc;
      acc.constant = l.bias[r];
      for (const auto& [c, w] : l.weights.row(r)) acc.add(h[c], w);
      std::map<Atom, std::vector<Rational>> powers;
      f.pairs += acc.collapse(k, powers);
      fold_ridges(acc.lin, powers);
      for (auto& [atom, p] : powers) {
        for (std::size_t j = 2; j < p.size(); ++j)
          if (!p[j].is_zero())
            throw NotRecognized("layer " + std::to_string(li + 1) + ", unit " + std::to_string(r) +
                                ": collapsed block is not affine in its input");
        if (p.size() > 1) acc.lin[atom] += p[1];
      }
      std::optional<std::pair<Atom, Rational>> single;
      for (const auto& [atom, c] : acc.lin) {
        if (c.is_zero()) continue;
        if (single)
          throw NotRecognized("layer " + std::to_string(li + 1) + ", unit " + std::to_string(r) +
                              " mixes several ridge inputs");
        single.emplace(atom, c);
      }
      if (!single) {
        Rational v = relu_k(acc.constant, k);
        if (v.is_zero()) {
          next.emplace_back(Zero{});
          ++f.zero;
        } else {
          next.emplace_back(Const{v});
          ++f.constant;
        }
      } else if (acc.constant.is_zero() && single->second.sign() > 0) {
        // sigma_k(c sigma_E(z)) = c^k sigma_{kE}(z) because sigma_E(z) >= 0.
        Atom a = single->first;
        a.E *= k;
        next.emplace_back(Ridge{std::move(a), single->second.pow(static_cast<unsigned long>(k))});
        ++f.power_raise;
      } else {
        next.emplace_back(Shifted{single->first, single->second, acc.constant});
        ++f.shifted;
      }
    }
    std::string fact = "layer " + std::to_string(li + 1) + ": " + std::to_string(f.power_raise) +
                       " power-raising units on nonnegative inputs, " + std::to_string(f.shifted) +
                       " shifted units";
    if (f.pairs) fact += ", " + std::to_string(f.pairs) + " identity-combination pairs collapsed";
    if (f.constant) fact += ", " + std::to_string(f.constant) + " constant units";
    out.facts.push_back(fact);
    h = std::move(next);
  }

  Accum acc;
  for (std::size_t i = 0; i < h.size(); ++i) acc.add(h[i], net.output()[i]);
  std::map<Atom, std::vector<Rational>> powers;
  std::size_t pairs = acc.collapse(k, powers);
  out.poly.add_term(MultiIndex::zeros(d), acc.constant);
  for (const auto& [atom, c] : acc.lin)
    if (!c.is_zero()) out.ridges[atom] += c;
  for (const auto& [atom, p] : powers)
    for (std::size_t j = 1; j < p.size(); ++j)
      if (!p[j].is_zero()) {
        Atom a = atom;
        a.E *= static_cast<int>(j);  // sigma_E(z)^j = sigma_{jE}(z)
        out.ridges[a] += p[j];
      }
  for (auto it = out.ridges.begin(); it != out.ridges.end();)
    it = it->second.is_zero() ? out.ridges.erase(it) : std::next(it);
  out.facts.push_back("output: " + std::to_string(out.ridges.size()) + " ridge terms" +
                      (pairs ? ", " + std::to_string(pairs) + " identity-combination pairs collapsed" : ""));
  return out;
}

}  // namespace detail

/// Exact polynomial realized by a recognized network; throws NotRecognized.
inline Polynomial reduce_to_polynomial(const Network& net, std::vector<std::string>* facts = nullptr) {
  detail::SymbolicOutput s = detail::symbolic_pass(net);
  Polynomial p = s.poly;
  std::size_t pairs = 0;
  for (const auto& [atom, g] : s.ridges) {
    if (!atom.leading_positive()) continue;
    auto it = s.ridges.find(atom.negated());
    Rational g2 = it == s.ridges.end() ? Rational(0) : it->second;
    const Rational sign = atom.E % 2 == 0 ? Rational(1) : Rational(-1);
    if (g2 != sign * g) throw NotRecognized("output ridge pair does not match the pairing identity");
    p.add_scaled(atom.power(atom.E), g);
    ++pairs;
  }
  for (const auto& [atom, g] : s.ridges)
    if (!atom.leading_positive() && !s.ridges.contains(atom.negated()))
      throw NotRecognized("output ridge has no paired unit");
  if (facts) {
    *facts = std::move(s.facts);
    facts->push_back("pairing identity: " + std::to_string(pairs) + " output pairs collapse to full powers");
  }
  return p;
}

/// Deterministic Halton points (prime bases) mapped from [0,1]^d to
/// [-1,1]^d, keeping those inside the closed unit ball. All coordinates are
/// dyadic / triadic / ... rationals.
inline std::vector<ExactVector> certificate_points(std::size_t d, std::size_t count) {
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (d > std::size(primes)) throw DomainError("certificate points support d <= 12");
  std::vector<ExactVector> pts;
  for (long idx = 1; pts.size() < count; ++idx) {
    ExactVector x(d);
    Rational norm2;
    for (std::size_t i = 0; i < d; ++i) {
      const long b = primes[i];
      mpz_class num = 0, den = 1;
      for (long n = idx; n > 0; n /= b) {
        num = num * b + n % b;
        den *= b;
      }
      x[i] = Rational(mpz_class(2 * num - den), den);
      norm2 += x[i] * x[i];
    }
    if (norm2 <= Rational(1)) pts.push_back(std::move(x));
  }
  return pts;
}

inline constexpr std::size_t kCertificatePoints = 128;

namespace detail {

template <class F>
PointCheck run_point_check(const Network& net, F&& target) {
  PointCheck pc;
  for (const auto& x : certificate_points(net.input_dim(), kCertificatePoints)) {
    ++pc.count;
    if (evaluate_exact(net, x) != target(x)) ++pc.failures;
  }
  return pc;
}

/// Rewrites every ridge with a negative leading slope through
/// sigma_E(-z) = (-1)^E (z^E - sigma_E(z)).
inline void canonicalize(SymbolicOutput& s) {
  std::map<Atom, Rational> out;
  for (const auto& [atom, g] : s.ridges) {
    if (atom.leading_positive()) {
      out[atom] += g;
      continue;
    }
    Atom pos = atom.negated();
    const Rational sg = atom.E % 2 == 0 ? g : -g;
    s.poly.add_scaled(pos.power(pos.E), sg);
    out[pos] -= sg;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  s.ridges = std::move(out);
}

}  // namespace detail

inline CertificateReport certify_equal(const Network& net, const Polynomial& target) {
  CertificateReport rep;
  rep.residual = Polynomial(net.input_dim());
  if (target.dim() != net.input_dim()) {
    rep.status = CertStatus::refuted;
    rep.message = "dimension mismatch";
    return rep;
  }
  rep.point_check = detail::run_point_check(net, [&](const ExactVector& x) { return target.evaluate(x); });
  try {
    Polynomial p = reduce_to_polynomial(net, &rep.checked_structure);
    p -= target;
    rep.residual = std::move(p);
    rep.status = rep.residual.is_zero() && rep.point_check.failures == 0 ? CertStatus::proven : CertStatus::refuted;
    if (rep.status == CertStatus::refuted) rep.message = "residual " + rep.residual.str();
  } catch (const NotRecognized& e) {
    rep.status = CertStatus::not_recognized;
    rep.message = e.what();
  } catch (const ExpansionTooLarge& e) {
    rep.status = CertStatus::not_recognized;
    rep.message = e.what();
  }
  return rep;
}

/// Equality with a shallow target network: both sides are reduced to
/// polynomial part + ridges with positive leading slopes and compared
/// term by term.
inline CertificateReport certify_equal(const Network& net, const Network& target) {
  CertificateReport rep;
  rep.residual = Polynomial(net.input_dim());
  if (!target.is_shallow()) {
    rep.status = CertStatus::not_recognized;
    rep.message = "network targets must be shallow";
    return rep;
  }
  if (target.input_dim() != net.input_dim()) {
    rep.status = CertStatus::refuted;
    rep.message = "dimension mismatch";
    return rep;
  }
  rep.point_check = detail::run_point_check(net, [&](const ExactVector& x) { return evaluate_exact(target, x); });
  try {
    detail::SymbolicOutput a = detail::symbolic_pass(net);
    detail::SymbolicOutput b = detail::symbolic_pass(target);
    rep.checked_structure = a.facts;
    detail::canonicalize(a);
    detail::canonicalize(b);
    Polynomial diff = a.poly;
    diff -= b.poly;
    rep.residual = std::move(diff);
    const bool same_ridges = a.ridges == b.ridges;
    rep.checked_structure.push_back("target: " + std::to_string(b.ridges.size()) +
                                    " canonical ridge terms, network: " + std::to_string(a.ridges.size()));
    if (same_ridges) rep.checked_structure.push_back("ridge terms (w_m, u_m, c_m) match exactly");
    rep.status = same_ridges && rep.residual.is_zero() && rep.point_check.failures == 0 ? CertStatus::proven
                                                                                        : CertStatus::refuted;
    if (rep.status == CertStatus::refuted) rep.message = "canonical forms differ";
  } catch (const NotRecognized& e) {
    rep.status = CertStatus::not_recognized;
    rep.message = e.what();
  } catch (const ExpansionTooLarge& e) {
    rep.status = CertStatus::not_recognized;
    rep.message = e.what();
  }
  return rep;
}

}  // namespace reluk
