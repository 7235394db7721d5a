#pragma once

// Desk-scale rate experiments. Each run fits a competitor (Chebyshev
// interpolant or greedy shallow network), pushes it through the exact
// compiler or embedding, and measures errors of both.
//
// Network errors are computed from exact evaluation rounded to double:
// float64 evaluation of a deep net realizing a degree-32 polynomial loses
// all digits to cancellation between the paired units.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "reluk/approx/chebyshev.hpp"
#include "reluk/approx/greedy.hpp"
#include "reluk/certifier.hpp"
#include "reluk/deep_compile.hpp"
#include "reluk/random.hpp"
#include "reluk/shallow_embed.hpp"

namespace reluk::approx {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Targets

struct TargetInfo {
  std::string name;
  Target f;
  std::size_t dim = 1;
  bool analytic = false;
  bool entire = false;
  std::optional<double> reference_ratio;       // geometric decay of best approximation
  std::optional<double> smoothness;            // r for |x|^r
  std::optional<int> polynomial_degree;
};

/// Runge 1/(1 + a|x|^2): decay ratio sqrt(a) / (1 + sqrt(1 + a)).
inline double runge_ratio(double a) { return std::sqrt(a) / (1.0 + std::sqrt(1.0 + a)); }

inline void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!ok.contains(k)) throw ConfigError(where + "." + k + ": unknown field");
}

inline TargetInfo make_target(const json& t, std::size_t d) {
  if (!t.is_object() || !t.contains("kind") || !t["kind"].is_string())
    throw ConfigError("target: needs a string field \"kind\"");
  const std::string kind = t["kind"];
  TargetInfo info;
  info.dim = d;
  auto norm2 = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  };
  if (kind == "runge") {
    check_keys(t, "target", {"kind", "a"});
    const double a = t.value("a", 25.0);
    if (!(a > 0)) throw ConfigError("target.a: must be positive");
    info.name = "runge(a=" + json(a).dump() + ")";
    info.f = [a, norm2](std::span<const double> x) { return 1.0 / (1.0 + a * norm2(x)); };
    info.analytic = true;
    info.reference_ratio = runge_ratio(a);
  } else if (kind == "exp") {
    check_keys(t, "target", {"kind"});
    info.name = "exp";
    info.f = [](std::span<const double> x) {
      double s = 0.0;
      for (double v : x) s += v;
      return std::exp(s);
    };
    info.analytic = info.entire = true;
  } else if (kind == "abs_power") {
    check_keys(t, "target", {"kind", "r"});
    const int r = t.value("r", 1);
    if (r < 1 || r % 2 == 0) throw ConfigError("target.r: must be an odd positive integer");
    info.name = "|x|^" + std::to_string(r);
    info.f = [r, norm2](std::span<const double> x) { return std::pow(std::sqrt(norm2(x)), r); };
    info.smoothness = r;
  } else if (kind == "polynomial") {
    check_keys(t, "target", {"kind", "coefficients"});
    if (d != 1) throw ConfigError("target.kind polynomial is one-dimensional");
    if (!t.contains("coefficients") || !t["coefficients"].is_array() || t["coefficients"].empty())
      throw ConfigError("target.coefficients: expected a non-empty array (ascending powers)");
    std::vector<double> c = t["coefficients"].get<std::vector<double>>();
    info.name = "polynomial(degree " + std::to_string(c.size() - 1) + ")";
    info.f = [c](std::span<const double> x) {
      double s = 0.0;
      for (std::size_t i = c.size(); i-- > 0;) s = s * x[0] + c[i];
      return s;
    };
    info.analytic = info.entire = true;
    info.polynomial_degree = static_cast<int>(c.size()) - 1;
  } else {
    throw ConfigError("target.kind: unknown target \"" + kind + "\"");
  }
  return info;
}

// ---------------------------------------------------------------------------
// Fitting helpers

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
  std::size_t points = 0;
};

inline LineFit least_squares_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.points = x.size();
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_tot += (y[i] - sy / n) * (y[i] - sy / n);
    const double e = y[i] - f.slope * x[i] - f.intercept;
    ss_res += e * e;
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

/// Runs fn(i) for i in [0, n) on a small thread pool; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<std::optional<T>> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          out[i].emplace(fn(i));
        } catch (...) {
          std::lock_guard lk(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
  std::vector<T> res;
  res.reserve(n);
  for (auto& o : out) res.push_back(std::move(*o));
  return res;
}

/// Dyadic grid -1 + i/2048 (d = 1) or Halton ball points rounded to
/// multiples of 2^-12 (d = 2). Dyadic points evaluate exactly in both
/// double and rational arithmetic.
inline std::vector<std::vector<double>> evaluation_grid(std::size_t d) {
  std::vector<std::vector<double>> g;
  if (d == 1) {
    for (int i = 0; i <= 4096; ++i) g.push_back({-1.0 + i / 2048.0});
    return g;
  }
  for (auto x : ball_samples(d, 4096)) {
    for (auto& v : x) v = std::round(v * 4096.0) / 4096.0;
    g.push_back(std::move(x));
  }
  return g;
}

struct DegreeRow {
  int degree = 0;
  int L = 0;
  double sup_poly = 0.0;
  double l2_poly = 0.0;
  double sup_net = 0.0;
  double max_gap = 0.0;  // max |net(x) - p(x)| over the grid
  std::size_t widths = 0;
};

inline DegreeRow run_degree(const TargetInfo& target, int n, int k, int L) {
  DegreeRow row;
  row.degree = n;
  row.L = L;
  const ChebyshevFit fit = chebyshev_fit(target.f, n, static_cast<int>(target.dim));
  const Polynomial p = fit.to_polynomial();
  const Network net = compile_deep(p, k, L, Rational(1));
  row.widths = net.layers().front().width();
  const auto grid = evaluation_grid(target.dim);
  auto net_vals = parallel_map<double>(grid.size(), [&](std::size_t i) {
    ExactVector x;
    for (double v : grid[i]) x.push_back(Rational::from_double(v));
    return evaluate_exact(net, x).to_double();
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double fx = target.f(grid[i]);
    const double px = fit(grid[i]);
    row.sup_poly = std::max(row.sup_poly, std::abs(fx - px));
    row.sup_net = std::max(row.sup_net, std::abs(fx - net_vals[i]));
    row.max_gap = std::max(row.max_gap, std::abs(net_vals[i] - px));
  }
  if (target.dim == 1) {
    auto sq = [&](double x) {
      const double e = target.f(std::span<const double>(&x, 1)) - fit(x);
      return e * e;
    };
    row.l2_poly = std::sqrt(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(sq, -1.0, 1.0, 15, 1e-12));
  } else {
    double s = 0.0;
    const auto pts = ball_samples(2, 4096);
    for (const auto& x : pts) {
      const double e = target.f(x) - fit(x);
      s += e * e;
    }
    row.l2_poly = std::sqrt(s / static_cast<double>(pts.size()));
  }
  return row;
}

// ---------------------------------------------------------------------------
// Reports

struct ExperimentReport {
  std::string kind;
  json config;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> table;
  json fit = json::object();
  std::vector<std::string> notes;
  bool pass = false;

  json to_json() const {
    json rows = json::array();
    for (const auto& r : table) {
      json o;
      for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
      rows.push_back(std::move(o));
    }
    return json{{"experiment", kind}, {"config", config}, {"rows", rows},
                {"fit", fit},         {"notes", notes},   {"pass", pass}};
  }

  std::string csv() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\n";
    for (const auto& r : table) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
      out << "\n";
    }
    return out.str();
  }

  /// Whitespace-separated columns for gnuplot.
  std::string dat() const {
    std::ostringstream out;
    out.precision(17);
    out << "#";
    for (const auto& c : columns) out << " " << c;
    out << "\n";
    for (const auto& r : table) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? " " : "") << r[i];
      out << "\n";
    }
    return out.str();
  }
};

inline double tolerance(const json& cfg, const char* name, double dflt) {
  if (!cfg.contains("tolerances")) return dflt;
  const json& t = cfg["tolerances"];
  if (!t.is_object()) throw ConfigError("tolerances: expected an object");
  if (!t.contains(name)) return dflt;
  if (!t[name].is_number()) throw ConfigError(std::string("tolerances.") + name + ": expected a number");
  return t[name].get<double>();
}

template <class T>
T config_value(const json& cfg, const char* name, T dflt) {
  if (!cfg.contains(name)) return dflt;
  try {
    return cfg[name].get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(name) + ": wrong type");
  }
}

inline int minimal_depth(int k, int degree) {
  int L = 1;
  long long p = k;
  while (p < degree) {
    p *= k;
    ++L;
  }
  return L;
}

struct DegreeSetup {
  std::vector<int> degrees;
  int k = 2;
  std::optional<int> L;
  std::size_t d = 1;
  TargetInfo target;
};

inline DegreeSetup degree_setup(const json& cfg, std::vector<int> default_degrees, const json& default_target) {
  check_keys(cfg, "config", {"degrees", "target", "k", "L", "d", "tolerances", "seed"});
  DegreeSetup s;
  s.degrees = config_value(cfg, "degrees", default_degrees);
  if (s.degrees.size() < 3) throw ConfigError("degrees: need at least 3 degrees for a rate fit");
  for (int n : s.degrees)
    if (n < 1 || n > kMaxChebyshevDegree) throw ConfigError("degrees: each degree must lie in [1, 200]");
  s.k = config_value(cfg, "k", 2);
  if (s.k < 2) throw ConfigError("k: must be >= 2");
  if (cfg.contains("L")) s.L = config_value(cfg, "L", 1);
  s.d = config_value<std::size_t>(cfg, "d", 1);
  if (s.d != 1 && s.d != 2) throw ConfigError("d: must be 1 or 2");
  const int max_deg = *std::max_element(s.degrees.begin(), s.degrees.end());
  if (s.L) {
    if (*s.L < 1) throw ConfigError("L: must be >= 1");
    if (int_power(s.k, *s.L) < max_deg) throw ConfigError("L: k^L must be at least the largest degree");
  }
  s.target = make_target(cfg.contains("target") ? cfg["target"] : default_target, s.d);
  return s;
}

inline std::vector<DegreeRow> run_degrees(const DegreeSetup& s) {
  std::vector<DegreeRow> rows;
  for (int n : s.degrees) rows.push_back(run_degree(s.target, n, s.k, s.L ? *s.L : minimal_depth(s.k, n)));
  return rows;
}

inline void fill_degree_table(ExperimentReport& rep, const std::vector<DegreeRow>& rows) {
  rep.columns = {"degree", "L", "width", "sup_error_poly", "l2_error_poly", "sup_error_net", "max_net_poly_gap"};
  for (const auto& r : rows)
    rep.table.push_back({double(r.degree), double(r.L), double(r.widths), r.sup_poly, r.l2_poly, r.sup_net,
                         r.max_gap});
}

inline constexpr double kNoiseFloor = 1e-13;

inline ExperimentReport run_analytic_experiment(const json& cfg) {
  DegreeSetup s = degree_setup(cfg, {4, 8, 16, 32}, json{{"kind", "runge"}, {"a", 25}});
  if (!s.target.analytic) throw ConfigError("target: the analytic experiment needs an analytic target");
  const double tol_ratio = tolerance(cfg, "ratio", 0.05);
  const double tol_gap = tolerance(cfg, "representation", 1e-9);
  ExperimentReport rep;
  rep.kind = "analytic";
  rep.config = cfg;
  rep.config["target_name"] = s.target.name;
  const auto rows = run_degrees(s);
  fill_degree_table(rep, rows);

  double gap = 0.0;
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    gap = std::max(gap, r.max_gap);
    if (r.sup_poly > kNoiseFloor) {
      xs.push_back(r.degree);
      ys.push_back(std::log(r.sup_poly));
    } else {
      rep.notes.push_back("degree " + std::to_string(r.degree) + ": error at the float64 floor, excluded from fit");
    }
  }
  rep.fit["max_net_poly_gap"] = gap;
  bool ok = gap <= tol_gap;
  std::vector<double> local;
  for (std::size_t i = 1; i < xs.size(); ++i) local.push_back(std::exp((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])));
  rep.fit["local_ratios"] = local;
  if (xs.size() >= 3) {
    LineFit lf = least_squares_line(xs, ys);
    const double rho = std::exp(lf.slope);
    rep.fit["decay_ratio"] = rho;
    rep.fit["log_intercept"] = lf.intercept;
    rep.fit["r2"] = lf.r2;
    rep.fit["points"] = lf.points;
    if (s.target.reference_ratio) {
      rep.fit["reference_ratio"] = *s.target.reference_ratio;
      ok = ok && std::abs(rho - *s.target.reference_ratio) <= tol_ratio;
    }
  } else {
    rep.notes.push_back("fewer than 3 errors above the float64 floor: ratio fit skipped");
    if (s.target.reference_ratio) ok = false;
  }
  bool decreasing = local.size() >= 2;
  for (std::size_t i = 1; i < local.size(); ++i) decreasing = decreasing && local[i] < local[i - 1];
  if (decreasing && local.back() < 0.8 * local.front()) {
    rep.fit["entire_function"] = true;
    rep.notes.push_back("entire function: local decay ratios keep decreasing (super-geometric convergence)");
  } else {
    rep.fit["entire_function"] = false;
  }
  rep.notes.push_back("the constant and polynomial prefactor of the rate are not asserted");
  rep.pass = ok;
  return rep;
}

inline ExperimentReport run_sobolev_experiment(const json& cfg) {
  DegreeSetup s = degree_setup(cfg, {4, 8, 16, 32, 64}, json{{"kind", "abs_power"}, {"r", 1}});
  if (!s.target.smoothness && !s.target.polynomial_degree)
    throw ConfigError("target: the Sobolev experiment needs abs_power or polynomial targets");
  const double tol_slope = tolerance(cfg, "slope", 0.3);
  const double tol_gap = tolerance(cfg, "representation", 1e-9);
  ExperimentReport rep;
  rep.kind = "sobolev";
  rep.config = cfg;
  rep.config["target_name"] = s.target.name;
  const auto rows = run_degrees(s);
  fill_degree_table(rep, rows);
  double gap = 0.0;
  bool exact = true;
  std::vector<double> xs, ys;
  for (const auto& r : rows) {
    gap = std::max(gap, r.max_gap);
    exact = exact && r.sup_poly <= 1e-12;
    xs.push_back(std::log(r.degree));
    ys.push_back(std::log(std::max(r.sup_poly, 1e-300)));
  }
  rep.fit["max_net_poly_gap"] = gap;
  bool ok = gap <= tol_gap;
  if (exact) {
    rep.notes.push_back("exact reproduction: all errors at the float64 floor, slope fit skipped");
    rep.fit["exact_reproduction"] = true;
  } else {
    LineFit lf = least_squares_line(xs, ys);
    rep.fit["slope"] = lf.slope;
    rep.fit["log_intercept"] = lf.intercept;
    rep.fit["r2"] = lf.r2;
    rep.fit["points"] = lf.points;
    if (s.target.smoothness) {
      rep.fit["reference_slope"] = -*s.target.smoothness;
      ok = ok && std::abs(lf.slope + *s.target.smoothness) <= tol_slope;
    }
  }
  rep.notes.push_back("Sobolev norms are not computed; only the exponent is compared");
  rep.pass = ok;
  return rep;
}

// ---------------------------------------------------------------------------
// Variation space

struct ConvexTarget {
  std::vector<double> weights;
  std::vector<DictionaryElement> elements;
  double operator()(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i) s += weights[i] * elements[i](x);
    return s;
  }
};

/// Positive weights summing to 1 over random ridge elements sigma_K(w.x+b),
/// |w|_2 = 1, b uniform in [-1, 1].
inline ConvexTarget random_convex_target(Rng& rng, std::size_t d, int K, std::size_t count) {
  ConvexTarget t;
  double total = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    DictionaryElement e;
    e.K = K;
    if (d == 1) {
      e.omega = {rng.integer(0, 1) ? 1.0 : -1.0};
    } else {
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      e.omega = {std::cos(th), std::sin(th)};
    }
    e.offset = rng.uniform(-1.0, 1.0);
    t.elements.push_back(std::move(e));
    t.weights.push_back(rng.uniform(0.05, 1.0));
    total += t.weights.back();
  }
  for (auto& w : t.weights) w /= total;
  return t;
}

struct VariationRow {
  int level = 0;
  int K = 0;
  std::size_t width = 0;
  double rms_error = 0.0;
  std::size_t deep_width = 0;
  std::size_t mismatches = 0;
  CertStatus certificate = CertStatus::not_recognized;
};

inline ExperimentReport run_variation_experiment(const json& cfg) {
  check_keys(cfg, "config", {"widths", "target", "k", "L", "levels", "d", "tolerances", "seed", "samples",
                             "check_points"});
  const int k = config_value(cfg, "k", 2);
  const int L = config_value(cfg, "L", 2);
  const std::size_t d = config_value<std::size_t>(cfg, "d", 2);
  const auto seed = config_value<std::uint64_t>(cfg, "seed", 0);
  auto widths = config_value<std::vector<std::size_t>>(cfg, "widths", {1, 2, 4, 8, 16});
  auto levels = config_value<std::vector<int>>(cfg, "levels", {1, 2});
  const auto n_samples = config_value<std::size_t>(cfg, "samples", 4096);
  const auto n_check = config_value<std::size_t>(cfg, "check_points", 500);
  if (k < 2) throw ConfigError("k: must be >= 2");
  if (L < 1) throw ConfigError("L: must be >= 1");
  if (d != 1 && d != 2) throw ConfigError("d: must be 1 or 2");
  if (widths.size() < 3) throw ConfigError("widths: need at least 3 widths");
  for (auto w : widths)
    if (w < 1 || w > 64) throw ConfigError("widths: each width must lie in [1, 64]");
  if (levels.empty()) throw ConfigError("levels: need at least one level");
  for (int l : levels)
    if (l < 1 || l > L) throw ConfigError("levels: exponent k^l is not embeddable at depth L (need 1 <= l <= L)");
  std::size_t elements = 20;
  if (cfg.contains("target")) {
    const json& t = cfg["target"];
    check_keys(t, "target", {"kind", "elements"});
    if (t.value("kind", std::string("convex_combination")) != "convex_combination")
      throw ConfigError("target.kind: the variation experiment needs a convex_combination target");
    elements = t.value("elements", std::size_t{20});
    if (elements < 1) throw ConfigError("target.elements: must be >= 1");
  }
  const double tol_mono = tolerance(cfg, "monotone", 1e-12);

  ExperimentReport rep;
  rep.kind = "variation";
  rep.config = cfg;
  rep.columns = {"level", "K", "width", "rms_error", "deep_width", "embedding_mismatches", "certificate_proven"};
  bool ok = true;
  json per_level = json::array();
  for (int level : levels) {
    const int K = int_power(k, level);
    Rng rng(seed);
    const ConvexTarget target = random_convex_target(rng, d, K, elements);
    const auto samples = ball_samples(d, n_samples);
    std::vector<double> values;
    for (const auto& x : samples) values.push_back(target(x));
    const GreedyResult g = greedy_fit(samples, values, make_dictionary(d, K), widths);
    for (const auto& e : g.events) rep.notes.push_back("level " + std::to_string(level) + ": " + e);

    Rng check_rng(seed + 1000003ULL * static_cast<std::uint64_t>(level));
    const auto pts = random_ball_points(check_rng, d, n_check);
    auto rows = parallel_map<VariationRow>(g.steps.size(), [&](std::size_t i) {
      const auto& st = g.steps[i];
      VariationRow r;
      r.level = level;
      r.K = K;
      r.width = st.width;
      r.rms_error = st.rms_error;
      const Network deep = embed_shallow(st.network, k, L);
      r.deep_width = deep.layers().back().width();
      for (const auto& x : pts)
        if (evaluate_exact(deep, x) != evaluate_exact(st.network, x)) ++r.mismatches;
      r.certificate = certify_equal(deep, st.network).status;
      return r;
    });
    std::vector<double> lx, ly;
    bool mono = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      rep.table.push_back({double(r.level), double(r.K), double(r.width), r.rms_error, double(r.deep_width),
                           double(r.mismatches), r.certificate == CertStatus::proven ? 1.0 : 0.0});
      ok = ok && r.mismatches == 0 && r.certificate == CertStatus::proven &&
           r.deep_width == 2 * static_cast<std::size_t>(k + 1) * r.width;
      if (i > 0 && r.rms_error > rows[i - 1].rms_error * (1.0 + tol_mono) + 1e-15) mono = false;
      if (r.rms_error > 0) {
        lx.push_back(std::log(double(r.width)));
        ly.push_back(std::log(r.rms_error));
      }
    }
    ok = ok && mono;
    json lv{{"level", level}, {"K", K}, {"monotone", mono},
            {"reference_exponent", -0.5 - (2.0 * K + 1.0) / (2.0 * static_cast<double>(d))}};
    if (lx.size() >= 3) lv["fitted_exponent"] = least_squares_line(lx, ly).slope;
    per_level.push_back(std::move(lv));
  }
  rep.fit["levels"] = per_level;
  rep.notes.push_back("reference exponents are recorded for context and not asserted");
  rep.notes.push_back("dictionary is a finite discretization: " + std::string(d == 1 ? "2" : "64") +
                      " directions x 33 offsets");
  rep.pass = ok;
  return rep;
}

}  // namespace reluk::approx
