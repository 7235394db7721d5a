// reluk: command line front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or input error,
// 3 structure not recognized by the certifier, 4 internal error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "reluk/approx/experiments.hpp"
#include "reluk/reluk.hpp"

namespace {

using reluk::json;
using reluk::Network;
using reluk::Rational;

enum Exit { kOk = 0, kVerify = 1, kUsage = 2, kNotRecognized = 3, kInternal = 4 };

struct Options {
  std::string format = "json";
};

class UsageError : public reluk::Error {
 public:
  using Error::Error;
};

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    reluk::write_file_atomic(out, text);
}

std::string dump(const json& j) { return j.dump(1) + "\n"; }

Rational parse_rational_flag(const std::string& s, const char* flag) {
  try {
    return Rational::parse(s);
  } catch (const reluk::Error& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

reluk::Polynomial read_polynomial(const std::string& path) {
  return reluk::polynomial_from_json(reluk::parse_json_text(reluk::read_file(path)));
}

Network read_network(const std::string& path) { return reluk::deserialize(reluk::read_file(path)); }

std::string text_bounds(const reluk::BoundsReport& r) {
  std::ostringstream s;
  s << "max weight " << r.max_weight << " (B = " << r.declared_B << ")\n"
    << "max output " << r.max_output << " (M = " << r.declared_M << ")\n"
    << "parameters: " << r.nonzero_count << " nonzero of " << r.dense_count << " dense\n"
    << (r.pass ? "bounds hold\n" : "bounds violated\n");
  return s.str();
}

void warn_scale(const Rational& M) {
  static const Rational limit = Rational(2).pow(256);
  if (M.abs() > limit) std::cerr << "warning: output bound exceeds 2^256; float evaluation will overflow\n";
}

// ---------------------------------------------------------------------------

int cmd_decompose(const std::string& alpha_s, std::optional<int> k, const std::string& out) {
  std::vector<int> alpha;
  std::stringstream ss(alpha_s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      std::size_t pos = 0;
      alpha.push_back(std::stoi(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--alpha: expected comma-separated non-negative integers");
    }
  }
  reluk::MultiIndex a(alpha);
  auto t = k ? reluk::decompose_inhomogeneous(a, *k) : reluk::decompose_monomial(a);
  emit(dump(reluk::to_json(t)), out);
  return kOk;
}

int cmd_compile(const std::string& mode, int k, std::optional<int> L, const std::string& B_s, const std::string& in,
                const std::string& out, bool prune, const std::string& bounds_out, const Options& opt) {
  const Rational B = parse_rational_flag(B_s, "--B");
  const auto p = read_polynomial(in);
  Network net = [&] {
    if (mode == "shallow") return reluk::compile_shallow(p, k, B, prune);
    if (!L) throw UsageError("--L is required for --mode deep");
    return reluk::compile_deep(p, k, *L, B, prune);
  }();
  const Rational M = mode == "shallow" ? reluk::shallow_M_bound(p, k, B) : reluk::deep_M_bound(p, k, *L, B);
  warn_scale(M);
  net.set_declared_bounds(reluk::DeclaredBounds{B, M});
  const auto rep = reluk::check_bounds(net, B, M);
  emit(reluk::serialize(net), out);
  const std::string sidecar = !bounds_out.empty() ? bounds_out : (out.empty() ? "" : out + ".bounds.json");
  if (!sidecar.empty())
    reluk::write_file_atomic(sidecar, dump(reluk::to_json(rep)));
  else
    std::cerr << (opt.format == "text" ? text_bounds(rep) : dump(reluk::to_json(rep)));
  return rep.pass ? kOk : kVerify;
}

int cmd_embed(int k, int L, const std::string& in, const std::string& out, const std::string& bounds_out,
              const Options& opt) {
  const Network f = read_network(in);
  Network deep = reluk::embed_shallow(f, k, L);
  Rational B, M;
  if (f.declared_bounds()) {
    B = f.declared_bounds()->B;
    M = f.declared_bounds()->M;
  } else {
    const auto r = reluk::check_bounds(f, Rational(0), Rational(0));
    B = r.max_weight;
    M = r.max_output;
  }
  const Rational B2 = reluk::embed_weight_bound(k, B), M2 = reluk::embed_output_bound(k, M);
  warn_scale(M2);
  deep.set_declared_bounds(reluk::DeclaredBounds{B2, M2});
  const auto rep = reluk::check_bounds(deep, B2, M2);
  emit(reluk::serialize(deep), out);
  const std::string sidecar = !bounds_out.empty() ? bounds_out : (out.empty() ? "" : out + ".bounds.json");
  if (!sidecar.empty())
    reluk::write_file_atomic(sidecar, dump(reluk::to_json(rep)));
  else
    std::cerr << (opt.format == "text" ? text_bounds(rep) : dump(reluk::to_json(rep)));
  return rep.pass ? kOk : kVerify;
}

int cmd_certify(const std::string& net_path, const std::string& target_path, const std::string& out,
                const Options& opt) {
  const Network net = read_network(net_path);
  const json target = reluk::parse_json_text(reluk::read_file(target_path));
  reluk::CertificateReport rep;
  if (target.is_object() && target.contains("kind"))
    rep = reluk::certify_equal(net, reluk::network_from_json(target));
  else
    rep = reluk::certify_equal(net, reluk::polynomial_from_json(target));
  if (opt.format == "text") {
    std::ostringstream s;
    s << reluk::status_name(rep.status) << "\n";
    for (const auto& f : rep.checked_structure) s << "  " << f << "\n";
    s << "point check: " << rep.point_check.failures << " failures at " << rep.point_check.count << " points\n";
    if (!rep.message.empty()) s << rep.message << "\n";
    emit(s.str(), out);
  } else {
    emit(dump(reluk::to_json(rep)), out);
  }
  switch (rep.status) {
    case reluk::CertStatus::proven: return kOk;
    case reluk::CertStatus::refuted: return kVerify;
    case reluk::CertStatus::not_recognized: return kNotRecognized;
  }
  return kInternal;
}

int cmd_eval(const std::string& net_path, const std::string& points_path, std::optional<std::size_t> random_n,
             std::uint64_t seed, const std::string& out, const Options& opt) {
  const Network net = read_network(net_path);
  std::vector<reluk::ExactVector> pts;
  if (!points_path.empty()) {
    const json pj = reluk::parse_json_text(reluk::read_file(points_path));
    if (!pj.is_array()) throw reluk::ParseError("$", "expected an array of points");
    for (std::size_t i = 0; i < pj.size(); ++i) {
      const std::string path = "$[" + std::to_string(i) + "]";
      if (!pj[i].is_array() || pj[i].size() != net.input_dim())
        throw reluk::ParseError(path, "expected " + std::to_string(net.input_dim()) + " coordinates");
      reluk::ExactVector x;
      for (std::size_t c = 0; c < pj[i].size(); ++c)
        x.push_back(reluk::io_detail::rational(pj[i][c], path + "[" + std::to_string(c) + "]"));
      pts.push_back(std::move(x));
    }
  } else {
    reluk::Rng rng(seed);
    pts = reluk::random_ball_points(rng, net.input_dim(), *random_n);
  }
  json res = json::array();
  std::ostringstream text;
  for (const auto& x : pts) {
    const Rational v = reluk::evaluate_exact(net, x);
    json xs = json::array();
    for (const auto& c : x) xs.push_back(c.str());
    res.push_back(json{{"x", xs}, {"value", v.str()}, {"approx", v.to_double()}});
    for (const auto& c : x) text << c << " ";
    text << v << "\n";
  }
  emit(opt.format == "text" ? text.str() : dump(res), out);
  return kOk;
}

int cmd_bounds(const std::string& net_path, const std::string& B_s, const std::string& M_s, const std::string& out,
               const Options& opt) {
  const Network net = read_network(net_path);
  std::optional<Rational> B, M;
  if (!B_s.empty()) B = parse_rational_flag(B_s, "--B");
  if (!M_s.empty()) M = parse_rational_flag(M_s, "--M");
  if (net.declared_bounds()) {
    if (!B) B = net.declared_bounds()->B;
    if (!M) M = net.declared_bounds()->M;
  }
  if (!B || !M) throw UsageError("network declares no bounds: pass --B and --M");
  const auto rep = reluk::check_bounds(net, *B, *M);
  emit(opt.format == "text" ? text_bounds(rep) : dump(reluk::to_json(rep)), out);
  return rep.pass ? kOk : kVerify;
}

int cmd_experiment(const std::string& which, const std::string& config, const std::string& out,
                   const std::string& csv, const std::string& dat) {
  json cfg = json::object();
  if (!config.empty()) {
    try {
      cfg = json::parse(reluk::read_file(config));
    } catch (const json::parse_error& e) {
      throw reluk::ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
  }
  reluk::approx::ExperimentReport rep;
  if (which == "analytic")
    rep = reluk::approx::run_analytic_experiment(cfg);
  else if (which == "sobolev")
    rep = reluk::approx::run_sobolev_experiment(cfg);
  else
    rep = reluk::approx::run_variation_experiment(cfg);
  emit(dump(rep.to_json()), out);
  if (!csv.empty()) reluk::write_file_atomic(csv, rep.csv());
  if (!dat.empty()) reluk::write_file_atomic(dat, rep.dat());
  return rep.pass ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact polynomial-to-ReLU^k network compiler and certifier"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string out, in, bounds_out;
  int k = 2;
  std::optional<int> L, k_opt;
  std::string B_s = "1", M_s;
  bool prune = false;

  auto* dec = app.add_subcommand("decompose", "Write x^alpha as a combination of powers of linear forms");
  std::string alpha;
  dec->add_option("--alpha", alpha, "Multi-index, e.g. 1,1")->required();
  dec->add_option("--k", k_opt, "Degree budget (inhomogeneous decomposition)");
  dec->add_option("--out", out, "Output file (default stdout)");

  auto* comp = app.add_subcommand("compile", "Compile a polynomial into a ReLU^k network");
  std::string mode = "shallow";
  comp->add_option("--mode", mode)->check(CLI::IsMember({"shallow", "deep"}));
  comp->add_option("--k", k)->required();
  comp->add_option("--L", L);
  comp->add_option("--B", B_s, "Weight bound (rational string)");
  comp->add_option("--in", in, "Polynomial JSON")->required()->check(CLI::ExistingFile);
  comp->add_option("--out", out);
  comp->add_option("--bounds-out", bounds_out, "BoundsReport sidecar (default <out>.bounds.json)");
  comp->add_flag("--prune", prune, "Drop units with zero output");

  auto* emb = app.add_subcommand("embed", "Embed a shallow ReLU^(k^l) network into a deep ReLU^k network");
  int embed_L = 1;
  emb->add_option("--k", k)->required();
  emb->add_option("--L", embed_L)->required();
  emb->add_option("--in", in, "Shallow network JSON")->required()->check(CLI::ExistingFile);
  emb->add_option("--out", out);
  emb->add_option("--bounds-out", bounds_out);

  auto* cert = app.add_subcommand("certify", "Prove a network equals a polynomial or shallow network");
  std::string net_path, target_path;
  cert->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  cert->add_option("--target", target_path)->required()->check(CLI::ExistingFile);
  cert->add_option("--out", out);

  auto* ev = app.add_subcommand("eval", "Evaluate a network exactly");
  std::string points;
  std::optional<std::size_t> random_n;
  std::uint64_t seed = 0;
  ev->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  auto* pts_opt = ev->add_option("--points", points, "JSON array of points")->check(CLI::ExistingFile);
  auto* rnd_opt = ev->add_option("--random", random_n, "Number of random ball points");
  pts_opt->excludes(rnd_opt);
  ev->add_option("--seed", seed);
  ev->add_option("--out", out);

  auto* bnd = app.add_subcommand("bounds", "Check weight and output bounds");
  std::string bounds_B;
  bnd->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  bnd->add_option("--B", bounds_B);
  bnd->add_option("--M", M_s);
  bnd->add_option("--out", out);

  auto* exp = app.add_subcommand("experiment", "Run an approximation experiment");
  std::string which, config, csv, dat;
  exp->add_option("kind", which)->required()->check(CLI::IsMember({"analytic", "sobolev", "variation"}));
  exp->add_option("--config", config)->check(CLI::ExistingFile);
  exp->add_option("--out", out);
  exp->add_option("--csv", csv);
  exp->add_option("--dat", dat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*dec) return cmd_decompose(alpha, k_opt, out);
    if (*comp) return cmd_compile(mode, k, L, B_s, in, out, prune, bounds_out, opt);
    if (*emb) return cmd_embed(k, embed_L, in, out, bounds_out, opt);
    if (*cert) return cmd_certify(net_path, target_path, out, opt);
    if (*ev) {
      if (points.empty() && !random_n) throw UsageError("eval needs --points or --random");
      return cmd_eval(net_path, points, random_n, seed, out, opt);
    }
    if (*bnd) return cmd_bounds(net_path, bounds_B, M_s, out, opt);
    if (*exp) return cmd_experiment(which, config, out, csv, dat);
  } catch (const reluk::NotRecognized& e) {
    std::cerr << "not recognized: " << e.what() << "\n";
    return kNotRecognized;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const reluk::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const reluk::NotEmbeddable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const reluk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsage;
  } catch (const reluk::Error& e) {
    // DomainError, DegreeExceedsBudget, ShapeError, ...: rejected input.
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
