#pragma once

// Command-line front end.  Every verb prints one JSON document (or CSV with
// --format csv) and returns 0 on success, 1 on a failed check, 2 on bad input.

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/liouville.hpp"

namespace liouville::cli {

inline constexpr const char* kVersion = "1.0.0";

struct Flags {
  std::optional<double> m, p, q;
  std::optional<double> epsilon, eta, theta, iota, lambda, gamma;
  std::optional<double> alpha, beta, a, b;
  std::optional<int> i;
  std::string window;
  int points = 2000;
  std::string format = "json";
  unsigned seed = 42;
  std::string out, solution, manifold;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::pair<double, double> parse_window(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--window expects lo:hi");
  try {
    std::size_t used = 0;
    const double lo = std::stod(s.substr(0, colon), &used);
    const double hi = std::stod(s.substr(colon + 1));
    if (!(lo > 0.0 && hi > lo)) throw UsageError("--window needs 0 < lo < hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--window expects numbers lo:hi, got '" + s + "'");
  }
}

inline Params require_params(const Flags& f) {
  if (!f.m || !f.p || !f.q) throw UsageError("--m, --p and --q are required");
  return Params::make(*f.m, *f.p, *f.q);
}

inline void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "." + std::to_string(k), out);
  } else {
    out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

inline void emit(const Json& doc, const Flags& f, std::ostream& out) {
  if (f.format == "csv") {
    out << "key,value\n";
    flatten(doc, "", out);
  } else {
    out << doc.dump(2) << '\n';
  }
}

inline void emit_grid(const PiecewiseSolution& s, double lo, double hi, int points,
                      std::ostream& out) {
  const auto u = s.radial();
  out << "r,u,du,residual_over_S,ratio\n" << std::setprecision(17);
  for (double r : verification_grid(lo, hi, points)) {
    const PieceEval e = s.eval(r);
    const ResidualTerms t = residual_terms(s.params, s.manifold, u, r);
    const double total = t.rescaled ? std::pow(e.value, s.params.m - 1.0) * t.total() : t.total();
    out << r << ',' << e.value << ',' << e.deriv << ',' << total << ','
        << (t.scale() > 0 ? t.total() / t.scale() : 0.0) << '\n';
  }
}

inline Json growth_json(const GrowthThreshold& g) {
  return {{"kind", std::string(to_string(g.kind))},
          {"alpha", io::opt(g.alpha)},
          {"beta", io::opt(g.beta)},
          {"kappa_sup", io::opt(g.kappa_sup)}};
}

inline Json classify_json(const Params& x) {
  const KRegion k = k_classify(x);
  Json j{{"params", to_json(x)},
         {"region", std::string(to_string(classify(x)))},
         {"boundary_distance", boundary_distance(x)},
         {"growth", growth_json(critical_growth(x))},
         {"k_region",
          {{"tag", k.tag ? Json(std::string(to_string(*k.tag))) : Json(nullptr)},
           {"on_critical_line", k.on_critical_line}}}};
  if (!k.on_critical_line) {
    const OpenInterval a = admissible_a(x);
    j["admissible_a"] = {io::num(a.lo), io::num(a.hi)};
  } else {
    j["admissible_a"] = nullptr;
  }
  return j;
}

inline ConstructionOptions options_from(const Flags& f) {
  ConstructionOptions o;
  if (f.epsilon) o.epsilon = *f.epsilon;
  o.eta = f.eta;
  o.theta = f.theta;
  o.iota = f.iota;
  o.lambda = f.lambda;
  o.gamma = f.gamma;
  o.plan.points = f.points;
  o.plan.seed = f.seed;
  if (!f.window.empty()) std::tie(o.plan.lo, o.plan.hi) = parse_window(f.window);
  return o;
}

inline ModelManifold load_manifold(const std::string& path) {
  return manifold_from_json(read_json_file(path));
}

// ------------------------------------------------------------------- verbs

inline int do_classify(const Flags& f, std::ostream& out) {
  emit(classify_json(require_params(f)), f, out);
  return 0;
}

inline int do_exponents(const Flags& f, std::ostream& out) {
  const Params x = require_params(f);
  Json j = classify_json(x);
  const Region r = classify(x);
  if (r == Region::G5) {
    if (x.p > 0.0) {
      j["H"] = H_of_p(x.m, x.p);
      j["H_eta"] = H_optimal_eta(x.m, x.p);
    }
    const auto t = kappa_threshold(x);
    j["kappa_threshold"] = {{"statement", t.statement}, {"proof", io::opt(t.proof)}};
  } else if (r == Region::G6) {
    j["kappa_threshold"] = {{"statement", kappa_threshold(x).statement}};
  } else if (r == Region::G3) {
    j["existence_log_exponent"] = g3_existence_log_exponent(x);
  }
  if (f.a) {
    if (f.b) {
      const CondAbResult c = check_cond_ab(x, *f.a, *f.b);
      j["lemma_exponents"] = to_json(c.exponents);
      j["cond_ab"] = {{"b", *f.b}, {"ok", c.ok}, {"diagnostic", c.diagnostic}};
    } else {
      j["lemma_exponents"] = to_json(lemma_exponents(x, *f.a));
    }
  }
  emit(j, f, out);
  return 0;
}

inline int do_construct(const Flags& f, std::ostream& out) {
  const Params x = require_params(f);
  const ConstructionOptions o = options_from(f);
  const PiecewiseSolution s = construct(x, o);
  const Json doc = to_json(s);
  if (!f.out.empty()) write_json_file(f.out, doc);
  if (f.format == "csv") {
    const double lo = o.plan.lo > 0 ? o.plan.lo : s.window_lo();
    const double hi = o.plan.hi > 0 ? o.plan.hi : s.window_hi();
    emit_grid(s, lo, hi, f.points, out);
  } else {
    out << doc.dump(2) << '\n';
  }
  return s.report && s.report->pass ? 0 : 1;
}

inline int do_verify(const Flags& f, std::ostream& out) {
  if (f.solution.empty()) throw UsageError("--solution is required");
  const PiecewiseSolution s = solution_from_json(read_json_file(f.solution));
  VerifyPlan plan;
  plan.points = f.points;
  plan.seed = f.seed;
  if (!f.window.empty()) std::tie(plan.lo, plan.hi) = parse_window(f.window);
  const SolutionReport rep = verify_solution(s, plan);
  if (f.format == "csv") {
    emit_grid(s, plan.lo > 0 ? plan.lo : s.window_lo(), plan.hi > 0 ? plan.hi : s.window_hi(),
              f.points, out);
  } else {
    Json j{{"solution", f.solution},
           {"params", to_json(s.params)},
           {"region", std::string(to_string(s.region))},
           {"report", to_json(rep)}};
    if (s.report) j["stored_pass"] = s.report->pass;
    out << j.dump(2) << '\n';
  }
  return rep.pass ? 0 : 1;
}

inline int do_certify(const Flags& f, std::ostream& out) {
  if (f.manifold.empty()) throw UsageError("--manifold is required");
  if (f.window.empty()) throw UsageError("--window lo:hi is required");
  const auto [lo, hi] = parse_window(f.window);
  VolumeBound bound;
  if (f.gamma) {
    if (!f.lambda) throw UsageError("--gamma needs --lambda");
    bound = VolumeBound::exp_power_log(*f.lambda, *f.gamma);
  } else if (f.lambda) {
    bound = VolumeBound::exponential(*f.lambda);
  } else if (f.alpha) {
    bound = VolumeBound::power_log(*f.alpha, f.beta.value_or(0.0));
  } else {
    throw UsageError("give --alpha [--beta], --lambda, or --lambda --gamma");
  }
  const ModelManifold man = load_manifold(f.manifold);
  const GrowthCertificate c = certify_growth(man, bound, lo, hi);
  emit({{"manifold", to_json(man)}, {"certificate", to_json(c)}}, f, out);
  return c.pass ? 0 : 1;
}

inline int do_lemma1(const Flags& f, std::ostream& out) {
  PiecewiseSolution s;
  if (!f.solution.empty()) {
    s = solution_from_json(read_json_file(f.solution));
  } else {
    ConstructionOptions o = options_from(f);
    o.verify = false;
    s = construct(require_params(f), o);
  }
  const double b = f.b.value_or(50.0);
  std::vector<int> levels;
  if (f.i) {
    levels = {*f.i};
  } else {
    for (int k = 3; k <= 8; ++k) levels.push_back(k);
  }
  Json reports = Json::array();
  bool pass = true;
  for (int i : levels) {
    if (i < 1) throw UsageError("--i must be at least 1");
    const double a = f.a.value_or(1.0 / i);
    const Lemma1Report r = verify_lemma1(s.params, s.manifold, s, a, b, i);
    pass = pass && r.pass;
    reports.push_back(to_json(r));
  }
  emit({{"params", to_json(s.params)}, {"reports", reports}, {"pass", pass}}, f, out);
  return pass ? 0 : 1;
}

inline int do_criteria(const Flags& f, std::ostream& out) {
  ModelManifold man;
  if (!f.manifold.empty()) {
    man = load_manifold(f.manifold);
  } else if (f.alpha) {
    WarpProfile w;
    w.outer = OuterProfile::power_log(*f.alpha, f.beta.value_or(0.0));
    man = ModelManifold(w);
  } else {
    throw UsageError("give --manifold PATH or --alpha [--beta]");
  }
  const double m = f.m.value_or(2.0);
  if (!(m > 1.0)) throw UsageError("--m must exceed 1");
  const CriteriaReport r = classical_criteria(man, m, f.p);
  emit({{"manifold", to_json(man)}, {"m", m}, {"criteria", to_json(r)}}, f, out);
  return 0;
}

inline int do_info(const Flags& f, std::ostream& out) {
  emit({{"name", "liouville"},
        {"version", kVersion},
        {"verification_slack", default_slack()},
        {"slack_env", "LIOUVILLE_TOL"},
        {"default_seed", 42},
        {"boundary_tolerance", kBoundaryTol},
        {"regions", {"G1", "G2", "G3", "G4", "G5", "G6"}},
        {"verbs",
         {"classify", "exponents", "construct", "verify", "certify-volume", "lemma1", "criteria",
          "info"}}},
       f, out);
  return 0;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Liouville-type inequalities on model manifolds", "liouville"};
  app.require_subcommand(1, 1);
  Flags f;

  auto params = [&](CLI::App* c, bool required) {
    auto* m = c->add_option("--m", f.m, "exponent m > 1");
    auto* p = c->add_option("--p", f.p, "exponent p");
    auto* q = c->add_option("--q", f.q, "exponent q");
    if (required) {
      m->required();
      p->required();
      q->required();
    }
  };
  auto knobs = [&](CLI::App* c) {
    c->add_option("--epsilon", f.epsilon, "excess of the log exponent (default 1)");
    c->add_option("--eta", f.eta, "infinity-profile exponent");
    c->add_option("--theta", f.theta, "origin-profile exponent");
    c->add_option("--iota", f.iota, "G5 manifold rate");
    c->add_option("--lambda", f.lambda, "G4/G6 manifold rate");
    c->add_option("--gamma", f.gamma, "G6 manifold power");
  };
  auto grid = [&](CLI::App* c) {
    c->add_option("--window", f.window, "verification window lo:hi");
    c->add_option("--points", f.points, "grid points")->check(CLI::Range(2, 10000000));
    c->add_option("--seed", f.seed, "seed for the random test functions");
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* classify_cmd = app.add_subcommand("classify", "region, thresholds and test exponents");
  params(classify_cmd, true);
  format(classify_cmd);

  auto* exponents_cmd = app.add_subcommand("exponents", "thresholds and lemma exponents");
  params(exponents_cmd, true);
  exponents_cmd->add_option("--a", f.a, "test exponent a");
  exponents_cmd->add_option("--b", f.b, "cutoff power b");
  format(exponents_cmd);

  auto* construct_cmd = app.add_subcommand("construct", "build and verify a solution");
  params(construct_cmd, true);
  knobs(construct_cmd);
  grid(construct_cmd);
  construct_cmd->add_option("--out", f.out, "write the solution document here");
  format(construct_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "re-verify a saved solution");
  verify_cmd->add_option("--solution", f.solution, "solution document")->required();
  grid(verify_cmd);
  format(verify_cmd);

  auto* certify_cmd = app.add_subcommand("certify-volume", "volume growth certificate");
  certify_cmd->add_option("--manifold", f.manifold, "manifold or solution document")->required();
  certify_cmd->add_option("--alpha", f.alpha, "power of r");
  certify_cmd->add_option("--beta", f.beta, "power of ln r");
  certify_cmd->add_option("--lambda", f.lambda, "exponential rate");
  certify_cmd->add_option("--gamma", f.gamma, "power in e^{lambda r^gamma ln r}");
  certify_cmd->add_option("--window", f.window, "window lo:hi")->required();
  format(certify_cmd);

  auto* lemma_cmd = app.add_subcommand("lemma1", "explicit Caccioppoli-type inequality");
  params(lemma_cmd, false);
  knobs(lemma_cmd);
  lemma_cmd->add_option("--solution", f.solution, "solution document");
  lemma_cmd->add_option("--a", f.a, "test exponent (default 1/i)");
  lemma_cmd->add_option("--b", f.b, "cutoff power (default 50)");
  lemma_cmd->add_option("--i", f.i, "cutoff level (default 3..8)");
  format(lemma_cmd);

  auto* criteria_cmd = app.add_subcommand("criteria", "classical volume criteria");
  criteria_cmd->add_option("--manifold", f.manifold, "manifold or solution document");
  criteria_cmd->add_option("--alpha", f.alpha, "power of r in V");
  criteria_cmd->add_option("--beta", f.beta, "power of ln r in V");
  criteria_cmd->add_option("--m", f.m, "m for the m-parabolicity test (default 2)");
  criteria_cmd->add_option("--p", f.p, "exponent for the volume integrals");
  format(criteria_cmd);

  auto* info_cmd = app.add_subcommand("info", "version and defaults");
  format(info_cmd);

  std::vector<const char*> argv{"liouville"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*classify_cmd) return detail::do_classify(f, out);
    if (*exponents_cmd) return detail::do_exponents(f, out);
    if (*construct_cmd) return detail::do_construct(f, out);
    if (*verify_cmd) return detail::do_verify(f, out);
    if (*certify_cmd) return detail::do_certify(f, out);
    if (*lemma_cmd) return detail::do_lemma1(f, out);
    if (*criteria_cmd) return detail::do_criteria(f, out);
    if (*info_cmd) return detail::do_info(f, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConstructionError& e) {
    err << "error: stage " << e.stage() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, out, err);
}

}  // namespace liouville::cli
