#pragma once

// JSON documents for parameters, manifolds, solutions and reports.
// Doubles are written with round-trip precision; non-finite values are
// written as the strings "inf", "-inf" and "nan".

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "liouville/constructors.hpp"
#include "liouville/criteria.hpp"
#include "liouville/estimates.hpp"
#include "liouville/manifold.hpp"
#include "liouville/params.hpp"
#include "liouville/solution.hpp"

namespace liouville {

using Json = nlohmann::ordered_json;

class FormatError : public Error {
 public:
  using Error::Error;
};

namespace io {

inline Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline double get_num(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw FormatError("expected a number, got " + j.dump());
}

inline double field(const Json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return get_num(j.at(key));
}

inline Json opt(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

inline std::optional<double> get_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_num(j.at(key));
}

}  // namespace io

// ------------------------------------------------------------------ params

inline Json to_json(const Params& x) { return {{"m", x.m}, {"p", x.p}, {"q", x.q}}; }

inline Params params_from_json(const Json& j) {
  return Params::make(io::field(j, "m"), io::field(j, "p"), io::field(j, "q"));
}

// ---------------------------------------------------------------- manifold

inline Json to_json(const OuterProfile& o) {
  Json j{{"kind", std::string(to_string(o.kind))}};
  switch (o.kind) {
    case OuterKind::power_log:
      j["alpha"] = o.alpha;
      j["beta"] = o.beta;
      break;
    case OuterKind::pure_exp: j["lambda"] = o.lambda; break;
    case OuterKind::scaled_exp: j["iota"] = o.iota; break;
    case OuterKind::exp_power_log:
      j["lambda"] = o.lambda;
      j["gamma"] = o.gamma;
      break;
  }
  return j;
}

inline OuterProfile outer_from_json(const Json& j) {
  const auto kind = outer_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case OuterKind::power_log:
      return OuterProfile::power_log(io::field(j, "alpha"), io::field(j, "beta"));
    case OuterKind::pure_exp: return OuterProfile::pure_exp(io::field(j, "lambda"));
    case OuterKind::scaled_exp: return OuterProfile::scaled_exp(io::field(j, "iota"));
    case OuterKind::exp_power_log:
      return OuterProfile::exp_power_log(io::field(j, "lambda"), io::field(j, "gamma"));
  }
  throw FormatError("unknown outer profile");
}

inline Json to_json(const WarpProfile& w) {
  return {{"n", w.n}, {"r1", w.r1}, {"r2", w.r2}, {"c0", io::opt(w.c0)}, {"outer", to_json(w.outer)}};
}

inline WarpProfile warp_from_json(const Json& j) {
  WarpProfile w;
  w.n = j.value("n", 2);
  w.r1 = j.contains("r1") ? io::field(j, "r1") : 1.0;
  w.r2 = j.contains("r2") ? io::field(j, "r2") : 4.0;
  w.c0 = io::get_opt(j, "c0");
  w.outer = outer_from_json(j.at("outer"));
  return w;
}

inline Json to_json(const ModelManifold& man) { return to_json(man.profile()); }

/// Accepts a bare manifold document or any document with a "manifold" field.
inline ModelManifold manifold_from_json(const Json& j) {
  if (j.contains("manifold")) return ModelManifold(warp_from_json(j.at("manifold")));
  return ModelManifold(warp_from_json(j));
}

inline Json to_json(const VolumeBound& b) {
  Json j{{"kind", std::string(to_string(b.kind))}};
  switch (b.kind) {
    case VolumeBound::Kind::power_log:
      j["alpha"] = b.alpha;
      j["beta"] = b.beta;
      break;
    case VolumeBound::Kind::exponential: j["lambda"] = b.lambda; break;
    case VolumeBound::Kind::exp_power_log:
      j["lambda"] = b.lambda;
      j["gamma"] = b.gamma;
      break;
  }
  return j;
}

inline Json to_json(const GrowthCertificate& c) {
  return {{"bound", to_json(c.bound)},
          {"window", {c.r_lo, c.r_hi}},
          {"log_sup_ratio", io::num(c.log_sup_ratio)},
          {"sup_ratio", io::num(c.sup_ratio)},
          {"fitted_constant", io::num(c.fitted_constant)},
          {"tail_slope", io::num(c.tail_slope)},
          {"slope_tolerance", c.slope_tolerance},
          {"pass", c.pass}};
}

// ---------------------------------------------------------------- criteria

inline Json to_json(const TailEstimate& t) {
  return {{"verdict", std::string(to_string(t.verdict))},
          {"power_exponent", io::num(t.slope)},
          {"log_exponent", io::num(t.log_exponent)}};
}

inline Json to_json(const CriteriaReport& r) {
  Json j{{"r_start", r.r_start},
         {"parabolic", to_json(r.parabolic_cy)},
         {"m_parabolic", to_json(r.m_parabolic)},
         {"stochastically_complete", to_json(r.stochastically_complete)}};
  if (r.vol_int_1) j["volume_integral_1"] = to_json(*r.vol_int_1);
  if (r.vol_int_2) j["volume_integral_2"] = to_json(*r.vol_int_2);
  if (r.conjecture_integrals) {
    j["conjecture_verdict"] = std::string(to_string(*r.conjecture_integrals));
    j["conjecture_agree"] = r.conjecture_agree;
  }
  return j;
}

// ----------------------------------------------------------------- reports

inline Json to_json(const VerificationReport& r) {
  return {{"window", {r.lo, r.hi}},
          {"points", r.points},
          {"evaluated", r.evaluated},
          {"excluded", r.excluded},
          {"worst_residual", io::num(r.worst_residual)},
          {"worst_ratio", io::num(r.worst_ratio)},
          {"worst_location", io::num(r.worst_location)},
          {"slack", r.slack},
          {"pass", r.pass}};
}

inline VerificationReport verification_from_json(const Json& j) {
  VerificationReport r;
  r.lo = io::get_num(j.at("window").at(0));
  r.hi = io::get_num(j.at("window").at(1));
  r.points = j.at("points").get<int>();
  r.evaluated = j.at("evaluated").get<int>();
  r.excluded = j.at("excluded").get<int>();
  r.worst_residual = io::field(j, "worst_residual");
  r.worst_ratio = io::field(j, "worst_ratio");
  r.worst_location = io::field(j, "worst_location");
  r.slack = io::field(j, "slack");
  r.pass = j.at("pass").get<bool>();
  return r;
}

inline Json to_json(const WeakFormResult& w) {
  return {{"support", {w.support_lo, w.support_hi}},
          {"flux_integral", io::num(w.flux_integral)},
          {"source_integral", io::num(w.source_integral)},
          {"margin", io::num(w.margin)},
          {"log_scale", io::num(w.log_scale)},
          {"pass", w.pass}};
}

inline WeakFormResult weak_from_json(const Json& j) {
  WeakFormResult w;
  w.support_lo = io::get_num(j.at("support").at(0));
  w.support_hi = io::get_num(j.at("support").at(1));
  w.flux_integral = io::field(j, "flux_integral");
  w.source_integral = io::field(j, "source_integral");
  w.margin = io::field(j, "margin");
  w.abs_total = std::abs(w.flux_integral) + std::abs(w.source_integral);
  w.log_scale = io::field(j, "log_scale");
  w.pass = j.at("pass").get<bool>();
  return w;
}

inline Json to_json(const SolutionReport& r) {
  Json weak = Json::array();
  for (const auto& w : r.weak) weak.push_back(to_json(w));
  return {{"grid", to_json(r.grid)},
          {"weak_form", {{"passed", r.weak_passed}, {"tests", weak}}},
          {"c1_value_mismatch", io::num(r.value_mismatch)},
          {"c1_deriv_mismatch", io::num(r.deriv_mismatch)},
          {"positive", r.positive},
          {"decreasing", r.decreasing},
          {"pass", r.pass}};
}

inline SolutionReport solution_report_from_json(const Json& j) {
  SolutionReport r;
  r.grid = verification_from_json(j.at("grid"));
  r.weak_passed = j.at("weak_form").at("passed").get<int>();
  for (const auto& w : j.at("weak_form").at("tests")) r.weak.push_back(weak_from_json(w));
  r.value_mismatch = io::field(j, "c1_value_mismatch");
  r.deriv_mismatch = io::field(j, "c1_deriv_mismatch");
  r.positive = j.at("positive").get<bool>();
  r.decreasing = j.at("decreasing").get<bool>();
  r.pass = j.at("pass").get<bool>();
  return r;
}

inline Json to_json(const ChainStep& s) {
  return {{"step_name", s.name},
          {"lhs", io::num(s.lhs)},
          {"rhs", io::num(s.rhs)},
          {"ratio", io::num(s.ratio)},
          {"pass", s.pass}};
}

inline Json to_json(const LemmaExponents& e) {
  return {{"a", e.a}, {"s", io::num(e.s)},         {"t", io::num(e.t)},
          {"gamma", io::num(e.gamma)}, {"hoelder_rho", io::num(e.rho)},
          {"b_min", io::num(e.b_min)}};
}

inline Json to_json(const Lemma1Report& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  return {{"a", r.a},
          {"b", r.b},
          {"i", r.i},
          {"exponents", to_json(r.exponents)},
          {"L", io::num(r.L)},
          {"R1", io::num(r.R1)},
          {"R2", io::num(r.R2)},
          {"prefactor", io::num(r.prefactor)},
          {"log_scale", io::num(r.log_scale)},
          {"shift", r.shift},
          {"steps", steps},
          {"support_check", to_json(r.support_check)},
          {"pass", r.pass}};
}

inline Json to_json(const EnergyReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) steps.push_back(to_json(s));
  return {{"R", r.R},
          {"lambda", r.lambda_exp},
          {"z", r.z},
          {"l", r.l},
          {"slope_bound", r.slope_bound},
          {"kappa", r.kappa},
          {"young_worst", io::num(r.young_worst)},
          {"young_pass", r.young_pass},
          {"steps", steps},
          {"exponent", io::num(r.exponent)},
          {"kappa_rough", r.kappa_rough},
          {"below_threshold", r.below_threshold},
          {"pass", r.pass}};
}

inline Json to_json(const CCoefficients& c) {
  return {{"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3},       {"c4", c.c4},
          {"c5", c.c5}, {"c6", c.c6}, {"c7", c.c7},       {"C1", c.C1},
          {"C2", io::num(c.C2)}, {"C3", c.C3}, {"C4", io::num(c.C4)}, {"kappa", c.kappa},
          {"kappa_star", c.kappa_star}, {"C1_negative", c.C1_negative}};
}

// --------------------------------------------------------------- solutions

inline Json to_json(const Piece& piece, double lo, double hi) {
  Json c;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OriginIntegral>) {
          c = {{"s", p.s}, {"theta", p.theta}, {"A", p.A}};
        } else if constexpr (std::is_same_v<T, LogPowerTail>) {
          c = {{"K", p.K}, {"k", p.k}, {"e", p.e}};
        } else if constexpr (std::is_same_v<T, LogPower>) {
          c = {{"C", p.C}, {"kappa", p.kappa}};
        } else if constexpr (std::is_same_v<T, ShiftedPower>) {
          c = {{"offset", p.offset}, {"eta", p.eta}};
        } else if constexpr (std::is_same_v<T, Exponential>) {
          c = {{"eta", p.eta}};
        } else if constexpr (std::is_same_v<T, OriginPower>) {
          c = {{"c", p.c}, {"p", p.p}, {"m", p.m}};
        } else if constexpr (std::is_same_v<T, OriginPolynomial>) {
          c = {{"c", p.c}, {"alpha", p.alpha}};
        } else {
          c = Json::object();
        }
      },
      piece);
  return {{"kind", std::string(piece_kind(piece))},
          {"domain", {io::num(lo), io::num(hi)}},
          {"coefficients", c}};
}

inline Piece piece_from_json(const Json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const Json& c = j.at("coefficients");
  using io::field;
  if (kind == "origin_integral")
    return OriginIntegral{field(c, "s"), field(c, "theta"), field(c, "A")};
  if (kind == "log_power_tail") return LogPowerTail{field(c, "K"), field(c, "k"), field(c, "e")};
  if (kind == "log_power") return LogPower{field(c, "C"), field(c, "kappa")};
  if (kind == "shifted_power") return ShiftedPower{field(c, "offset"), field(c, "eta")};
  if (kind == "exponential") return Exponential{field(c, "eta")};
  if (kind == "origin_power") return OriginPower{field(c, "c"), field(c, "p"), field(c, "m")};
  if (kind == "origin_polynomial") return OriginPolynomial{field(c, "c"), field(c, "alpha")};
  if (kind == "exp_log_over_r") return ExpLogOverR{};
  throw FormatError("unknown piece kind '" + kind + "'");
}

inline Json to_json(const PiecewiseSolution& s) {
  const double R0 = s.glue.R0;
  Json glue{{"R0", R0},
            {"rho0", io::opt(s.glue.rho0)},
            {"tau", s.glue.tau},
            {"lambda_origin", io::num(s.glue.lambda_origin)},
            {"delta", s.glue.delta}};
  if (s.glue.c1) glue["c1"] = *s.glue.c1;
  if (s.glue.a) glue["a"] = *s.glue.a;
  Json j{{"params", to_json(s.params)},
         {"region", std::string(to_string(s.region))},
         {"manifold", to_json(s.manifold)},
         {"pieces",
          {to_json(s.origin_piece, 0.0, R0),
           to_json(s.infinity_piece, R0, std::numeric_limits<double>::infinity())}},
         {"glue", glue},
         {"base_params", to_json(s.base_params)},
         {"base_weight", s.base_weight},
         {"scale", s.scale},
         {"post", {{"kind", std::string(to_string(s.post.kind))}, {"value", s.post.value}}}};
  j["verification"] = s.report ? to_json(*s.report) : Json(nullptr);
  return j;
}

inline PostKind post_kind_from_string(const std::string& s) {
  for (PostKind k : {PostKind::none, PostKind::shift, PostKind::power, PostKind::inverse_change})
    if (to_string(k) == s) return k;
  throw FormatError("unknown transform '" + s + "'");
}

inline PiecewiseSolution solution_from_json(const Json& j) {
  try {
    PiecewiseSolution s;
    s.params = params_from_json(j.at("params"));
    s.region = region_from_string(j.at("region").get<std::string>());
    s.manifold = ModelManifold(warp_from_json(j.at("manifold")));
    const Json& pieces = j.at("pieces");
    if (!pieces.is_array() || pieces.size() != 2) throw FormatError("expected two pieces");
    s.origin_piece = piece_from_json(pieces.at(0));
    s.infinity_piece = piece_from_json(pieces.at(1));
    const Json& g = j.at("glue");
    s.glue.R0 = io::field(g, "R0");
    s.glue.rho0 = io::get_opt(g, "rho0");
    s.glue.tau = io::field(g, "tau");
    s.glue.lambda_origin = io::field(g, "lambda_origin");
    s.glue.delta = io::field(g, "delta");
    s.glue.c1 = io::get_opt(g, "c1");
    s.glue.a = io::get_opt(g, "a");
    s.base_params = params_from_json(j.at("base_params"));
    s.base_weight = io::field(j, "base_weight");
    s.scale = io::field(j, "scale");
    s.post.kind = post_kind_from_string(j.at("post").at("kind").get<std::string>());
    s.post.value = io::field(j.at("post"), "value");
    if (j.contains("verification") && !j.at("verification").is_null())
      s.report = solution_report_from_json(j.at("verification"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed solution document: ") + e.what());
  }
}

// ------------------------------------------------------------------- files

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace liouville
