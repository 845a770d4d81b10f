#pragma once

// Counterexample solutions for each region: an explicit profile near
// infinity, a one-parameter family near the origin, a bisection for the
// glue radius, and the rescaling that removes the glue constant.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "liouville/manifold.hpp"
#include "liouville/numeric.hpp"
#include "liouville/params.hpp"
#include "liouville/pieces.hpp"
#include "liouville/radial.hpp"
#include "liouville/solution.hpp"

namespace liouville {

struct ConstructionOptions {
  double epsilon = 1.0;  // excess of the log exponent over its threshold
  std::optional<double> eta;
  std::optional<double> theta;
  std::optional<double> iota;
  std::optional<double> lambda;
  std::optional<double> gamma;
  std::optional<double> alpha_origin;  // exponent of c - r^α (G5, p = 0)
  std::optional<double> c0;
  int n = 2;
  bool verify = true;
  VerifyPlan plan;
};

inline RadialFunction piece_radial(const Piece& piece, double lo = 0.0,
                                   double hi = std::numeric_limits<double>::infinity()) {
  RadialFunction f;
  f.value = [piece](double r) { return evaluate(piece, r).value; };
  f.deriv = [piece](double r) { return evaluate(piece, r).deriv; };
  f.log_deriv = [piece](double r) { return evaluate(piece, r).log_deriv; };
  f.lo = lo;
  f.hi = hi;
  return f;
}

namespace detail {

inline ModelManifold make_manifold(const OuterProfile& outer, const ConstructionOptions& opt,
                                   double r1 = 1.0, double r2 = 4.0) {
  WarpProfile w;
  w.n = opt.n;
  w.r1 = r1;
  w.r2 = r2;
  w.outer = outer;
  w.c0 = opt.c0;
  return ModelManifold(w);
}

inline double outer_constant(const ModelManifold& man) {
  return man.omega() * std::pow(man.c0(), man.dimension() - 1);
}

/// Admissible θ range: (0, upper), upper infinite when q ≥ m-1.
inline double theta_upper(const Params& x, int n) {
  const double m1 = x.m - 1.0;
  if (x.q >= m1) return std::numeric_limits<double>::infinity();
  double up = 1.0 / (m1 - x.q);
  if (x.q < 0.0) up = std::min(up, -n / x.q);
  return up;
}

inline double resolve_theta(const Params& x, int n, std::optional<double> theta) {
  const double up = theta_upper(x, n);
  const double t = theta ? *theta : (std::isinf(up) ? 1.0 : 0.5 * up);
  if (!(t > 0.0) || !(t < up)) {
    std::ostringstream os;
    os << "theta=" << t << " outside (0, " << up << ")";
    throw ParameterError(os.str());
  }
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------- infinity

/// u_η(r) = ∫_r^∞ S^{-1/(m-1)} (ln s)^{η/(m-1)} ds on power_log(α, β).
inline LogPowerTail g1_infinity_piece(const Params& x, const ModelManifold& man, double eta) {
  const auto& o = man.profile().outer;
  if (o.kind != OuterKind::power_log)
    throw ParameterError("infinity profile needs a power_log manifold");
  const double m1 = x.m - 1.0;
  if (!(o.alpha > x.m))
    throw ConstructionError("infinity_profile", "profile undefined: tail diverges for alpha <= m");
  const double D = x.p + x.q - m1;
  if (!(D > 0.0)) throw ParameterError("G1 profile needs p + q > m - 1");
  const double beta_crit = m1 / D;
  if (!(o.beta > beta_crit)) throw ParameterError("G1 profile needs beta > (m-1)/(p+q-m+1)");
  if (!(eta > 0.0 && eta < o.beta - beta_crit)) {
    std::ostringstream os;
    os << "eta=" << eta << " outside (0, " << o.beta - beta_crit << ")";
    throw ParameterError(os.str());
  }
  LogPowerTail t;
  t.K = std::pow(detail::outer_constant(man), -1.0 / m1);
  t.k = (o.alpha - x.m) / m1;
  t.e = (eta - o.beta) / m1;
  return t;
}

inline RadialFunction infinity_profile_G1(const Params& x, const ModelManifold& man, double eta) {
  return piece_radial(g1_infinity_piece(x, man, eta), man.r2());
}

/// u_η(r) = (ln r)^{-η/(m-1)} on power_log(m, β).
inline LogPower g2_infinity_piece(const Params& x, const ModelManifold& man, double eta) {
  const auto& o = man.profile().outer;
  const double m1 = x.m - 1.0;
  if (o.kind != OuterKind::power_log) throw ParameterError("G2 profile needs a power_log manifold");
  if (!(o.beta > m1)) throw ParameterError("G2 profile needs beta > m - 1");
  if (!(eta > 0.0)) throw ParameterError("G2 profile needs eta > 0");
  return LogPower{1.0, eta / m1};
}

inline RadialFunction infinity_profile_G2(const Params& x, const ModelManifold& man, double eta) {
  return piece_radial(g2_infinity_piece(x, man, eta), man.r2());
}

/// First radius R0 such that the residual of inf is negative on the whole
/// scan grid [start, 10^12] beyond R0/2 (64 points per decade, at least 64
/// negative samples at the end), doubled for margin.
inline double scan_R0(const Params& x, const ModelManifold& man, const RadialFunction& inf,
                      double start, double top = 1e12) {
  const int per_decade = 64;
  const int n = int(std::ceil(std::log10(top / start) * per_decade)) + 1;
  const auto grid = numeric::log_grid(start, top, std::size_t(n));
  int last = -1;
  for (int i = 0; i < n; ++i) {
    double total;
    try {
      total = residual_terms(x, man, inf, grid[std::size_t(i)]).total();
    } catch (const Error&) {
      total = std::numeric_limits<double>::quiet_NaN();
    }
    if (!(total < 0.0)) last = i;
  }
  if (n - 1 - last < 64) {
    std::ostringstream os;
    os << "no sign change of the residual found up to r=" << top;
    throw ConstructionError("scan", os.str());
  }
  return 2.0 * grid[std::size_t(last + 1)];
}

// ------------------------------------------------------------------ origin

struct OriginProfile {
  OriginIntegral piece;
  double lambda_max = 0.0;
  RadialFunction radial() const { return piece_radial(piece, 0.0, piece.s); }
};

/// u_{1,ρ}(r) = A ∫_r^ρ (1 - e^{-x/ρ})^θ dx.  For p < 0 the bound on λ is
/// divided by u(upto)^p, the largest value of u^p on [0, upto].
inline OriginProfile origin_profile_1(const Params& x, const ModelManifold& man, double rho,
                                      double theta, std::optional<double> upto = std::nullopt) {
  const double m1 = x.m - 1.0;
  detail::resolve_theta(x, man.dimension(), theta);
  if (!(rho > 0.0)) throw ParameterError("origin profile needs rho > 0");
  OriginProfile o;
  o.piece = OriginIntegral::make(rho, theta);
  const double y1 = -std::expm1(-1.0);
  o.lambda_max = theta * m1 * std::pow(y1, theta * (m1 - x.q) + 1.0) /
                 (rho * std::pow(o.piece.A, x.q - m1));
  if (x.p < 0.0) {
    if (!upto || !(*upto < rho)) throw ParameterError("p < 0 needs an end radius below rho");
    o.lambda_max /= std::max(1.0, std::pow(o.piece.eval(*upto).value, x.p));
  }
  return o;
}

/// u_{2,ρ}(r) = A ∫_r^{2ρ} (1 - e^{-x/(2ρ)})^θ dx, used on [0, ρ].
inline OriginProfile origin_profile_2(const Params& x, const ModelManifold& man, double rho,
                                      double theta) {
  (void)man;
  const double m1 = x.m - 1.0;
  if (!(theta > 0.0)) throw ParameterError("theta must be positive");
  if (!(rho > 0.0)) throw ParameterError("origin profile needs rho > 0");
  if (theta * (m1 - x.q) >= 1.0) throw ParameterError("theta(m-1-q) must stay below 1");
  OriginProfile o;
  o.piece = OriginIntegral::make(2.0 * rho, theta);
  const double L = o.piece.integral_from(rho);
  const double A = o.piece.A;
  o.lambda_max = std::pow(A, m1 - x.q) * theta * m1 *
                 std::pow(-std::expm1(-0.5), theta * m1 - 1.0 - x.q * theta) * std::exp(-0.5) /
                 (2.0 * rho * std::max(1.0, std::pow(L * A, x.p)));
  return o;
}

// -------------------------------------------------------------------- glue

enum class OriginFamily { first, second };

struct GlueResult {
  OriginProfile origin;
  double rho0 = 0.0;
  double tau = 1.0;
  double delta = 1.0;
};

inline OriginProfile origin_member(OriginFamily fam, const Params& x, const ModelManifold& man,
                                   double rho, double theta, double R0) {
  return fam == OriginFamily::first ? origin_profile_1(x, man, rho, theta, R0)
                                    : origin_profile_2(x, man, rho, theta);
}

/// Log-derivative of the family member at R0.
inline double origin_ratio(OriginFamily fam, double rho, double theta, double R0) {
  const double s = fam == OriginFamily::first ? rho : 2.0 * rho;
  return OriginIntegral::make(s, theta).eval(R0).log_deriv;
}

/// Finds ρ0 with u_ρ'(R0)/u_ρ(R0) = u'(R0)/u(R0), then τ and δ.
inline GlueResult glue(const Params& x, const ModelManifold& man, const Piece& infinity,
                       OriginFamily fam, double theta, double R0, bool with_source = true) {
  const PieceEval at = evaluate(infinity, R0);
  const double target = at.log_deriv;
  if (!(target < 0.0)) throw ConstructionError("glue", "infinity piece is not decreasing at R0");
  auto f = [&](double rho) { return origin_ratio(fam, rho, theta, R0) - target; };
  double lo = fam == OriginFamily::first ? R0 * (1.0 + 1e-9) : R0;
  if (!(f(lo) <= 0.0)) {
    std::ostringstream os;
    os << "origin ratio " << origin_ratio(fam, lo, theta, R0) << " above target " << target
       << " at rho=R0";
    throw ConstructionError("glue", os.str());
  }
  double hi = 2.0 * R0;
  std::ostringstream curve;
  while (f(hi) <= 0.0) {
    curve << " rho=" << hi << ":" << f(hi);
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6 * R0)
      throw ConstructionError("glue", "no bracket up to rho=1e6 R0;" + curve.str());
  }
  GlueResult g;
  g.rho0 = numeric::bisect(f, lo, hi, 1e-14);
  g.origin = origin_member(fam, x, man, g.rho0, theta, R0);
  g.tau = at.value / g.origin.piece.eval(R0).value;
  if (!(g.tau > 0.0) || !std::isfinite(g.tau))
    throw ConstructionError("glue", "non-positive tau");
  const double m1 = x.m - 1.0;
  g.delta = with_source ? std::min(g.origin.lambda_max * std::pow(g.tau, m1 - x.p - x.q), 1.0)
                        : 1.0;
  return g;
}

namespace detail {

/// Sets scale/post from δ: u -> δ^{1/(p+q-m+1)} u off the critical line,
/// u -> u^{1/a} with δ a^{-p} ≥ 1 on it.
inline void apply_rescaling(PiecewiseSolution& s) {
  const Params& x = s.base_params;
  const double D = x.p + x.q - (x.m - 1.0);
  if (compare(x.p + x.q, x.m - 1.0) != 0) {
    s.scale = std::pow(s.glue.delta, 1.0 / D);
    s.glue.c1 = 1.0 / s.scale;
  } else {
    if (!(x.p < 0.0) && s.glue.delta < 1.0)
      throw ConstructionError("rescale", "critical line with p >= 0 and delta < 1");
    const double a = x.p < 0.0 ? std::max(2.0, std::pow(s.glue.delta, 1.0 / x.p)) : 1.0;
    s.glue.a = a;
    if (a != 1.0) s.post = {PostKind::power, 1.0 / a};
  }
}

inline void finish(PiecewiseSolution& s, const ConstructionOptions& opt) {
  if (opt.verify) s.report = verify_solution(s, opt.plan);
}

inline PiecewiseSolution g1_like(const Params& x, const Params& target, Region region, double beta,
                                 const ConstructionOptions& opt) {
  const double m1 = x.m - 1.0;
  const double D = x.p + x.q - m1;
  const double alpha = (x.m * x.p + x.q) / D;
  const double beta_crit = m1 / D;
  const double eta = opt.eta ? *opt.eta : 0.5 * (beta - beta_crit);
  const double theta = resolve_theta(x, opt.n, opt.theta);
  PiecewiseSolution s;
  s.params = target;
  s.region = region;
  s.base_params = x;
  s.manifold = make_manifold(OuterProfile::power_log(alpha, beta), opt);
  const LogPowerTail inf = g1_infinity_piece(x, s.manifold, eta);
  const double R0 = scan_R0(x, s.manifold, piece_radial(inf, s.manifold.r2()),
                            std::max(s.manifold.r2(), std::exp(2.0)));
  const GlueResult g = glue(x, s.manifold, inf, OriginFamily::first, theta, R0);
  s.origin_piece = g.origin.piece;
  s.infinity_piece = inf;
  s.glue = {R0, g.rho0, g.tau, g.origin.lambda_max, g.delta, std::nullopt, std::nullopt};
  s.base_weight = g.delta;
  apply_rescaling(s);
  return s;
}

/// Infinity piece with R0 from a sign scan, glued to the u_{2,ρ} family;
/// R0 doubles (at most 20 times) until the family brackets the target at ρ = R0.
inline PiecewiseSolution second_family_glue(PiecewiseSolution s, const Piece& inf, double theta) {
  const Params& x = s.base_params;
  double R0 = scan_R0(x, s.manifold, piece_radial(inf, s.manifold.r2()),
                      std::max(s.manifold.r2(), std::exp(2.0)));
  for (int k = 0;; ++k) {
    if (origin_ratio(OriginFamily::second, R0, theta, R0) <= evaluate(inf, R0).log_deriv) break;
    if (k == 20) throw ConstructionError("glue", "no bracket after 20 doublings of R0");
    R0 *= 2.0;
  }
  const GlueResult g = glue(x, s.manifold, inf, OriginFamily::second, theta, R0);
  s.origin_piece = g.origin.piece;
  s.infinity_piece = inf;
  s.glue = {R0, g.rho0, g.tau, g.origin.lambda_max, g.delta, std::nullopt, std::nullopt};
  s.base_weight = g.delta;
  apply_rescaling(s);
  return s;
}

}  // namespace detail

// ----------------------------------------------------------- constructions

inline PiecewiseSolution construct_G1(const Params& x, const ConstructionOptions& opt = {}) {
  if (!in_region(Region::G1, x)) throw ParameterError("parameters are not in G1");
  const double beta = (x.m - 1.0) / (x.p + x.q - x.m + 1.0) + opt.epsilon;
  auto s = detail::g1_like(x, x, Region::G1, beta, opt);
  detail::finish(s, opt);
  return s;
}

/// Pointwise u = Φ^{-1}(v).
inline RadialFunction change_of_variables(const Params& x, const RadialFunction& v) {
  const ChangeOfVariables cv(x.m, x.p);
  RadialFunction u;
  u.value = [cv, v](double r) { return cv.inverse(v.value(r)); };
  u.deriv = [cv, v](double r) { return v.deriv(r) / cv.dphi(cv.inverse(v.value(r))); };
  u.log_deriv = [cv, v](double r) {
    const double w = cv.inverse(v.value(r));
    return v.deriv(r) / cv.dphi(w) / w;
  };
  u.lo = v.lo;
  u.hi = v.hi;
  u.breakpoints = v.breakpoints;
  return u;
}

/// Compares the residual of u = Φ^{-1}(v) for q = m with Φ'(u)^{1-m} Δ_m v.
inline IdentityReport change_of_variables_identity(const Params& x, const ModelManifold& man,
                                                   const RadialFunction& v, double lo, double hi,
                                                   int samples = 200) {
  const Params xm{x.m, x.p, x.m};
  const double m1 = x.m - 1.0;
  const ChangeOfVariables cv(x.m, x.p);
  const RadialFunction u = change_of_variables(xm, v);
  IdentityReport rep;
  for (double r : verification_grid(lo, hi, samples)) {
    if (!(v.value(r) > 0.0)) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    const ResidualTerms lhs = residual_terms(xm, man, u, r);
    // Δ_m v, divided by S.
    auto gv = [&](double s) { return numeric::signed_pow(v.deriv(s), m1); };
    const double h = detail::difference_step(r);
    const double lap_v = man.dlog_surface(r) * gv(r) +
                         numeric::derivative(gv, r, h, detail::choose_stencil(v, r, h));
    const double rhs = std::pow(cv.dphi(u.value(r)), -m1) * lap_v;
    rep.max_rel_error =
        std::max(rep.max_rel_error, std::abs(lhs.total() - rhs) / std::max(lhs.scale(), 1e-300));
  }
  rep.pass = rep.samples > 0 && rep.max_rel_error <= rep.tolerance;
  return rep;
}

inline PiecewiseSolution construct_G2(const Params& x, const ConstructionOptions& opt = {}) {
  if (!in_region(Region::G2, x)) throw ParameterError("parameters are not in G2");
  const double m1 = x.m - 1.0;
  const double beta = m1 + opt.epsilon;
  const double eta = opt.eta ? *opt.eta : 0.5 * (beta - m1);
  if (!(eta > 0.0 && eta < beta - m1)) {
    std::ostringstream os;
    os << "eta=" << eta << " outside (0, " << beta - m1 << ")";
    throw ParameterError(os.str());
  }
  PiecewiseSolution s;
  s.params = x;
  s.region = Region::G2;
  s.manifold = detail::make_manifold(OuterProfile::power_log(x.m, beta), opt);
  if (compare(x.q, x.m) == 0) {
    // v' = -S^{-1/(m-1)} (ln r)^{η/(m-1)}: the flux -(ln r)^η is decreasing,
    // so v is m-superharmonic; u = Φ^{-1}(v).
    const double K = std::pow(detail::outer_constant(s.manifold), -1.0 / m1);
    const double e = (eta - beta) / m1;
    const LogPower v{K / (-e - 1.0), -(e + 1.0)};
    const double theta = opt.theta ? *opt.theta : 1.0;
    const double R0 = std::max(2.0 * s.manifold.r2(), std::exp(2.0));
    s.base_params = {x.m, 0.0, x.m};
    const GlueResult g = glue(s.base_params, s.manifold, v, OriginFamily::first, theta, R0, false);
    s.origin_piece = g.origin.piece;
    s.infinity_piece = v;
    s.glue = {R0, g.rho0, g.tau, g.origin.lambda_max, 1.0, std::nullopt, std::nullopt};
    s.base_weight = 0.0;
    s.post = {PostKind::inverse_change, 0.0};
    detail::finish(s, opt);
    return s;
  }
  s.base_params = x;
  const double theta = opt.theta ? *opt.theta : 1.0;
  s = detail::second_family_glue(std::move(s), g2_infinity_piece(x, s.manifold, eta), theta);
  detail::finish(s, opt);
  return s;
}

inline PiecewiseSolution construct_G3(const Params& x, const ConstructionOptions& opt = {}) {
  if (!in_region(Region::G3, x)) throw ParameterError("parameters are not in G3");
  const Params v{x.m, 0.0, x.q};
  const double beta = std::max(1.0, x.m - 1.0) / (x.q - x.m + 1.0) + opt.epsilon;
  ConstructionOptions inner = opt;
  inner.verify = false;
  auto s = detail::g1_like(v, x, Region::G3, beta, inner);
  s.post = {PostKind::shift, 1.0};
  detail::finish(s, opt);
  return s;
}

inline PiecewiseSolution construct_G4(const Params& x, const ConstructionOptions& opt = {}) {
  if (!in_region(Region::G4, x)) throw ParameterError("parameters are not in G4");
  const double lambda = opt.lambda ? *opt.lambda : 1.0;
  const double eta = opt.eta ? *opt.eta : 0.5;
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("G4 needs 0 < eta < 1");
  PiecewiseSolution s;
  s.params = x;
  s.region = Region::G4;
  s.base_params = x;
  s.manifold = detail::make_manifold(OuterProfile::pure_exp(lambda), opt);
  const double theta = opt.theta ? *opt.theta : 1.0;
  s = detail::second_family_glue(std::move(s), ShiftedPower{std::pow(lambda, 1.0 / x.p), eta},
                                 theta);
  detail::finish(s, opt);
  return s;
}

inline PiecewiseSolution construct_G5(const Params& x, const ConstructionOptions& opt = {}) {
  if (!in_region(Region::G5, x)) throw ParameterError("parameters are not in G5");
  const double m1 = x.m - 1.0;
  PiecewiseSolution s;
  s.params = x;
  s.region = Region::G5;
  s.base_params = x;
  double iota, eta, R0;
  Piece origin;
  if (x.p > 0.0) {
    const double H = H_of_p(x.m, x.p);
    iota = opt.iota ? *opt.iota : H;
    if (compare(iota, H) < 0) {
      std::ostringstream os;
      os << "iota=" << iota << " below the threshold H(p)=" << H;
      throw ConstructionError("threshold", os.str());
    }
    if (opt.eta) throw ParameterError("eta is fixed at (p/(m-1))^{1/(p+1)} when p > 0");
    eta = H_optimal_eta(x.m, x.p);
    // u0 = c (1 - (pr)^{(p+1)/p}/((p+1)(m-1)^{1/p})) matches e^{-ηr} in value and slope at R0.
    const double p = x.p;
    auto shape = [&](double r) {
      return 1.0 - std::pow(p * r, (p + 1.0) / p) / ((p + 1.0) * std::pow(m1, 1.0 / p));
    };
    const double r_zero = std::pow((p + 1.0) * std::pow(m1, 1.0 / p), p / (p + 1.0)) / p;
    R0 = numeric::bisect([&](double r) { return std::pow(p * r / m1, 1.0 / p) - eta * shape(r); },
                         0.0, r_zero * (1.0 - 1e-12), 1e-15);
    origin = OriginPower{std::exp(-eta * R0) / shape(R0), p, x.m};
  } else {
    iota = opt.iota ? *opt.iota : 2.0;
    if (!(iota > 1.0)) throw ConstructionError("threshold", "p = 0 needs iota > 1");
    const double eta_max = (iota - 1.0) / m1;
    eta = opt.eta ? *opt.eta : 0.5 * eta_max;
    if (!(eta > 0.0) || compare(eta, eta_max) > 0) {
      std::ostringstream os;
      os << "eta=" << eta << " outside (0, " << eta_max << "]";
      throw ParameterError(os.str());
    }
    const double alpha = opt.alpha_origin ? *opt.alpha_origin : 2.0;
    if (!(alpha > 1.0)) throw ParameterError("origin exponent alpha must exceed 1");
    // c - r^α matches e^{-ηr}: α R^{α-1} e^{ηR} = η, with R < (m-1)(α-1).
    const double R_max = m1 * (alpha - 1.0);
    auto f = [&](double r) { return alpha * std::pow(r, alpha - 1.0) * std::exp(eta * r) - eta; };
    if (!(f(R_max) > 0.0))
      throw ConstructionError("glue", "no matching radius below (m-1)(alpha-1)");
    R0 = numeric::bisect(f, 0.0, R_max, 1e-15);
    origin = OriginPolynomial{std::exp(-eta * R0) + std::pow(R0, alpha), alpha};
  }
  const double r2 = 0.9 * R0;
  s.manifold = detail::make_manifold(OuterProfile::scaled_exp(iota), opt, 0.5 * r2, r2);
  s.origin_piece = origin;
  s.infinity_piece = Exponential{eta};
  s.glue = {R0, std::nullopt, 1.0, 1.0, 1.0, std::nullopt, std::nullopt};
  s.base_weight = 1.0;
  detail::finish(s, opt);
  return s;
}

inline PiecewiseSolution construct_G6(const Params& x, const ConstructionOptions& opt = {}) {
  if (!in_region(Region::G6, x)) throw ParameterError("parameters are not in G6");
  const double m1 = x.m - 1.0;
  const double threshold = 2.0 * (m1 - x.q) + 1.0;
  const double gamma = opt.gamma ? *opt.gamma : threshold + 0.5;
  const double lambda = opt.lambda ? *opt.lambda : 1.0;
  if (compare(gamma, threshold) <= 0) {
    std::ostringstream os;
    os << "gamma=" << gamma << " must exceed 2(m-1-q)+1=" << threshold;
    throw ConstructionError("threshold", os.str());
  }
  if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
  PiecewiseSolution s;
  s.params = x;
  s.region = Region::G6;
  s.base_params = x;
  try {
    s.manifold = detail::make_manifold(OuterProfile::exp_power_log(lambda, gamma), opt);
  } catch (const ConstructionError&) {
    // For large γ the Hermite connector overshoots; a shorter blend keeps it monotone.
    s.manifold = detail::make_manifold(OuterProfile::exp_power_log(lambda, gamma), opt,
                                       4.0 * (1.0 - 2.0 / gamma), 4.0);
  }
  const double theta = detail::resolve_theta(x, opt.n, opt.theta);
  const ExpLogOverR inf;
  const double R0 = scan_R0(x, s.manifold, piece_radial(inf, s.manifold.r2()),
                            std::max(s.manifold.r2(), std::exp(2.0)));
  const GlueResult g = glue(x, s.manifold, inf, OriginFamily::first, theta, R0);
  s.origin_piece = g.origin.piece;
  s.infinity_piece = inf;
  s.glue = {R0, g.rho0, g.tau, g.origin.lambda_max, g.delta, std::nullopt, std::nullopt};
  s.base_weight = g.delta;
  detail::apply_rescaling(s);
  detail::finish(s, opt);
  return s;
}

/// Dispatches on the region of x.
inline PiecewiseSolution construct(const Params& x, const ConstructionOptions& opt = {}) {
  x.validate();
  switch (classify(x)) {
    case Region::G1: return construct_G1(x, opt);
    case Region::G2: return construct_G2(x, opt);
    case Region::G3: return construct_G3(x, opt);
    case Region::G4: return construct_G4(x, opt);
    case Region::G5: return construct_G5(x, opt);
    case Region::G6: return construct_G6(x, opt);
  }
  throw ParameterError("unclassified parameters");
}

/// Volume bound used by the construction for each region (ε as in the options).
inline VolumeBound existence_bound(const PiecewiseSolution& s) {
  const auto& o = s.manifold.profile().outer;
  switch (o.kind) {
    case OuterKind::power_log: return VolumeBound::power_log(o.alpha, o.beta);
    case OuterKind::pure_exp: return VolumeBound::exponential(o.lambda);
    case OuterKind::scaled_exp: return VolumeBound::exponential(o.iota);
    case OuterKind::exp_power_log: return VolumeBound::exp_power_log(o.lambda, o.gamma);
  }
  throw ParameterError("unknown manifold kind");
}

}  // namespace liouville
