#pragma once

// Finite-instance checks of the nonexistence estimates: the Caccioppoli-type
// inequality with explicit constants, the energy chain for G5 and the
// coefficient bookkeeping for G6.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/manifold.hpp"
#include "liouville/numeric.hpp"
#include "liouville/params.hpp"
#include "liouville/radial.hpp"
#include "liouville/solution.hpp"

namespace liouville {

struct ChainStep {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  bool pass = false;
};

inline ChainStep chain_step(std::string name, double lhs, double rhs, double slack = 1e-6) {
  ChainStep s{std::move(name), lhs, rhs, lhs / rhs, false};
  s.pass = lhs <= rhs * (1.0 + slack);
  return s;
}

struct Lemma1Report {
  double a = 0.0;
  double b = 0.0;
  int i = 0;
  LemmaExponents exponents;
  /// ∫ u^{p-a} |u'|^q φ^b S, and the same over supp φ'.
  double L = 0.0;
  double R1 = 0.0;
  /// ∫ |φ'|^{tρ} S.
  double R2 = 0.0;
  /// (2b)^t a^{1-t}
  double prefactor = 0.0;
  /// All integrals carry the factor e^{-log_scale}.
  double log_scale = 0.0;
  double shift = 0.0;
  std::vector<ChainStep> steps;
  VerificationReport support_check;
  bool pass = false;

  double unscaled_L() const { return L * std::exp(log_scale); }
};

namespace detail {

inline double integrate_scaled(const std::function<double(double)>& f, std::vector<double> breaks,
                               double rel_tol = 1e-11) {
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  const auto res = numeric::integrate_panels(f, breaks, rel_tol);
  if (!res.converged) throw numeric::NumericError("estimate quadrature did not converge");
  return res.value;
}

}  // namespace detail

/// L ≤ (2b)^t a^{1-t} R1^{1/γ} R2^{1/ρ}, and its rearranged form
/// L^{1/ρ} ≤ (2b)^t a^{1-t} R2^{1/ρ}, for the test function φ_i.
/// The cutoff derivative bound enters only through φ_i itself.
/// u + shift replaces u when shift > 0.
inline Lemma1Report verify_lemma1(const Params& x, const ModelManifold& man,
                                  const PiecewiseSolution& sol, double a, double b, int i,
                                  const Cutoff& h = Cutoff(), double shift = 0.0) {
  const double m1 = x.m - 1.0;
  if (compare(x.p + x.q, m1) == 0) throw ParameterError("lemma 1 needs p + q != m - 1");
  const CondAbResult cond = check_cond_ab(x, a, b);
  if (!cond.ok) throw ParameterError("conditions on (a, b) fail: " + cond.diagnostic);
  const LemmaExponents e = cond.exponents;
  if (b < e.t * e.rho) {
    std::ostringstream os;
    os << "b=" << b << " below t*rho=" << e.t * e.rho;
    throw ParameterError(os.str());
  }
  Lemma1Report rep;
  rep.a = a;
  rep.b = b;
  rep.i = i;
  rep.exponents = e;
  rep.shift = shift;

  const RadialFunction phi = phi_i(h, i);
  const double top = std::ldexp(1.0, 2 * i + 1);
  const double inner = std::ldexp(1.0, i + 1);
  const double lS = man.log_surface(top);
  rep.log_scale = lS;
  auto S = [&](double r) { return std::exp(man.log_surface(r) - lS); };
  std::vector<double> breaks{0.0, sol.glue.R0, top};
  for (double bp : phi.breakpoints)
    if (bp < top) breaks.push_back(bp);
  breaks.erase(std::remove_if(breaks.begin(), breaks.end(), [&](double r) { return r > top; }),
               breaks.end());

  auto density = [&](double r) {
    const PieceEval u = sol.eval(r);
    const double v = u.value + shift;
    if (!(v > 0.0)) throw RadialError("u is not positive on the support of the test function");
    const double ph = phi.value(r);
    if (ph == 0.0) return 0.0;
    return std::pow(v, x.p - a) * detail::source_power(1.0, u.deriv, x) * std::pow(ph, b) * S(r);
  };
  rep.L = detail::integrate_scaled(density, breaks);
  std::vector<double> outer_breaks;
  for (double r : breaks)
    if (r >= inner) outer_breaks.push_back(r);
  rep.R1 = detail::integrate_scaled(density, outer_breaks);
  rep.R2 = detail::integrate_scaled(
      [&](double r) { return std::pow(std::abs(phi.deriv(r)), e.t * e.rho) * S(r); },
      outer_breaks);
  rep.prefactor = std::pow(2.0 * b, e.t) * std::pow(a, 1.0 - e.t);
  rep.steps.push_back(chain_step("explicit", rep.L,
                                 rep.prefactor * std::pow(rep.R1, 1.0 / e.gamma) *
                                     std::pow(rep.R2, 1.0 / e.rho)));
  rep.steps.push_back(chain_step("rearranged", std::pow(rep.L, 1.0 / e.rho),
                                 rep.prefactor * std::pow(rep.R2, 1.0 / e.rho)));

  VerifyOptions vo;
  vo.exclusions = {{sol.glue.R0, 1e-6}};
  rep.support_check =
      verify_inequality(sol.params, sol.manifold, sol.radial(), 1e-3 * sol.glue.R0, top, 2000, vo);
  rep.pass = rep.support_check.pass;
  for (const auto& s : rep.steps) rep.pass = rep.pass && s.pass;
  return rep;
}

struct EnergyReport {
  double R = 0.0;
  double lambda_exp = 0.0;
  double z = 0.0;
  double l = 0.0;
  double slope_bound = 0.0;
  double kappa = 0.0;
  /// max over samples of |v'|^λ - |v'|^m - |v'|^q
  double young_worst = 0.0;
  bool young_pass = false;
  std::vector<ChainStep> steps;
  double log_scale = 0.0;
  /// 2κ + θ ln(C1 θ) at θ = z/R, C1 = ρ_h / l.
  double exponent = 0.0;
  /// min{m-1,1}/(2 ρ_h e)
  double kappa_rough = 0.0;
  bool below_threshold = false;
  bool pass = false;
};

/// ∫_{B_R} |v'|^λ S ≤ (z/l)^z ∫ |φ_R'|^z S ≤ (ρ_h z/(lR))^z V(2R), v = ln u.
inline EnergyReport verify_energy_bound_G5(const Params& x, const ModelManifold& man,
                                           const PiecewiseSolution& sol, double R,
                                           double lambda_exp, const Cutoff& h, double kappa) {
  if (!in_region(Region::G5, x)) throw ParameterError("energy chain needs parameters in G5");
  const double m1 = x.m - 1.0;
  if (!(lambda_exp > m1 && lambda_exp < x.m)) throw ParameterError("lambda must lie in (m-1, m)");
  if (!(R > 0.0)) throw ParameterError("R must be positive");
  EnergyReport rep;
  rep.R = R;
  rep.lambda_exp = lambda_exp;
  rep.z = lambda_exp / (lambda_exp - m1);
  rep.l = std::min(m1, 1.0);
  rep.slope_bound = h.slope_bound();
  rep.kappa = kappa;

  for (double r : verification_grid(1e-3 * R, 2.0 * R, 400)) {
    const double w = std::abs(sol.eval(r).log_deriv);
    if (!std::isfinite(w)) throw RadialError("log u is not differentiable on B_2R");
    const double d = std::pow(w, lambda_exp) - std::pow(w, x.m) - std::pow(w, x.q);
    rep.young_worst = std::max(rep.young_worst, d);
  }
  rep.young_pass = rep.young_worst <= 0.0;

  const double lS = man.log_surface(2.0 * R);
  rep.log_scale = lS;
  auto S = [&](double r) { return std::exp(man.log_surface(r) - lS); };
  const RadialFunction phi = phi_R(h, R);
  std::vector<double> inner{0.0, R};
  if (sol.glue.R0 < R) inner.insert(inner.begin() + 1, sol.glue.R0);
  const double I = detail::integrate_scaled(
      [&](double r) { return std::pow(std::abs(sol.eval(r).log_deriv), lambda_exp) * S(r); },
      inner);
  const double J = detail::integrate_scaled(
      [&](double r) { return std::pow(std::abs(phi.deriv(r)), rep.z) * S(r); }, {R, 2.0 * R});
  const double V2R = std::exp(man.log_volume(2.0 * R) - lS);
  const double c = std::pow(rep.z / rep.l, rep.z);
  rep.steps.push_back(chain_step("energy", I, c * J));
  rep.steps.push_back(
      chain_step("cutoff", c * J, std::pow(rep.slope_bound * rep.z / (rep.l * R), rep.z) * V2R));

  const double theta = rep.z / R;
  const double C1 = rep.slope_bound / rep.l;
  rep.exponent = 2.0 * kappa + theta * std::log(C1 * theta);
  rep.kappa_rough = rep.l / (2.0 * rep.slope_bound * std::numbers::e);
  rep.below_threshold = kappa < rep.kappa_rough;
  rep.pass = rep.young_pass;
  for (const auto& s : rep.steps) rep.pass = rep.pass && s.pass;
  return rep;
}

struct CCoefficients {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0, c6 = 0, c7 = 0;
  double C1 = 0, C2 = 0, C3 = 0, C4 = 0;
  double kappa = 0;
  double kappa_star = 0;
  bool C1_negative = false;
};

/// Coefficients of the exponent C1 a ln a + C2 a + C3 ln a + C4 in the G6
/// argument (a = 2R, b = c3 a / 2); k is the level in v = u/k.
inline CCoefficients c_coefficients(const Params& x, double kappa, double k = 1.0) {
  const double m1 = x.m - 1.0;
  if (!(x.q < m1 && x.p < m1 - x.q)) throw ParameterError("coefficients need p < m-1-q, q < m-1");
  const double D = x.p + x.q - m1;
  CCoefficients c;
  c.c1 = (x.q - x.m) / D;
  c.c2 = (x.m * x.p + x.q) / D;
  c.c3 = 4.0 * (x.q - x.m) / D;
  c.c4 = -(x.q - m1) / D;
  c.c5 = -x.p * m1 / D;
  c.c6 = -c.c1;
  c.c7 = -c.c2;
  c.kappa = kappa;
  c.C1 = c.c1 + c.c4 + kappa + c.c6;
  c.C2 = c.c1 * std::log(c.c3) + std::log(k) - c.c6 * std::log(2.0);
  c.C3 = c.c2 + c.c5 + c.c7;
  c.C4 = c.c2 * std::log(c.c3) - c.c7 * std::log(2.0);
  c.kappa_star = (m1 - x.q) / (m1 - x.p - x.q);
  c.C1_negative = c.C1 < 0.0;
  return c;
}

struct KappaThreshold {
  Region region = Region::G5;
  /// Supremum in the statement of the nonexistence theorem.
  double statement = 0.0;
  /// G5 only: min{m-1,1}/(2 ρ_h e) for the cutoff slope ρ_h.
  std::optional<double> proof;
};

inline KappaThreshold kappa_threshold(const Params& x, const Cutoff& h = Cutoff()) {
  KappaThreshold t;
  t.region = classify(x);
  const double m1 = x.m - 1.0;
  if (t.region == Region::G5) {
    t.statement = std::min(m1, 1.0) / (2.0 * std::numbers::e);
    t.proof = t.statement / h.slope_bound();
  } else if (t.region == Region::G6) {
    t.statement = (m1 - x.q) / (m1 - x.p - x.q);
  } else {
    throw ParameterError("kappa threshold is defined for G5 and G6 only");
  }
  return t;
}

}  // namespace liouville
