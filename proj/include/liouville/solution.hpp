#pragma once

// Glued radial solutions: an origin piece on [0, R0] (times τ), an infinity
// piece on [R0, ∞), a constant factor, and an optional final transform.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string_view>
#include <vector>

#include "liouville/manifold.hpp"
#include "liouville/numeric.hpp"
#include "liouville/params.hpp"
#include "liouville/pieces.hpp"
#include "liouville/radial.hpp"

namespace liouville {

/// Φ(u) = ∫_0^u exp(s^{p+1}/((p+1)(m-1))) ds, or u^{m/(m-1)} when p = -1.
/// If Δ_m v ≤ 0 then u = Φ^{-1}(v) satisfies Δ_m u + u^p |u'|^m ≤ 0.
class ChangeOfVariables {
 public:
  ChangeOfVariables(double m, double p) : m_(m), p_(p) {
    if (!(m > 1.0)) throw ParameterError("change of variables requires m > 1");
  }

  double m() const { return m_; }
  double p() const { return p_; }

  double phi(double u) const {
    if (u <= 0.0) return 0.0;
    const double k = p_ + 1.0, m1 = m_ - 1.0;
    if (k == 0.0) return std::pow(u, m_ / m1);
    if (p_ == 0.0) return m1 * std::expm1(u / m1);
    if (k > 0.0) {
      // Σ_k z^j u / (j! (k j + 1)),  z = u^k / (k (m-1)).
      const double z = std::pow(u, k) / (k * m1);
      double term = 1.0, sum = u;
      for (int j = 1; j < 2000; ++j) {
        term *= z / j;
        const double t = u * term / (k * j + 1.0);
        sum += t;
        if (t <= 1e-17 * sum) break;
      }
      return sum;
    }
    auto f = [&](double s) { return std::exp(std::pow(s, k) / (k * m1)); };
    return numeric::integrate(f, 0.0, u, 1e-14).value;
  }

  double dphi(double u) const {
    const double k = p_ + 1.0, m1 = m_ - 1.0;
    if (k == 0.0) return m_ / m1 * std::pow(u, 1.0 / m1);
    if (u <= 0.0) return k > 0.0 ? 1.0 : 0.0;
    return std::exp(std::pow(u, k) / (k * m1));
  }

  /// Φ^{-1}(v) by bisection followed by Newton steps.
  double inverse(double v) const {
    if (!(v > 0.0)) {
      if (v == 0.0) return 0.0;
      throw RadialError("change of variables needs v >= 0");
    }
    const double k = p_ + 1.0, m1 = m_ - 1.0;
    if (k == 0.0) return std::pow(v, m1 / m_);
    if (p_ == 0.0) return m1 * std::log1p(v / m1);
    double lo = 0.0, hi = v;
    if (k < 0.0) {
      // Φ' < 1, so Φ(u) < u.
      while (phi(hi) < v) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw RadialError("change of variables: inverse out of range");
      }
    }
    double u = numeric::bisect([&](double s) { return phi(s) - v; }, lo, hi, 1e-9);
    for (int it = 0; it < 50; ++it) {
      const double step = (phi(u) - v) / dphi(u);
      u -= step;
      if (std::abs(step) <= 1e-15 * u) break;
    }
    return u;
  }

 private:
  double m_, p_;
};

enum class PostKind { none, shift, power, inverse_change };

inline std::string_view to_string(PostKind k) {
  switch (k) {
    case PostKind::none: return "none";
    case PostKind::shift: return "shift";
    case PostKind::power: return "power";
    case PostKind::inverse_change: return "inverse_change";
  }
  return "?";
}

/// Applied after scaling: u + c, u^a, or Φ^{-1}(u).
struct PostTransform {
  PostKind kind = PostKind::none;
  double value = 0.0;  // shift amount or exponent
};

struct GlueData {
  double R0 = 0.0;
  std::optional<double> rho0;
  double tau = 1.0;
  double lambda_origin = 1.0;
  double delta = 1.0;
  /// c1 = δ^{-1/(p+q-m+1)}; the final solution is u / c1.
  std::optional<double> c1;
  /// Exponent a of u = v^a on the critical line p + q = m - 1.
  std::optional<double> a;
};

struct SolutionReport {
  VerificationReport grid;
  std::vector<WeakFormResult> weak;
  int weak_passed = 0;
  double value_mismatch = 0.0;  // relative, at R0
  double deriv_mismatch = 0.0;
  bool positive = false;
  bool decreasing = false;
  bool pass = false;
};

struct PiecewiseSolution {
  Params params;
  Region region = Region::G1;
  /// Exponents solved by the glued function before the final transform.
  Params base_params;
  /// Weight of the source in the inequality solved by the glued function
  /// (δ, or 0 for an m-superharmonic function).
  double base_weight = 1.0;
  ModelManifold manifold;
  Piece origin_piece;
  Piece infinity_piece;
  GlueData glue;
  double scale = 1.0;
  PostTransform post;
  std::optional<SolutionReport> report;

  /// Glued function: τ·origin on [0, R0), infinity piece on [R0, ∞).
  PieceEval eval_base(double r) const {
    if (r < glue.R0) {
      PieceEval e = evaluate(origin_piece, r);
      e.value *= glue.tau;
      e.deriv *= glue.tau;
      return e;
    }
    return evaluate(infinity_piece, r);
  }

  PieceEval eval(double r) const {
    PieceEval e = eval_base(r);
    e.value *= scale;
    e.deriv *= scale;
    switch (post.kind) {
      case PostKind::none: break;
      case PostKind::shift:
        e.value += post.value;
        e.log_deriv = e.deriv / e.value;
        break;
      case PostKind::power: {
        const double a = post.value;
        e.log_deriv *= a;
        e.value = std::pow(e.value, a);
        e.deriv = e.value * e.log_deriv;
        break;
      }
      case PostKind::inverse_change: {
        const ChangeOfVariables cv(params.m, params.p);
        const double u = cv.inverse(e.value);
        e.deriv = e.deriv / cv.dphi(u);
        e.value = u;
        e.log_deriv = e.deriv / u;
        break;
      }
    }
    return e;
  }

  RadialFunction radial() const {
    auto self = std::make_shared<const PiecewiseSolution>(*this);
    RadialFunction f;
    f.value = [self](double r) { return self->eval(r).value; };
    f.deriv = [self](double r) { return self->eval(r).deriv; };
    f.log_deriv = [self](double r) { return self->eval(r).log_deriv; };
    f.lo = 0.0;
    f.breakpoints = {glue.R0};
    return f;
  }

  RadialFunction base_radial() const {
    auto self = std::make_shared<const PiecewiseSolution>(*this);
    RadialFunction f;
    f.value = [self](double r) { return self->eval_base(r).value; };
    f.deriv = [self](double r) { return self->eval_base(r).deriv; };
    f.log_deriv = [self](double r) { return self->eval_base(r).log_deriv; };
    f.lo = 0.0;
    f.breakpoints = {glue.R0};
    return f;
  }

  /// Default verification window [10^-2 R0, 10^3 R0].
  double window_lo() const { return 1e-2 * glue.R0; }
  double window_hi() const { return 1e3 * glue.R0; }
};

struct VerifyPlan {
  double lo = 0.0;  // 0 selects the default window
  double hi = 0.0;
  int points = 2000;
  int bumps = 20;
  int straddling = 5;
  unsigned seed = 42;
  double slack = default_slack();
};

namespace detail {

/// Largest radius in [lo, hi] with |log S| below the given bound, so that
/// ratios S(r)/S(b) keep their relative precision.
inline double resolvable_limit(const ModelManifold& man, double lo, double hi,
                               double bound = 1e5) {
  if (std::abs(man.log_surface(hi)) <= bound) return hi;
  if (std::abs(man.log_surface(lo)) > bound) return lo;
  return numeric::bisect([&](double r) { return std::abs(man.log_surface(r)) - bound; }, lo, hi,
                         1e-10);
}

}  // namespace detail

/// Grid, weak-form and C1 checks for a solution.
inline SolutionReport verify_solution(const PiecewiseSolution& sol, const VerifyPlan& plan = {}) {
  const double lo = plan.lo > 0.0 ? plan.lo : sol.window_lo();
  const double hi = plan.hi > 0.0 ? plan.hi : sol.window_hi();
  const double R0 = sol.glue.R0;
  const auto u = sol.radial();
  SolutionReport rep;

  VerifyOptions vo;
  vo.slack = plan.slack;
  vo.exclusions = {{R0, 1e-6}};
  rep.grid = verify_inequality(sol.params, sol.manifold, u, lo, hi, plan.points, vo);

  const PieceEval left = [&] {
    PieceEval e = evaluate(sol.origin_piece, R0);
    e.value *= sol.glue.tau;
    e.deriv *= sol.glue.tau;
    return e;
  }();
  const PieceEval right = evaluate(sol.infinity_piece, R0);
  rep.value_mismatch = std::abs(left.value - right.value) / std::abs(right.value);
  rep.deriv_mismatch = std::abs(left.deriv - right.deriv) / std::abs(right.deriv);

  rep.positive = true;
  rep.decreasing = true;
  for (double r : verification_grid(lo, hi, plan.points)) {
    const PieceEval e = sol.eval(r);
    if (!(e.value > 0.0) && !(e.log_deriv < 0.0 && e.value == 0.0)) rep.positive = false;
    // Underflowed values fall back on the analytic log-derivative.
    if (!(e.deriv < 0.0) && !(e.deriv == 0.0 && e.log_deriv < 0.0)) rep.decreasing = false;
  }

  std::mt19937_64 rng(plan.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Keep bumps where S(r)/S(b) and u stay representable.
  double top = detail::resolvable_limit(sol.manifold, lo, hi);
  if (!(sol.eval(top).value > 1e-250))
    top = numeric::bisect([&](double r) { return sol.eval(r).value > 1e-250 ? -1.0 : 1.0; }, lo,
                          top, 1e-8);
  const double llo = std::log(lo), ltop = std::log(std::max(top, lo * 1.5));
  for (int k = 0; k < plan.bumps; ++k) {
    double c, w;
    if (k < plan.straddling) {
      w = R0 * (0.05 + 0.45 * unit(rng));
      c = R0 + w * (1.6 * unit(rng) - 0.8);
    } else {
      c = std::exp(llo + (ltop - llo) * unit(rng));
      w = c * (0.05 + 0.45 * unit(rng));
    }
    const auto psi = bump(c, w);
    const double a = std::max(c - w, 0.0);
    WeakFormResult wr = weak_form_check(sol.params, sol.manifold, u, psi, a, c + w);
    rep.weak_passed += wr.pass;
    rep.weak.push_back(wr);
  }
  rep.pass = rep.grid.pass && rep.weak_passed == plan.bumps && rep.value_mismatch <= 1e-8 &&
             rep.deriv_mismatch <= 1e-8 && rep.positive && rep.decreasing;
  return rep;
}

}  // namespace liouville
