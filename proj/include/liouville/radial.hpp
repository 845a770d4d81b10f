#pragma once

// Radial form of Δ_m u + w(r) u^p |u'|^q ≤ 0 on a model manifold:
//   (S g)' + S w u^p |u'|^q ≤ 0,   g = |u'|^{m-2} u'.
// Residuals are reported divided by S, i.e. (S'/S) g + g' + w u^p |u'|^q, so
// that exponentially growing S never has to be formed.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "liouville/manifold.hpp"
#include "liouville/numeric.hpp"
#include "liouville/params.hpp"

namespace liouville {

/// Domain or singularity error while evaluating a residual.
class RadialError : public Error {
 public:
  using Error::Error;
};

struct RadialFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  /// Optional u'/u, used where u itself underflows.
  std::function<double(double)> log_deriv;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  /// Radii where u'' may jump; difference stencils never straddle them.
  std::vector<double> breakpoints;

  double operator()(double r) const { return value(r); }
};

/// Verification slack; LIOUVILLE_TOL overrides the default 1e-9.
inline double default_slack() {
  if (const char* env = std::getenv("LIOUVILLE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0.0 && std::isfinite(v)) return v;
  }
  return 1e-9;
}

struct ResidualTerms {
  double flux = 0.0;    // (S g)'/S
  double source = 0.0;  // w u^p |u'|^q
  /// True when both terms were divided by u^{m-1} (homogeneous case with
  /// an analytic log-derivative).
  bool rescaled = false;

  double total() const { return flux + source; }
  double scale() const { return std::abs(flux) + std::abs(source); }
};

namespace detail {

inline double source_power(double u, double du, const Params& x) {
  double up;
  if (u > 0.0) {
    up = std::pow(u, x.p);
  } else if (u == 0.0 && x.p > 0.0) {
    up = 0.0;
  } else {
    std::ostringstream os;
    os << "u = " << u << " outside the positivity domain";
    throw RadialError(os.str());
  }
  const double a = std::abs(du);
  double dq;
  if (a > 0.0) {
    dq = std::pow(a, x.q);
  } else if (x.q > 0.0) {
    dq = 0.0;
  } else if (x.q == 0.0) {
    dq = 1.0;
  } else {
    throw RadialError("u' = 0 with q < 0");
  }
  return up * dq;
}

inline double difference_step(double r) { return std::max(r, 1.0) * 1e-5; }

/// Step 1e-3 L for the local length L = min(r, 1/|u'/u|); balances the
/// h^4 truncation of the five-point stencil against roundoff.
inline double difference_step(double r, double log_deriv) {
  double L = r;
  if (std::isfinite(log_deriv) && log_deriv != 0.0) L = std::min(L, 1.0 / std::abs(log_deriv));
  return 1e-3 * L;
}

inline numeric::Stencil choose_stencil(const RadialFunction& u, double r, double h) {
  bool left_blocked = r - 2 * h <= u.lo, right_blocked = r + 2 * h >= u.hi;
  for (double b : u.breakpoints) {
    if (std::abs(r - b) < 2 * h) (r >= b ? left_blocked : right_blocked) = true;
  }
  if (left_blocked && !right_blocked) return numeric::Stencil::forward;
  if (right_blocked && !left_blocked) return numeric::Stencil::backward;
  return numeric::Stencil::central;
}

}  // namespace detail

inline ResidualTerms residual_terms(const Params& x, const ModelManifold& man,
                                    const RadialFunction& u, double r, double weight = 1.0) {
  const double m1 = x.m - 1.0;
  const double ur = u.value(r);
  const double dur = u.deriv(r);
  const double h = detail::difference_step(r, u.log_deriv ? u.log_deriv(r) : dur / ur);
  const auto stencil = detail::choose_stencil(u, r, h);
  ResidualTerms t;
  const bool homogeneous = compare(x.p + x.q, m1) == 0;
  if (homogeneous && u.log_deriv && ur >= 0.0) {
    // Divide by u^{m-1}: only w = u'/u enters, which avoids differencing
    // exponentially small values.
    const double w = u.log_deriv(r);
    auto gw = [&](double s) { return numeric::signed_pow(u.log_deriv(s), m1); };
    t.flux = man.dlog_surface(r) * gw(r) + numeric::derivative(gw, r, h, stencil) +
             m1 * std::pow(std::abs(w), x.m);
    t.source = weight * detail::source_power(1.0, w, x);
    t.rescaled = true;
    return t;
  }
  auto g = [&](double s) { return numeric::signed_pow(u.deriv(s), m1); };
  t.flux = man.dlog_surface(r) * g(r) + numeric::derivative(g, r, h, stencil);
  t.source = weight * detail::source_power(ur, dur, x);
  return t;
}

/// (S g)' + S u^p |u'|^q at r.
inline double residual(const Params& x, const ModelManifold& man, const RadialFunction& u,
                       double r) {
  const ResidualTerms t = residual_terms(x, man, u, r);
  double log_factor = man.log_surface(r);
  if (t.rescaled) log_factor += (x.m - 1.0) * std::log(u.value(r));
  return std::exp(log_factor) * t.total();
}

/// Residual divided by S(r).
inline double scaled_residual(const Params& x, const ModelManifold& man, const RadialFunction& u,
                              double r) {
  const ResidualTerms t = residual_terms(x, man, u, r);
  if (!t.rescaled) return t.total();
  return std::pow(u.value(r), x.m - 1.0) * t.total();
}

struct VerifyOptions {
  double slack = default_slack();
  /// Excluded neighbourhoods (center, half-width).
  std::vector<std::pair<double, double>> exclusions;
  /// Weight of the source term; 1 when empty.
  std::function<double(double)> source_weight;
};

struct VerificationReport {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;
  int evaluated = 0;
  int excluded = 0;
  /// Residual divided by S at the worst point.
  double worst_residual = -std::numeric_limits<double>::infinity();
  /// Largest residual / local scale over the grid.
  double worst_ratio = -std::numeric_limits<double>::infinity();
  double worst_location = 0.0;
  double slack = 1e-9;
  bool pass = false;
};

inline std::vector<double> verification_grid(double lo, double hi, int points) {
  if (lo > 0.0) return numeric::log_grid(lo, hi, std::size_t(points));
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[std::size_t(i)] = lo + (hi - lo) * (i + 0.5) / points;
  return g;
}

/// Grid check of the inequality: passes iff residual <= slack * local scale
/// at every evaluated point.
inline VerificationReport verify_inequality(const Params& x, const ModelManifold& man,
                                            const RadialFunction& u, double lo, double hi,
                                            int points, const VerifyOptions& opt = {}) {
  if (!(hi > lo) || points < 2) throw ParameterError("empty verification window");
  VerificationReport rep;
  rep.lo = lo;
  rep.hi = hi;
  rep.points = points;
  rep.slack = opt.slack;
  for (double r : verification_grid(lo, hi, points)) {
    bool skip = false;
    for (const auto& [c, w] : opt.exclusions)
      if (std::abs(r - c) <= w) skip = true;
    if (!skip && x.q <= 0.0 && u.deriv(r) == 0.0) skip = true;
    if (skip) {
      ++rep.excluded;
      continue;
    }
    const double weight = opt.source_weight ? opt.source_weight(r) : 1.0;
    const ResidualTerms t = residual_terms(x, man, u, r, weight);
    const double total = t.total(), scale = t.scale();
    if (!std::isfinite(total)) {
      std::ostringstream os;
      os << "non-finite residual at r=" << r;
      throw RadialError(os.str());
    }
    const double ratio =
        scale > 0.0 ? total / scale : (total > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    ++rep.evaluated;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_residual =
          t.rescaled ? std::pow(std::max(u.value(r), 0.0), x.m - 1.0) * total : total;
      rep.worst_location = r;
    }
  }
  rep.pass = rep.evaluated > 0 && rep.worst_ratio <= rep.slack;
  return rep;
}

/// Compactly supported C^1 bump (1 - s^2)^2, s = (r - c)/w.
inline RadialFunction bump(double center, double half_width) {
  RadialFunction b;
  b.value = [=](double r) {
    const double s = (r - center) / half_width;
    if (std::abs(s) >= 1.0) return 0.0;
    const double t = 1.0 - s * s;
    return t * t;
  };
  b.deriv = [=](double r) {
    const double s = (r - center) / half_width;
    if (std::abs(s) >= 1.0) return 0.0;
    return -4.0 * s * (1.0 - s * s) / half_width;
  };
  b.lo = center - half_width;
  b.hi = center + half_width;
  return b;
}

struct WeakFormResult {
  double flux_integral = 0.0;    // ∫ S g ψ'
  double source_integral = 0.0;  // ∫ S w u^p |u'|^q ψ
  double margin = 0.0;
  double abs_total = 0.0;
  double tolerance = 1e-8;
  /// Both integrals are multiplied by e^{-log_scale}.
  double log_scale = 0.0;
  double support_lo = 0.0;
  double support_hi = 0.0;
  bool pass = false;
};

/// ∫ S g ψ' - ∫ S w u^p |u'|^q ψ over supp ψ = [a, b]; nonnegative (up to
/// tolerance) for a weak supersolution.
inline WeakFormResult weak_form_check(const Params& x, const ModelManifold& man,
                                      const RadialFunction& u, const RadialFunction& psi,
                                      double a, double b,
                                      const std::function<double(double)>& source_weight = {},
                                      double rel_tol = 1e-10) {
  if (!(b > a) || !(a >= 0.0)) throw ParameterError("invalid test-function support");
  WeakFormResult res;
  res.support_lo = a;
  res.support_hi = b;
  const double m1 = x.m - 1.0;
  const double lb = man.log_surface(b);
  res.log_scale = lb;
  double start = a;
  if (a > 0.0 && lb - man.log_surface(a) > 60.0)
    start = numeric::bisect([&](double t) { return lb - man.log_surface(t) - 60.0; }, a, b, 1e-12);
  std::vector<double> breaks{start};
  for (double bp : u.breakpoints)
    if (bp > start && bp < b) breaks.push_back(bp);
  const double w = 1.0 / std::max(man.dlog_surface(b), 1e-300);
  std::vector<double> tail;
  for (double d = w; d < b - breaks.back(); d *= 4.0) tail.push_back(b - d);
  for (auto it = tail.rbegin(); it != tail.rend(); ++it)
    if (*it > breaks.back()) breaks.push_back(*it);
  breaks.push_back(b);

  auto weight = [&](double r) { return std::exp(man.log_surface(r) - lb); };
  auto flux = [&](double r) {
    return weight(r) * numeric::signed_pow(u.deriv(r), m1) * psi.deriv(r);
  };
  auto source = [&](double r) {
    const double pr = psi.value(r);
    if (pr == 0.0) return 0.0;
    const double sw = source_weight ? source_weight(r) : 1.0;
    return weight(r) * sw * detail::source_power(u.value(r), u.deriv(r), x) * pr;
  };
  const double tol =
      std::max(rel_tol, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(lb));
  const auto fi = numeric::integrate_panels(flux, breaks, tol);
  const auto si = numeric::integrate_panels(source, breaks, tol);
  if (!fi.converged || !si.converged) {
    std::ostringstream os;
    os << "weak-form quadrature did not converge (errors " << fi.error << ", " << si.error
       << ")";
    throw numeric::NumericError(os.str());
  }
  res.flux_integral = fi.value;
  res.source_integral = si.value;
  res.margin = fi.value - si.value;
  res.abs_total = std::abs(fi.value) + std::abs(si.value);
  res.pass = res.margin >= -res.tolerance * res.abs_total;
  return res;
}

enum class CutoffKind { smoothstep3, trapezoid };

/// h = 1 on [0,1], 0 on [2,∞), decreasing in between.
///   smoothstep3: 1 - (3s^2 - 2s^3), s = t - 1, slope bound 1.5
///   trapezoid:   h' is a trapezoid with ramps of width σ, slope bound 1/(1-σ)
class Cutoff {
 public:
  explicit Cutoff(CutoffKind kind = CutoffKind::smoothstep3, double sigma = 0.1)
      : kind_(kind), sigma_(sigma) {
    if (kind == CutoffKind::trapezoid && !(sigma > 0.0 && sigma <= 0.5))
      throw ParameterError("trapezoid cutoff needs 0 < sigma <= 0.5");
  }

  CutoffKind kind() const { return kind_; }
  double sigma() const { return sigma_; }

  double slope_bound() const {
    return kind_ == CutoffKind::smoothstep3 ? 1.5 : 1.0 / (1.0 - sigma_);
  }

  double operator()(double t) const {
    if (t <= 1.0) return 1.0;
    if (t >= 2.0) return 0.0;
    const double s = t - 1.0;
    if (kind_ == CutoffKind::smoothstep3) return 1.0 - s * s * (3.0 - 2.0 * s);
    const double rho = slope_bound(), sg = sigma_;
    double F;
    if (s <= sg)
      F = rho * s * s / (2.0 * sg);
    else if (s <= 1.0 - sg)
      F = rho * (sg / 2.0 + (s - sg));
    else
      F = 1.0 - rho * (1.0 - s) * (1.0 - s) / (2.0 * sg);
    return 1.0 - F;
  }

  double derivative(double t) const {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    const double s = t - 1.0;
    if (kind_ == CutoffKind::smoothstep3) return -6.0 * s * (1.0 - s);
    const double rho = slope_bound(), sg = sigma_;
    return -rho * std::min({s / sg, 1.0, (1.0 - s) / sg});
  }

 private:
  CutoffKind kind_;
  double sigma_;
};

inline Cutoff cutoff_h(CutoffKind kind = CutoffKind::smoothstep3, double sigma = 0.1) {
  return Cutoff(kind, sigma);
}

/// φ_R(r) = h(r/R).
inline RadialFunction phi_R(const Cutoff& h, double R) {
  RadialFunction f;
  f.value = [h, R](double r) { return h(r / R); };
  f.deriv = [h, R](double r) { return h.derivative(r / R) / R; };
  f.lo = 0.0;
  f.breakpoints = {R, 2.0 * R};
  return f;
}

/// φ_i(r) = (1/i) Σ_{k=i+1}^{2i} h(r/2^k).
inline RadialFunction phi_i(const Cutoff& h, int i) {
  if (i < 1) throw ParameterError("phi_i requires i >= 1");
  RadialFunction f;
  f.value = [h, i](double r) {
    double s = 0.0;
    for (int k = i + 1; k <= 2 * i; ++k) s += h(std::ldexp(r, -k));
    return s / i;
  };
  f.deriv = [h, i](double r) {
    double s = 0.0;
    for (int k = i + 1; k <= 2 * i; ++k) s += std::ldexp(h.derivative(std::ldexp(r, -k)), -k);
    return s / i;
  };
  f.lo = 0.0;
  for (int k = i + 1; k <= 2 * i + 1; ++k) f.breakpoints.push_back(std::ldexp(1.0, k));
  return f;
}

struct IdentityReport {
  int samples = 0;
  int skipped = 0;
  double max_rel_error = 0.0;
  /// Only for p + q = m - 1: the source written as (e^v/(e^v-1))^{-p} |v'|^q.
  std::optional<double> factored_max_rel_error;
  double tolerance = 1e-8;
  bool pass = false;
};

/// u = e^v - 1 turns the residual of u into
///   e^{v(m-1)} [Δ_m v + (m-1)|v'|^m + (e^v-1)^p e^{v(q-m+1)} |v'|^q].
/// Both sides are compared (divided by S) on a log grid over [lo, hi].
inline IdentityReport transform_exp_minus_one(const Params& x, const ModelManifold& man,
                                              const RadialFunction& v, double lo, double hi,
                                              int samples = 200) {
  const double m1 = x.m - 1.0;
  RadialFunction u;
  u.value = [&v](double r) { return std::expm1(v.value(r)); };
  u.deriv = [&v](double r) { return std::exp(v.value(r)) * v.deriv(r); };
  u.lo = v.lo;
  u.hi = v.hi;
  u.breakpoints = v.breakpoints;
  const bool critical = compare(x.p + x.q, m1) == 0;
  IdentityReport rep;
  double worst_factored = 0.0;
  for (double r : verification_grid(lo, hi, samples)) {
    const double vr = v.value(r);
    if (!(vr > 0.0)) {
      ++rep.skipped;
      continue;
    }
    ++rep.samples;
    const ResidualTerms lhs = residual_terms(x, man, u, r);
    // Δ_m v, divided by S.
    auto gv = [&](double s) { return numeric::signed_pow(v.deriv(s), m1); };
    const double h = detail::difference_step(r);
    const double lap_v = man.dlog_surface(r) * gv(r) +
                         numeric::derivative(gv, r, h, detail::choose_stencil(v, r, h));
    const double dv = std::abs(v.deriv(r));
    const double dvq = detail::source_power(1.0, dv, x);
    const double ev = std::exp(vr), em1 = std::expm1(vr);
    const double pref = std::exp(vr * m1);
    const double src = std::pow(em1, x.p) * std::exp(vr * (x.q - m1)) * dvq;
    const double rhs = pref * (lap_v + m1 * std::pow(dv, x.m) + src);
    const double scale = std::max(lhs.scale(), 1e-300);
    rep.max_rel_error = std::max(rep.max_rel_error, std::abs(lhs.total() - rhs) / scale);
    if (critical) {
      const double fsrc = std::pow(ev / em1, -x.p) * dvq;
      const double rhs_f = pref * (lap_v + m1 * std::pow(dv, x.m) + fsrc);
      worst_factored = std::max(worst_factored, std::abs(lhs.total() - rhs_f) / scale);
    }
  }
  if (critical) rep.factored_max_rel_error = worst_factored;
  rep.pass = rep.samples > 0 && rep.max_rel_error <= rep.tolerance &&
             (!critical || worst_factored <= rep.tolerance);
  return rep;
}

}  // namespace liouville
