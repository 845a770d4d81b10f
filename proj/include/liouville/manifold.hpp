#pragma once

// Rotationally symmetric model manifolds dr^2 + ψ(r)^2 dθ^2 on R^n.
//
// ψ(r) = r near the origin, an outer profile prescribed through the surface
// area S(r) = ω_n ψ^{n-1} beyond r2, and a cubic Hermite blend of log ψ in
// between.  Everything is kept in log space because the exponential profiles
// overflow double precision long before the radii of interest.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "liouville/numeric.hpp"
#include "liouville/params.hpp"

namespace liouville {

class ConstructionError : public Error {
 public:
  ConstructionError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

inline double sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

enum class OuterKind { power_log, pure_exp, scaled_exp, exp_power_log };

inline std::string_view to_string(OuterKind k) {
  switch (k) {
    case OuterKind::power_log: return "power_log";
    case OuterKind::pure_exp: return "pure_exp";
    case OuterKind::scaled_exp: return "scaled_exp";
    case OuterKind::exp_power_log: return "exp_power_log";
  }
  return "?";
}

inline OuterKind outer_kind_from_string(std::string_view s) {
  for (OuterKind k : {OuterKind::power_log, OuterKind::pure_exp, OuterKind::scaled_exp,
                      OuterKind::exp_power_log})
    if (to_string(k) == s) return k;
  throw ParameterError("unknown outer profile '" + std::string(s) + "'");
}

/// Outer surface area, up to the factor c0^{n-1}:
///   power_log      ω_n r^{α-1} (ln r)^β
///   pure_exp       e^{λr}
///   scaled_exp     ι e^{ιr}
///   exp_power_log  e^{λ r^γ ln r}
struct OuterProfile {
  OuterKind kind = OuterKind::power_log;
  double alpha = 2.0;
  double beta = 0.0;
  double lambda = 1.0;
  double iota = 1.0;
  double gamma = 2.0;

  static OuterProfile power_log(double alpha, double beta) {
    OuterProfile o;
    o.kind = OuterKind::power_log;
    o.alpha = alpha;
    o.beta = beta;
    return o;
  }
  static OuterProfile pure_exp(double lambda) {
    OuterProfile o;
    o.kind = OuterKind::pure_exp;
    o.lambda = lambda;
    return o;
  }
  static OuterProfile scaled_exp(double iota) {
    OuterProfile o;
    o.kind = OuterKind::scaled_exp;
    o.iota = iota;
    return o;
  }
  static OuterProfile exp_power_log(double lambda, double gamma) {
    OuterProfile o;
    o.kind = OuterKind::exp_power_log;
    o.lambda = lambda;
    o.gamma = gamma;
    return o;
  }

  bool uses_log() const {
    return (kind == OuterKind::power_log && beta != 0.0) || kind == OuterKind::exp_power_log;
  }
};

struct WarpProfile {
  int n = 2;
  double r1 = 1.0;
  double r2 = 4.0;
  OuterProfile outer;
  /// Outer scale; chosen automatically when empty.
  std::optional<double> c0;
};

/// Bound on V(r) used by growth certificates.
struct VolumeBound {
  enum class Kind { power_log, exponential, exp_power_log };
  Kind kind = Kind::power_log;
  double alpha = 0.0;
  double beta = 0.0;
  double lambda = 0.0;
  double gamma = 1.0;

  static VolumeBound power_log(double alpha, double beta) {
    return {Kind::power_log, alpha, beta, 0.0, 1.0};
  }
  static VolumeBound exponential(double lambda) { return {Kind::exponential, 0, 0, lambda, 1.0}; }
  static VolumeBound exp_power_log(double lambda, double gamma) {
    return {Kind::exp_power_log, 0, 0, lambda, gamma};
  }

  double log_value(double r) const {
    switch (kind) {
      case Kind::power_log: return alpha * std::log(r) + beta * std::log(std::log(r));
      case Kind::exponential: return lambda * r;
      case Kind::exp_power_log: return lambda * std::pow(r, gamma) * std::log(r);
    }
    return 0.0;
  }
};

inline std::string_view to_string(VolumeBound::Kind k) {
  switch (k) {
    case VolumeBound::Kind::power_log: return "power_log";
    case VolumeBound::Kind::exponential: return "exponential";
    case VolumeBound::Kind::exp_power_log: return "exp_power_log";
  }
  return "?";
}

class ModelManifold {
 public:
  ModelManifold() : ModelManifold(WarpProfile{}) {}

  explicit ModelManifold(WarpProfile profile) : spec_(std::move(profile)) {
    validate();
    omega_ = sphere_area(spec_.n);
    resolve_blend();
    build_volume_cache();
  }

  /// Profile with c0 and r2 as actually used; rebuilding from it is exact.
  const WarpProfile& profile() const { return spec_; }
  int dimension() const { return spec_.n; }
  double omega() const { return omega_; }
  double c0() const { return *spec_.c0; }
  double r1() const { return spec_.r1; }
  double r2() const { return spec_.r2; }

  double log_surface(double r) const {
    if (r <= spec_.r1) return log_omega_ + n1() * std::log(r);
    if (r >= spec_.r2) return log_outer(r);
    return log_omega_ + n1() * blend(r);
  }

  /// S'/S.
  double dlog_surface(double r) const {
    if (r <= spec_.r1) return n1() / r;
    if (r >= spec_.r2) return dlog_outer(r);
    return n1() * dblend(r);
  }

  /// (log S)''.
  double d2log_surface(double r) const {
    if (r <= spec_.r1) return -n1() / (r * r);
    if (r >= spec_.r2) return d2log_outer(r);
    return n1() * d2blend(r);
  }

  double surface(double r) const { return std::exp(log_surface(r)); }
  double surface_derivative(double r) const { return surface(r) * dlog_surface(r); }

  double psi(double r) const { return std::exp((log_surface(r) - log_omega_) / n1()); }
  double dpsi(double r) const { return psi(r) * dlog_surface(r) / n1(); }

  /// log V(r), V(r) = ∫_0^r S.
  double log_volume(double r) const {
    if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();
    if (r <= spec_.r1) return log_omega_ + spec_.n * std::log(r) - std::log(double(spec_.n));
    if (asymptotic(r)) return log_volume_asymptotic(r);
    // Largest knot not exceeding r.
    std::size_t lo = 0, hi = knots_.size() - 1;
    if (r >= knots_[hi]) {
      lo = hi;
    } else {
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (knots_[mid] <= r ? lo : hi) = mid;
      }
    }
    if (r == knots_[lo]) return log_vol_[lo];
    return numeric::log_add_exp(log_vol_[lo], log_integral_surface(knots_[lo], r));
  }

  double volume(double r) const { return std::exp(log_volume(r)); }

  /// log ∫_a^b S, computed relative to S(b).
  double log_integral_surface(double a, double b) const {
    if (!(b > a)) return -std::numeric_limits<double>::infinity();
    const double lb = log_surface(b);
    double start = a;
    // Drop the part of [a, b] where S < e^{-40} S(b); S is nondecreasing.
    if (lb - log_surface(a) > 40.0) {
      start = numeric::bisect([&](double t) { return lb - log_surface(t) - 40.0; }, a, b, 1e-12);
    }
    std::vector<double> breaks{start};
    for (double x : {spec_.r1, spec_.r2})
      if (x > start && x < b) breaks.push_back(x);
    // Refine toward b at the e-folding scale of S.
    const double w = 1.0 / std::max(dlog_surface(b), 1e-300);
    std::vector<double> tail;
    for (double d = w; d < b - breaks.back(); d *= 4.0) tail.push_back(b - d);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
      if (*it > breaks.back()) breaks.push_back(*it);
    breaks.push_back(b);
    auto f = [&](double t) { return std::exp(log_surface(t) - lb); };
    // log S carries an absolute rounding error of order eps |log S|.
    const double tol = std::max(1e-12, 64.0 * std::numeric_limits<double>::epsilon() * std::abs(lb));
    const auto res = numeric::integrate_panels(f, breaks, tol);
    return lb + std::log(res.value);
  }

 private:
  double n1() const { return double(spec_.n - 1); }

  void validate() const {
    const auto& o = spec_.outer;
    if (spec_.n < 2) throw ParameterError("dimension n must be at least 2");
    if (!(spec_.r1 > 0.0) || !(spec_.r2 > spec_.r1))
      throw ParameterError("need 0 < r1 < r2");
    switch (o.kind) {
      case OuterKind::power_log:
        if (!(o.alpha > 0.0)) throw ParameterError("power_log requires alpha > 0");
        break;
      case OuterKind::pure_exp:
        if (!(o.lambda > 0.0)) throw ParameterError("pure_exp requires lambda > 0");
        break;
      case OuterKind::scaled_exp:
        if (!(o.iota > 0.0)) throw ParameterError("scaled_exp requires iota > 0");
        break;
      case OuterKind::exp_power_log:
        if (!(o.lambda > 0.0) || !(o.gamma > 1.0))
          throw ParameterError("exp_power_log requires lambda > 0, gamma > 1");
        break;
    }
    if (o.uses_log() && !(spec_.r2 >= 2.0))
      throw ParameterError("logarithmic outer profiles require r2 >= 2");
    if (spec_.c0 && !(*spec_.c0 > 0.0)) throw ParameterError("c0 must be positive");
  }

  // Outer log S without the c0 factor, and its derivatives.
  double log_outer_raw(double r) const {
    const auto& o = spec_.outer;
    switch (o.kind) {
      case OuterKind::power_log: {
        double v = log_omega_ + (o.alpha - 1.0) * std::log(r);
        if (o.beta != 0.0) v += o.beta * std::log(std::log(r));
        return v;
      }
      case OuterKind::pure_exp: return o.lambda * r;
      case OuterKind::scaled_exp: return std::log(o.iota) + o.iota * r;
      case OuterKind::exp_power_log: return o.lambda * std::pow(r, o.gamma) * std::log(r);
    }
    return 0.0;
  }
  double log_outer(double r) const { return log_c0_term_ + log_outer_raw(r); }

  double dlog_outer(double r) const {
    const auto& o = spec_.outer;
    switch (o.kind) {
      case OuterKind::power_log: {
        double v = (o.alpha - 1.0) / r;
        if (o.beta != 0.0) v += o.beta / (r * std::log(r));
        return v;
      }
      case OuterKind::pure_exp: return o.lambda;
      case OuterKind::scaled_exp: return o.iota;
      case OuterKind::exp_power_log:
        return o.lambda * std::pow(r, o.gamma - 1.0) * (o.gamma * std::log(r) + 1.0);
    }
    return 0.0;
  }

  double d2log_outer(double r) const {
    const auto& o = spec_.outer;
    switch (o.kind) {
      case OuterKind::power_log: {
        double v = -(o.alpha - 1.0) / (r * r);
        if (o.beta != 0.0) {
          const double l = std::log(r);
          v -= o.beta * (l + 1.0) / (r * r * l * l);
        }
        return v;
      }
      case OuterKind::pure_exp:
      case OuterKind::scaled_exp: return 0.0;
      case OuterKind::exp_power_log: {
        const double g = o.gamma, l = std::log(r);
        return o.lambda * std::pow(r, g - 2.0) * ((g - 1.0) * (g * l + 1.0) + g);
      }
    }
    return 0.0;
  }

  // Cubic Hermite in log ψ on [r1, r2].
  double blend(double r) const {
    const double h = spec_.r2 - spec_.r1, s = (r - spec_.r1) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * h0_ + (s3 - 2 * s2 + s) * h * d0_ +
           (-2 * s3 + 3 * s2) * h1_ + (s3 - s2) * h * d1_;
  }
  double dblend(double r) const {
    const double h = spec_.r2 - spec_.r1, s = (r - spec_.r1) / h;
    const double s2 = s * s;
    return ((6 * s2 - 6 * s) * h0_ + (-6 * s2 + 6 * s) * h1_) / h +
           (3 * s2 - 4 * s + 1) * d0_ + (3 * s2 - 2 * s) * d1_;
  }
  double d2blend(double r) const {
    const double h = spec_.r2 - spec_.r1, s = (r - spec_.r1) / h;
    return ((12 * s - 6) * h0_ + (-12 * s + 6) * h1_) / (h * h) +
           ((6 * s - 4) * d0_ + (6 * s - 2) * d1_) / h;
  }

  void set_blend_data(double c0) {
    spec_.c0 = c0;
    log_c0_term_ = n1() * std::log(c0);
    h0_ = std::log(spec_.r1);
    d0_ = 1.0 / spec_.r1;
    h1_ = (log_outer(spec_.r2) - log_omega_) / n1();
    d1_ = dlog_outer(spec_.r2) / n1();
  }

  bool blend_monotone() const {
    for (int k = 0; k <= 1000; ++k) {
      const double r = spec_.r1 + (spec_.r2 - spec_.r1) * k / 1000.0;
      if (dblend(r) < 0.0) return false;
    }
    return true;
  }

  bool outer_dominates() const {
    const double r2 = spec_.r2;
    const double psi_out = std::exp(h1_);
    return psi_out >= r2 * (1.0 - 1e-14) && psi_out * d1_ >= 1.0 - 1e-14;
  }

  bool outer_increasing() const {
    double r = spec_.r2;
    for (int k = 0; k < 400; ++k, r *= 1.1)
      if (dlog_outer(r) < 0.0) return false;
    return true;
  }

  void resolve_blend() {
    log_omega_ = std::log(omega_);
    const std::optional<double> fixed = spec_.c0;
    const double r2_initial = spec_.r2;
    for (int doubling = 0; doubling <= 8; ++doubling) {
      spec_.r2 = r2_initial * std::pow(2.0, doubling);
      if (fixed) {
        set_blend_data(*fixed);
        if (blend_monotone()) goto done;
        continue;
      }
      for (int k = 0; k <= 64; ++k) {
        set_blend_data(std::ldexp(1.0, k));
        if (outer_dominates() && blend_monotone()) goto done;
      }
    }
    {
      std::ostringstream os;
      os << "no increasing C1 connector between r1=" << spec_.r1 << " and r2=" << r2_initial
         << " (tried 8 doublings of r2)";
      throw ConstructionError("build_manifold", os.str());
    }
  done:
    if (!outer_increasing())
      throw ConstructionError("build_manifold", "outer profile is not increasing");
  }

  // Beyond this radius S varies on scales below double resolution and V is
  // taken from the Laplace expansion ∫^r e^L ≈ e^L (1/L' + L''/L'^3).
  bool asymptotic(double r) const { return r > spec_.r2 && r * dlog_surface(r) > 1e7; }

  double log_volume_asymptotic(double r) const {
    const double l1 = dlog_surface(r), l2 = d2log_surface(r);
    return log_surface(r) - std::log(l1) + std::log1p(l2 / (l1 * l1));
  }

  void build_volume_cache() {
    knots_.clear();
    log_vol_.clear();
    const double r1 = spec_.r1, r2 = spec_.r2;
    knots_.push_back(r1);
    log_vol_.push_back(log_omega_ + spec_.n * std::log(r1) - std::log(double(spec_.n)));
    for (int k = 1; k <= 16; ++k) knots_.push_back(r1 + (r2 - r1) * k / 16.0);
    for (double r = r2 * 1.1; r <= 1e20 && !asymptotic(r); r *= 1.1) knots_.push_back(r);
    for (std::size_t k = 1; k < knots_.size(); ++k)
      log_vol_.push_back(numeric::log_add_exp(log_vol_[k - 1],
                                              log_integral_surface(knots_[k - 1], knots_[k])));
  }

  WarpProfile spec_;
  double omega_ = 0.0;
  double log_omega_ = 0.0;
  double log_c0_term_ = 0.0;
  double h0_ = 0.0, d0_ = 0.0, h1_ = 0.0, d1_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> log_vol_;
};

inline ModelManifold build_manifold(const WarpProfile& profile) { return ModelManifold(profile); }

struct GrowthCertificate {
  VolumeBound bound;
  double r_lo = 0.0;
  double r_hi = 0.0;
  double log_sup_ratio = 0.0;
  double sup_ratio = 0.0;
  double fitted_constant = 0.0;
  double tail_slope = 0.0;
  double slope_tolerance = 0.02;
  bool pass = false;
};

/// Checks V(r) ≲ bound(r) on [r_lo, r_hi]: the ratio must stay finite and its
/// log-log slope over the upper half of the window must not exceed 0.02.
inline GrowthCertificate certify_growth(const ModelManifold& man, const VolumeBound& bound,
                                        double r_lo, double r_hi) {
  if (!(r_lo > man.r2()) || !(r_hi >= 100.0 * r_lo))
    throw ParameterError("certificate window must lie beyond r2 and span two decades");
  GrowthCertificate c;
  c.bound = bound;
  c.r_lo = r_lo;
  c.r_hi = r_hi;
  const auto grid = numeric::log_grid(r_lo, r_hi, 512);
  std::vector<double> x, y;
  c.log_sup_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lv = man.log_volume(grid[i]);
    if (!std::isfinite(lv)) {
      std::ostringstream os;
      os << "volume not representable at r=" << grid[i] << "; largest feasible r_hi is "
         << (i > 0 ? grid[i - 1] : r_lo);
      throw numeric::NumericError(os.str());
    }
    const double lr = lv - bound.log_value(grid[i]);
    c.log_sup_ratio = std::max(c.log_sup_ratio, lr);
    if (i >= grid.size() / 2) {
      x.push_back(std::log(grid[i]));
      y.push_back(lr);
    }
  }
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= double(y.size());
  c.fitted_constant = std::exp(mean);
  c.sup_ratio = std::exp(c.log_sup_ratio);
  c.tail_slope = numeric::fit_slope(x, y);
  c.pass = std::isfinite(c.log_sup_ratio) && c.tail_slope <= c.slope_tolerance;
  return c;
}

}  // namespace liouville
