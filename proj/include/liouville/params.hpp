#pragma once

// Exponent triples (m, p, q), the G/K region maps and the critical growth
// thresholds for  Δ_m u + u^p |∇u|^q ≤ 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace liouville {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid exponents or an operation called outside its domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Absolute tolerance used for the equalities q = m, q = m-1 and p+q = m-1.
inline constexpr double kBoundaryTol = 1e-12;

/// Three-way comparison that treats |x - y| <= kBoundaryTol as equality.
inline int compare(double x, double y) {
  const double d = x - y;
  if (std::abs(d) <= kBoundaryTol) return 0;
  return d < 0 ? -1 : 1;
}

struct Params {
  double m = 2.0;
  double p = 0.0;
  double q = 0.0;

  /// Checked constructor: m > 1, all finite.
  static Params make(double m, double p, double q) {
    Params out{m, p, q};
    out.validate();
    return out;
  }

  void validate() const {
    if (!std::isfinite(m) || !std::isfinite(p) || !std::isfinite(q))
      throw ParameterError("exponents must be finite");
    if (!(m > 1.0)) {
      std::ostringstream os;
      os << "m must exceed 1 (got m=" << m << ")";
      throw ParameterError(os.str());
    }
  }

  double critical_sum() const { return p + q - (m - 1.0); }
};

enum class Region { G1, G2, G3, G4, G5, G6 };

inline std::string_view to_string(Region r) {
  switch (r) {
    case Region::G1: return "G1";
    case Region::G2: return "G2";
    case Region::G3: return "G3";
    case Region::G4: return "G4";
    case Region::G5: return "G5";
    case Region::G6: return "G6";
  }
  return "?";
}

inline Region region_from_string(std::string_view s) {
  for (Region r : {Region::G1, Region::G2, Region::G3, Region::G4, Region::G5, Region::G6})
    if (to_string(r) == s) return r;
  throw ParameterError("unknown region '" + std::string(s) + "'");
}

/// Membership predicate of a single G-region.
inline bool in_region(Region r, const Params& x) {
  const double m1 = x.m - 1.0;
  const int cq_m = compare(x.q, x.m);
  const int cq_m1 = compare(x.q, m1);
  const int cpq = compare(x.p + x.q, m1);
  switch (r) {
    case Region::G1: return x.p >= 0.0 && cpq > 0 && cq_m < 0;
    case Region::G2: return cq_m >= 0;
    case Region::G3: return x.p < 0.0 && cq_m1 > 0 && cq_m < 0;
    case Region::G4: return cq_m1 == 0 && x.p < 0.0 && cpq != 0;
    case Region::G5: return cpq == 0 && cq_m1 <= 0;
    case Region::G6: return cpq < 0 && cq_m1 < 0;
  }
  return false;
}

inline Region classify(const Params& x) {
  x.validate();
  for (Region r : {Region::G5, Region::G2, Region::G4, Region::G1, Region::G3, Region::G6})
    if (in_region(r, x)) return r;
  // Unreachable for valid input: the six predicates cover the plane.
  throw ParameterError("point not covered by any region");
}

/// Smallest distance to the lines q = m, q = m-1, p+q = m-1, p = 0.
inline double boundary_distance(const Params& x) {
  const double m1 = x.m - 1.0;
  return std::min({std::abs(x.q - x.m), std::abs(x.q - m1), std::abs(x.p + x.q - m1),
                   std::abs(x.p)});
}

enum class KTag { K1, K2, K3, K4 };

inline std::string_view to_string(KTag k) {
  switch (k) {
    case KTag::K1: return "K1";
    case KTag::K2: return "K2";
    case KTag::K3: return "K3";
    case KTag::K4: return "K4";
  }
  return "?";
}

struct KRegion {
  std::optional<KTag> tag;
  bool on_critical_line = false;
};

inline bool in_k_region(KTag k, const Params& x) {
  const double m1 = x.m - 1.0;
  const int cq_m1 = compare(x.q, m1);
  const int cpq = compare(x.p + x.q, m1);
  switch (k) {
    case KTag::K1: return cpq < 0 && cq_m1 <= 0;
    case KTag::K2: return x.p >= 0.0 && cpq > 0 && cq_m1 <= 0;
    case KTag::K3: return cpq > 0 && cq_m1 > 0;
    case KTag::K4: return x.p < 0.0 && cq_m1 > 0 && cpq < 0;
  }
  return false;
}

inline KRegion k_classify(const Params& x) {
  x.validate();
  if (compare(x.p + x.q, x.m - 1.0) == 0) return {std::nullopt, true};
  for (KTag k : {KTag::K1, KTag::K2, KTag::K3, KTag::K4})
    if (in_k_region(k, x)) return {k, false};
  throw ParameterError("point not covered by any K-region");
}

struct OpenInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double a) const { return a > lo && a < hi; }
  bool empty() const { return !(hi > lo); }
};

/// Interval of exponents a for which the test function u^{-a} φ^b is usable.
/// Intersected with a > 0, which the estimate requires.
inline OpenInterval admissible_a(const Params& x) {
  const KRegion k = k_classify(x);
  if (k.on_critical_line) throw ParameterError("no admissible a on p+q=m-1");
  const double m1 = x.m - 1.0;
  OpenInterval out;
  switch (*k.tag) {
    case KTag::K1: out = {m1, std::numeric_limits<double>::infinity()}; break;
    case KTag::K2: out = {0.0, m1}; break;
    case KTag::K3: out = {x.p * (1.0 - x.m) / (x.q - m1), m1}; break;
    case KTag::K4: out = {m1, x.p * (1.0 - x.m) / (x.q - m1)}; break;
  }
  out.lo = std::max(out.lo, 0.0);
  return out;
}

/// Exponents appearing in the test-function estimate for a given a.
struct LemmaExponents {
  double a = 0.0;
  double numerator = 0.0;  // mp + q + a(q - m)
  double s = 0.0;
  double t = 0.0;
  double gamma = 0.0;
  double rho = 0.0;  // Hölder exponent, not the cutoff slope
  double b_min = 0.0;  // t * rho
  /// Exponent of 2b and of a in the final bound.
  double power_2b = 0.0;
  double power_a = 0.0;
};

inline LemmaExponents lemma_exponents(const Params& x, double a) {
  const double m1 = x.m - 1.0;
  const double D = x.p + x.q - m1;
  LemmaExponents e;
  e.a = a;
  e.numerator = x.m * x.p + x.q + a * (x.q - x.m);
  e.s = e.numerator / (m1 * x.p + a * (x.q - m1));
  e.t = e.numerator / (x.p + x.q - a);
  e.gamma = (x.p + x.q - a) / (m1 - a);
  e.rho = (x.p + x.q - a) / D;
  e.b_min = e.numerator / D;
  e.power_2b = e.numerator / D;
  e.power_a = -(x.p * m1 + a * (x.q - m1)) / D;
  return e;
}

struct CondAbResult {
  bool ok = false;
  std::string diagnostic;
  LemmaExponents exponents;
  explicit operator bool() const { return ok; }
};

inline CondAbResult check_cond_ab(const Params& x, double a, double b) {
  CondAbResult r;
  const double m1 = x.m - 1.0;
  if (compare(x.p + x.q, m1) == 0) {
    r.diagnostic = "p+q=m-1";
    return r;
  }
  if (!(a > 0.0) || !(b > 0.0)) {
    r.diagnostic = "a and b must be positive";
    return r;
  }
  const double den_s = m1 * x.p + a * (x.q - m1);
  const double den_t = x.p + x.q - a;
  const double den_g = m1 - a;
  if (den_s == 0.0 || den_t == 0.0 || den_g == 0.0) {
    r.diagnostic = "zero denominator";
    return r;
  }
  r.exponents = lemma_exponents(x, a);
  const LemmaExponents& e = r.exponents;
  auto fail = [&](const char* what, double v) {
    std::ostringstream os;
    os << what << " = " << v;
    r.diagnostic = os.str();
    return r;
  };
  if (!(e.s > 1.0)) return fail("s <= 1: s", e.s);
  if (!(e.t > 1.0)) return fail("t <= 1: t", e.t);
  if (!(e.gamma > 1.0)) return fail("gamma <= 1: gamma", e.gamma);
  if (!(e.rho > 1.0)) return fail("rho <= 1: rho", e.rho);
  if (!(b >= e.b_min) || !(b > e.numerator / (x.p + x.q - m1)))
    return fail("b below t*rho, t*rho", e.b_min);
  r.ok = true;
  return r;
}

enum class GrowthKind { polynomial_log, polynomial_any_alpha, exponential, exp_r_log_r };

inline std::string_view to_string(GrowthKind k) {
  switch (k) {
    case GrowthKind::polynomial_log: return "polynomial_log";
    case GrowthKind::polynomial_any_alpha: return "polynomial_any_alpha";
    case GrowthKind::exponential: return "exponential";
    case GrowthKind::exp_r_log_r: return "exp_r_log_r";
  }
  return "?";
}

/// Largest volume growth for which nonexistence holds.
struct GrowthThreshold {
  GrowthKind kind = GrowthKind::polynomial_log;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> kappa_sup;
};

inline GrowthThreshold critical_growth(const Params& x) {
  const double m1 = x.m - 1.0;
  GrowthThreshold g;
  switch (classify(x)) {
    case Region::G1: {
      const double D = x.p + x.q - m1;
      g.alpha = (x.m * x.p + x.q) / D;
      g.beta = m1 / D;
      break;
    }
    case Region::G2:
      g.alpha = x.m;
      g.beta = m1;
      break;
    case Region::G3: {
      const double D = x.q - m1;
      g.alpha = x.q / D;
      g.beta = m1 / D;
      break;
    }
    case Region::G4: g.kind = GrowthKind::polynomial_any_alpha; break;
    case Region::G5:
      g.kind = GrowthKind::exponential;
      g.kappa_sup = std::min(m1, 1.0) / (2.0 * std::exp(1.0));
      break;
    case Region::G6:
      g.kind = GrowthKind::exp_r_log_r;
      g.kappa_sup = (m1 - x.q) / (m1 - x.p - x.q);
      break;
  }
  return g;
}

/// Log exponent used by the G3 counterexample, 1/(q-m+1); differs from the
/// threshold β = (m-1)/(q-m+1) unless m = 2.
inline double g3_existence_log_exponent(const Params& x) { return 1.0 / (x.q - x.m + 1.0); }

/// H(p) = ((m-1)/p)^{p/(p+1)} + (m-1)((m-1)/p)^{-1/(p+1)}, p > 0.
inline double H_of_p(double m, double p) {
  if (!(m > 1.0)) throw ParameterError("H(p) requires m > 1");
  if (!(p > 0.0)) throw ParameterError("H(p) requires p > 0; use iota > 1 when p = 0");
  const double r = (m - 1.0) / p;
  return std::pow(r, p / (p + 1.0)) + (m - 1.0) * std::pow(r, -1.0 / (p + 1.0));
}

/// Minimiser of (m-1)η + η^{-p}, whose minimum is H(p): η = (p/(m-1))^{1/(p+1)}.
inline double H_optimal_eta(double m, double p) {
  if (!(m > 1.0) || !(p > 0.0)) throw ParameterError("optimal eta requires m > 1, p > 0");
  return std::pow(p / (m - 1.0), 1.0 / (p + 1.0));
}

}  // namespace liouville
