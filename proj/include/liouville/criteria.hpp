#pragma once

// Classical volume criteria: parabolicity (∫ r/V), m-parabolicity
// (∫ (r/V)^{1/(m-1)}), stochastic completeness (∫ r/ln V) and the pair of
// integrals ∫ r^{2p-1}/V^{p-1}, ∫ [∫_r^∞ t/V]^{p-1} r dr.
//
// Divergence at infinity is decided from the tail of the integrand: log f is
// fitted as a ln r + b ln ln r + c over three decades, then
//   a < -1.05  convergent,   a > -0.95  divergent,
// and for |a + 1| <= 0.05 the same rule is applied to b.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "liouville/manifold.hpp"
#include "liouville/numeric.hpp"

namespace liouville {

enum class Verdict { divergent, convergent, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::divergent: return "divergent";
    case Verdict::convergent: return "convergent";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TailEstimate {
  double slope = 0.0;         // power exponent a
  double log_exponent = 0.0;  // log exponent b
  Verdict verdict = Verdict::inconclusive;
};

/// Decides whether ∫^∞ f converges, given log f.
inline TailEstimate tail_verdict(const std::function<double(double)>& log_f, double r_start,
                                 double margin = 0.05) {
  TailEstimate est;
  try {
    // Normal equations for y = a x1 + b x2 + c.
    double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
    double m1 = 0, m2 = 0, my = 0;
    std::vector<double> x1, x2, y;
    for (double r : numeric::log_grid(r_start, 1000.0 * r_start, 96)) {
      const double v = log_f(r);
      if (!std::isfinite(v)) return est;
      x1.push_back(std::log(r));
      x2.push_back(std::log(std::log(r)));
      y.push_back(v);
    }
    const double n = double(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      m1 += x1[i] / n;
      m2 += x2[i] / n;
      my += y[i] / n;
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double a = x1[i] - m1, b = x2[i] - m2, c = y[i] - my;
      s11 += a * a;
      s12 += a * b;
      s22 += b * b;
      s1y += a * c;
      s2y += b * c;
    }
    const double det = s11 * s22 - s12 * s12;
    est.slope = (s22 * s1y - s12 * s2y) / det;
    est.log_exponent = (s11 * s2y - s12 * s1y) / det;
    auto decide = [&](double e) {
      if (e < -1.0 - margin) return Verdict::convergent;
      if (e > -1.0 + margin) return Verdict::divergent;
      return Verdict::inconclusive;
    };
    est.verdict = decide(est.slope);
    if (est.verdict == Verdict::inconclusive) est.verdict = decide(est.log_exponent);
  } catch (const Error&) {
    est.verdict = Verdict::inconclusive;
  }
  return est;
}

struct CriteriaReport {
  TailEstimate parabolic_cy;             // ∫ r/V
  TailEstimate m_parabolic;              // ∫ (r/V)^{1/(m-1)}
  TailEstimate stochastically_complete;  // ∫ r/ln V
  std::optional<TailEstimate> vol_int_1;
  std::optional<TailEstimate> vol_int_2;
  /// Common verdict of the two integrals, inconclusive when they disagree.
  std::optional<Verdict> conjecture_integrals;
  bool conjecture_agree = true;
  double r_start = 0.0;
};

/// Criteria for an arbitrary volume function given as log V.
inline CriteriaReport classical_criteria(const std::function<double(double)>& log_volume,
                                         double m, std::optional<double> p_exp,
                                         double r_start = 1e6) {
  if (!(m > 1.0)) throw ParameterError("criteria require m > 1");
  if (p_exp && !(*p_exp > 1.0)) throw ParameterError("conjecture integrals require p > 1");
  CriteriaReport rep;
  rep.r_start = r_start;
  auto log_r_over_v = [&](double r) { return std::log(r) - log_volume(r); };
  rep.parabolic_cy = tail_verdict(log_r_over_v, r_start);
  rep.m_parabolic = tail_verdict([&](double r) { return log_r_over_v(r) / (m - 1.0); }, r_start);
  rep.stochastically_complete = tail_verdict(
      [&](double r) { return std::log(r) - std::log(log_volume(r)); }, r_start);
  if (!p_exp) return rep;
  const double p = *p_exp;
  rep.vol_int_1 = tail_verdict(
      [&](double r) { return (2.0 * p - 1.0) * std::log(r) - (p - 1.0) * log_volume(r); },
      r_start);
  if (rep.parabolic_cy.verdict != Verdict::convergent) {
    // The inner integral ∫_r^∞ t/V is already infinite.
    TailEstimate inf;
    inf.verdict = rep.parabolic_cy.verdict;
    inf.slope = std::numeric_limits<double>::infinity();
    rep.vol_int_2 = inf;
  } else {
    // log ∫_r^∞ t/V dt with t = r e^x over 20 e-folds plus a power-law remainder.
    auto log_inner = [&](double r) {
      const double lr = std::log(r);
      auto g = [&](double x) { return std::exp(2.0 * (lr + x) - log_volume(r * std::exp(x)) -
                                               (2.0 * lr - log_volume(r))); };
      const double X = 20.0;
      const double body = numeric::integrate(g, 0.0, X, 1e-10).value;
      const double T = r * std::exp(X);
      const double h = 1e-3;
      const double s = (log_r_over_v(T * std::exp(h)) - log_r_over_v(T * std::exp(-h))) / (2 * h);
      const double tail = s < -1.0 ? g(X) / (-s - 1.0) : 0.0;
      return 2.0 * lr - log_volume(r) + std::log(body + tail);
    };
    rep.vol_int_2 = tail_verdict(
        [&](double r) { return (p - 1.0) * log_inner(r) + std::log(r); }, r_start);
  }
  const Verdict v1 = rep.vol_int_1->verdict, v2 = rep.vol_int_2->verdict;
  rep.conjecture_agree = v1 == v2;
  rep.conjecture_integrals = rep.conjecture_agree ? v1 : Verdict::inconclusive;
  return rep;
}

inline CriteriaReport classical_criteria(const ModelManifold& man, double m,
                                         std::optional<double> p_exp, double r_start = 1e6) {
  return classical_criteria([&man](double r) { return man.log_volume(r); }, m, p_exp, r_start);
}

}  // namespace liouville
