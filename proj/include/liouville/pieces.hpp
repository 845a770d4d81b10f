#pragma once

// Profile families from which solutions are assembled.  Every piece returns
// value and derivative in closed form (or a convergent series), so the flux
// can be differenced without quadrature noise.

#include <cmath>
#include <limits>
#include <string_view>
#include <variant>

#include "liouville/numeric.hpp"
#include "liouville/params.hpp"

namespace liouville {

struct PieceEval {
  double value = 0.0;
  double deriv = 0.0;
  double log_deriv = 0.0;  // deriv / value, exact even when value underflows
};

/// u(r) = A ∫_r^s (1 - e^{-x/s})^θ dx on [0, s], with A normalising u(0) = 1.
/// s = ρ gives u_{1,ρ}; s = 2ρ gives u_{2,ρ}.
struct OriginIntegral {
  double s = 1.0;
  double theta = 1.0;
  double A = 1.0;

  // J(r) = ∫_r^s (1 - e^{-x/s})^θ dx
  //      = s Σ_k (y_s^{c+k} - y_r^{c+k}) / (c+k),  y = 1 - e^{-x/s}, c = θ + 1.
  double integral_from(double r) const {
    const double c = theta + 1.0;
    const double ys = -std::expm1(-1.0);
    // log(y_r / y_s) without cancellation near r = s.
    const double diff = std::exp(-r / s) * std::expm1(-(s - r) / s);  // y_r - y_s
    const double lratio = r > 0.0 ? std::log1p(diff / ys) : -std::numeric_limits<double>::infinity();
    const double lys = std::log(ys);
    double sum = 0.0;
    for (int k = 0; k < 400; ++k) {
      const double e = c + k;
      const double term = std::exp(e * lys) * -std::expm1(e * lratio) / e;
      sum += term;
      if (term <= 1e-18 * sum) break;
    }
    return s * sum;
  }

  static OriginIntegral make(double s, double theta) {
    OriginIntegral o{s, theta, 1.0};
    o.A = 1.0 / o.integral_from(0.0);
    return o;
  }

  PieceEval eval(double r) const {
    PieceEval e;
    e.value = A * integral_from(r);
    e.deriv = -A * std::pow(-std::expm1(-r / s), theta);
    e.log_deriv = e.deriv / e.value;
    return e;
  }
};

/// u(r) = K ∫_{ln r}^∞ e^{-k x} x^e dx, i.e. ∫_r^∞ S^{-1/(m-1)} (ln t)^{η/(m-1)} dt
/// on a power_log manifold, with k = (α-m)/(m-1), e = (η-β)/(m-1).
struct LogPowerTail {
  double K = 1.0;
  double k = 1.0;
  double e = 0.0;

  double value(double r) const {
    const double L = std::log(r);
    // Body over 60 e-folds, then the leading asymptotic remainder.
    const double X = L + 60.0 / k;
    auto f = [&](double x) { return std::exp(-k * (x - L) + e * std::log(x / L)); };
    const double body = numeric::integrate(f, L, X, 1e-14).value;
    const double rem = std::exp(-k * (X - L) + e * std::log(X / L)) / k * (1.0 + e / (k * X));
    return K * std::exp(-k * L + e * std::log(L)) * (body + rem);
  }

  PieceEval eval(double r) const {
    PieceEval out;
    out.value = value(r);
    out.deriv = -K * std::exp(-(k + 1.0) * std::log(r) + e * std::log(std::log(r)));
    out.log_deriv = out.deriv / out.value;
    return out;
  }
};

/// u(r) = C (ln r)^{-κ}.
struct LogPower {
  double C = 1.0;
  double kappa = 1.0;

  PieceEval eval(double r) const {
    const double L = std::log(r);
    PieceEval e;
    e.value = C * std::pow(L, -kappa);
    e.log_deriv = -kappa / (r * L);
    e.deriv = e.value * e.log_deriv;
    return e;
  }
};

/// u(r) = c + r^{-η}.
struct ShiftedPower {
  double offset = 1.0;
  double eta = 0.5;

  PieceEval eval(double r) const {
    PieceEval e;
    const double t = std::pow(r, -eta);
    e.value = offset + t;
    e.deriv = -eta * t / r;
    e.log_deriv = e.deriv / e.value;
    return e;
  }
};

/// u(r) = e^{-ηr}.
struct Exponential {
  double eta = 1.0;

  PieceEval eval(double r) const {
    PieceEval e;
    e.value = std::exp(-eta * r);
    e.deriv = -eta * e.value;
    e.log_deriv = -eta;
    return e;
  }
};

/// u(r) = c (1 - (pr)^{(p+1)/p} / ((p+1)(m-1)^{1/p})), p > 0.
struct OriginPower {
  double c = 1.0;
  double p = 1.0;
  double m = 2.0;

  PieceEval eval(double r) const {
    PieceEval e;
    const double pr = p * r;
    e.value = c * (1.0 - std::pow(pr, (p + 1.0) / p) / ((p + 1.0) * std::pow(m - 1.0, 1.0 / p)));
    e.deriv = -c * std::pow(pr / (m - 1.0), 1.0 / p);
    e.log_deriv = e.deriv / e.value;
    return e;
  }
};

/// u(r) = c - r^α.
struct OriginPolynomial {
  double c = 1.0;
  double alpha = 2.0;

  PieceEval eval(double r) const {
    PieceEval e;
    e.value = c - std::pow(r, alpha);
    e.deriv = -alpha * std::pow(r, alpha - 1.0);
    e.log_deriv = e.deriv / e.value;
    return e;
  }
};

/// u(r) = e^{(ln r)/r}.
struct ExpLogOverR {
  PieceEval eval(double r) const {
    PieceEval e;
    const double L = std::log(r);
    e.value = std::exp(L / r);
    e.log_deriv = (1.0 - L) / (r * r);
    e.deriv = e.value * e.log_deriv;
    return e;
  }
};

using Piece = std::variant<OriginIntegral, LogPowerTail, LogPower, ShiftedPower, Exponential,
                           OriginPower, OriginPolynomial, ExpLogOverR>;

inline PieceEval evaluate(const Piece& piece, double r) {
  return std::visit([r](const auto& p) { return p.eval(r); }, piece);
}

inline std::string_view piece_kind(const Piece& piece) {
  struct Name {
    std::string_view operator()(const OriginIntegral&) const { return "origin_integral"; }
    std::string_view operator()(const LogPowerTail&) const { return "log_power_tail"; }
    std::string_view operator()(const LogPower&) const { return "log_power"; }
    std::string_view operator()(const ShiftedPower&) const { return "shifted_power"; }
    std::string_view operator()(const Exponential&) const { return "exponential"; }
    std::string_view operator()(const OriginPower&) const { return "origin_power"; }
    std::string_view operator()(const OriginPolynomial&) const { return "origin_polynomial"; }
    std::string_view operator()(const ExpLogOverR&) const { return "exp_log_over_r"; }
  };
  return std::visit(Name{}, piece);
}

}  // namespace liouville
