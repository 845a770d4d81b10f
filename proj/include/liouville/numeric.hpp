#pragma once

// Quadrature, root bracketing and differencing helpers shared by the modules.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdint>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "liouville/params.hpp"

namespace liouville::numeric {

class NumericError : public Error {
 public:
  using Error::Error;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  bool converged = true;
};

namespace detail {

struct Panel {
  double a, b, value, error, l1;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Single 31-point Gauss-Kronrod panel.  Boost reports the Kronrod-Gauss
// difference on the reference interval, so the error is rescaled here.
inline Panel kronrod_panel(const std::function<double(double)>& f, double a, double b) {
  Panel p{a, b, 0.0, 0.0, 0.0};
  double err = 0.0, l1 = 0.0;
  p.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err,
                                                                           &l1);
  p.error = err * 0.5 * (b - a);
  p.l1 = l1;
  return p;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on [a, b] (b may be +infinity): the panel
/// with the largest error is bisected until the summed error drops below
/// rel_tol times the integral, or max_panels is reached.
inline QuadResult integrate(const std::function<double(double)>& fn, double a, double b,
                            double rel_tol = 1e-12, std::size_t max_panels = 4000) {
  QuadResult r;
  if (a == b) return r;
  if (std::isinf(b)) {
    auto g = [&](double x) {
      const double t = 1.0 - x;
      return fn(a + x / t) / (t * t);
    };
    return integrate(g, 0.0, 1.0, rel_tol, max_panels);
  }
  std::vector<detail::Panel> heap;
  try {
    heap.push_back(detail::kronrod_panel(fn, a, b));
    double value = heap.front().value, error = heap.front().error;
    while (heap.size() < max_panels) {
      const double l1 = [&] {
        double s = 0.0;
        for (const auto& p : heap) s += p.l1;
        return s;
      }();
      if (error <= std::max(rel_tol * std::abs(value), 1e-15 * l1)) break;
      std::pop_heap(heap.begin(), heap.end());
      const detail::Panel worst = heap.back();
      heap.pop_back();
      const double mid = 0.5 * (worst.a + worst.b);
      if (!(mid > worst.a && mid < worst.b)) {
        heap.push_back(worst);
        std::push_heap(heap.begin(), heap.end());
        break;
      }
      for (const auto& part : {detail::kronrod_panel(fn, worst.a, mid),
                               detail::kronrod_panel(fn, mid, worst.b)}) {
        heap.push_back(part);
        std::push_heap(heap.begin(), heap.end());
      }
      value = 0.0;
      error = 0.0;
      for (const auto& p : heap) {
        value += p.value;
        error += p.error;
      }
    }
    for (const auto& p : heap) r.l1 += p.l1;
    r.value = value;
    r.error = error;
  } catch (const NumericError&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericError(std::string("quadrature failed: ") + e.what());
  }
  if (!std::isfinite(r.value)) throw NumericError("quadrature produced a non-finite value");
  r.converged = r.error <= std::max(rel_tol * std::abs(r.value), 1e-15 * r.l1) * 1.0000001;
  return r;
}

/// Sum of integrals over consecutive panels [x_k, x_{k+1}].
inline QuadResult integrate_panels(const std::function<double(double)>& f,
                                   const std::vector<double>& breaks, double rel_tol = 1e-12) {
  QuadResult total;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const QuadResult part = integrate(f, breaks[k], breaks[k + 1], rel_tol);
    total.value += part.value;
    total.error += part.error;
    total.l1 += part.l1;
    total.converged = total.converged && part.converged;
  }
  return total;
}

/// Geometric breakpoints a = x_0 < ... < x_n = b (requires 0 < a < b).
inline std::vector<double> geometric_breaks(double a, double b, std::size_t n) {
  std::vector<double> out(n + 1);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t k = 0; k <= n; ++k) out[k] = std::exp(la + (lb - la) * double(k) / double(n));
  out.front() = a;
  out.back() = b;
  return out;
}

inline std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n < 2) return {lo};
  return geometric_breaks(lo, hi, n - 1);
}

/// Root of f in [lo, hi] by bisection, stopping at relative width rel_tol.
template <class F>
double bisect(F&& f, double lo, double hi, double rel_tol = 1e-14, std::uintmax_t max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) {
    std::ostringstream os;
    os << "no sign change on [" << lo << ", " << hi << "]";
    throw NumericError(os.str());
  }
  auto tol = [rel_tol](double x, double y) {
    return std::abs(y - x) <= rel_tol * std::max(std::abs(x), std::abs(y));
  };
  try {
    std::uintmax_t iters = max_iter;
    const auto bracket = boost::math::tools::bisect(f, lo, hi, tol, iters);
    return 0.5 * (bracket.first + bracket.second);
  } catch (const std::exception& e) {
    throw NumericError(std::string("bisection failed: ") + e.what());
  }
}

inline double log_add_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double hi = std::max(x, y);
  return hi + std::log1p(std::exp(-std::abs(x - y)));
}

enum class Stencil { central, forward, backward };

/// Fourth-order first derivative of f at x with step h.
template <class F>
double derivative(F&& f, double x, double h, Stencil s = Stencil::central) {
  switch (s) {
    case Stencil::central:
      return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
    case Stencil::forward:
      return (-25 * f(x) + 48 * f(x + h) - 36 * f(x + 2 * h) + 16 * f(x + 3 * h) -
              3 * f(x + 4 * h)) /
             (12 * h);
    case Stencil::backward:
      return (25 * f(x) - 48 * f(x - h) + 36 * f(x - 2 * h) - 16 * f(x - 3 * h) +
              3 * f(x - 4 * h)) /
             (12 * h);
  }
  return 0.0;
}

/// |x|^{k-1} x, the odd power used for the m-Laplacian flux.
inline double signed_pow(double x, double k) {
  if (x == 0.0) return 0.0;
  return std::copysign(std::pow(std::abs(x), k), x);
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace liouville::numeric
