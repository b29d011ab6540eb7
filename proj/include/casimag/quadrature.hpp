#pragma once

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "error.hpp"

namespace casimag {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

namespace detail {

// One rule object per thread: the bounded-interval overloads are non-const in Boost 1.74.
inline boost::math::quadrature::exp_sinh<double>& half_line_rule() {
  thread_local boost::math::quadrature::exp_sinh<double> rule(12);
  return rule;
}

inline boost::math::quadrature::tanh_sinh<double>& interval_rule() {
  thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
  return rule;
}

inline void check_finite(const QuadratureResult& r, const char* where) {
  if (!std::isfinite(r.value) || !std::isfinite(r.error))
    throw QuadratureError(std::string(where) + ": non-finite quadrature result");
}

}  // namespace detail

/// Integral of f over [a, inf) by the exp-sinh rule.
template <class F>
QuadratureResult integrate_to_infinity(F&& f, double a, double rel_tol, const char* where = "quadrature") {
  QuadratureResult r;
  try {
    r.value = detail::half_line_rule().integrate(f, a, std::numeric_limits<double>::infinity(), rel_tol,
                                                 &r.error, &r.l1);
  } catch (const std::exception& e) {
    throw QuadratureError(std::string(where) + ": " + e.what());
  }
  detail::check_finite(r, where);
  return r;
}

/// Integral of f over [a, b] by the tanh-sinh rule.
template <class F>
QuadratureResult integrate_interval(F&& f, double a, double b, double rel_tol, const char* where = "quadrature") {
  QuadratureResult r;
  if (a == b) return r;
  try {
    r.value = detail::interval_rule().integrate(f, a, b, rel_tol, &r.error, &r.l1);
  } catch (const std::exception& e) {
    throw QuadratureError(std::string(where) + ": " + e.what());
  }
  detail::check_finite(r, where);
  return r;
}

}  // namespace casimag
