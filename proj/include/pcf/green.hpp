#pragma once

// Green function of the oscillator problem y'' + (lambda - x^2) y = 0,
// y(+-inf) = 0, three ways: the eigenfunction expansion, the closed form in
// parabolic cylinder functions, and a shooting solution of the ODE.
//
// The expansion sum_n y_n(x) y_n(x') / (lambda_n - lambda) solves the
// equation with source -delta(x - x'); every routine here uses that sign.

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pcf/errors.hpp"
#include "pcf/mehler.hpp"
#include "pcf/specfun.hpp"

namespace pcf::green {

using specfun::SeriesResult;

struct GreenQuery {
  double lambda = 0.0;
  double x = 0.0;
  double xprime = 0.0;
};

inline constexpr unsigned max_eigen_index = 200;
inline constexpr double max_eigen_argument = 10.0;
inline constexpr double spectral_pole_guard = 1e-6;
inline constexpr double oracle_pole_guard = 0.1;
inline constexpr double oracle_max_argument = 6.0;
inline constexpr double shooting_boundary = 8.0;

/// Distance from lambda to the nearest eigenvalue 2n + 1.
inline double eigenvalue_distance(double lambda) {
  if (lambda < 1.0) return 1.0 - lambda;
  const double n = std::round(0.5 * (lambda - 1.0));
  return std::abs(lambda - (2.0 * n + 1.0));
}

/// y_n(x) = e^{-x^2/2} H_n(x) / sqrt(2^n n! sqrt(pi)).
inline double eigenfunction(unsigned n, double x) {
  if (n > max_eigen_index || !(std::abs(x) <= max_eigen_argument))
    throw pcf::domain_error("eigenfunction requires n <= 200 and |x| <= 10");
  const specfun::ScaledValue h = specfun::hermite_normalized(n, x);
  if (h.mantissa == 0.0) return 0.0;
  const double log_abs = h.log_abs() - 0.5 * x * x - 0.25 * std::log(std::numbers::pi);
  return std::copysign(std::exp(log_abs), h.mantissa);
}

/// (1/sqrt pi) e^{-(x^2+x'^2)/2} sum_n H_n(x) H_n(x') / (2^n n! (2n + 1 - lambda)).
inline SeriesResult green_spectral(const GreenQuery& q, double tol,
                                   mehler::SummationMethod method = mehler::SummationMethod::abel) {
  if (!std::isfinite(q.lambda)) throw pcf::domain_error("green_spectral requires finite lambda");
  if (eigenvalue_distance(q.lambda) < spectral_pole_guard)
    throw pcf::domain_error("green_spectral: lambda is within 1e-6 of an eigenvalue 2n+1");
  // 1/(2n + 1 - lambda) = (1/2) / (n + (1 - lambda)/2)
  SeriesResult r = mehler::resolvent_sum(q.x, q.xprime, 0.5 * (1.0 - q.lambda), tol, method);
  const double scale = 0.5 * std::exp(-0.5 * (q.x * q.x + q.xprime * q.xprime)) / std::sqrt(std::numbers::pi);
  r.value *= scale;
  r.tail_bound *= scale;
  return r;
}

/// (1/(2 sqrt pi)) Gamma((1-lambda)/2) D_{(lambda-1)/2}(x sqrt2) D_{(lambda-1)/2}(-x' sqrt2), x > x'.
inline double green_closed(const GreenQuery& q) {
  if (!(q.x > q.xprime)) throw pcf::domain_error("green_closed requires x > x'");
  const double mu = 0.5 * (1.0 - q.lambda);
  if (!(mu > 0.0) || mu > specfun::max_pcf_order)
    throw pcf::domain_error("green_closed requires 0 < (1 - lambda)/2 <= 20");
  const double order = -mu;
  return 0.5 / std::sqrt(std::numbers::pi) * specfun::gamma(mu) *
         specfun::pcf_d(order, q.x * std::numbers::sqrt2) * specfun::pcf_d(order, -q.xprime * std::numbers::sqrt2);
}

namespace detail {

struct State {
  double y;
  double dy;
};

// Classical RK4 for y'' = (x^2 - lambda) y from x0 to x1 in n equal steps.
inline State rk4(double lambda, State s, double x0, double x1, long n) {
  const double h = (x1 - x0) / static_cast<double>(n);
  auto acc = [lambda](double x, double y) { return (x * x - lambda) * y; };
  for (long i = 0; i < n; ++i) {
    const double x = x0 + static_cast<double>(i) * h;
    const double k1y = s.dy;
    const double k1v = acc(x, s.y);
    const double k2y = s.dy + 0.5 * h * k1v;
    const double k2v = acc(x + 0.5 * h, s.y + 0.5 * h * k1y);
    const double k3y = s.dy + 0.5 * h * k2v;
    const double k3v = acc(x + 0.5 * h, s.y + 0.5 * h * k2y);
    const double k4y = s.dy + h * k3v;
    const double k4v = acc(x + h, s.y + h * k3y);
    s.y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    s.dy += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return s;
}

inline long steps(double length, long per_unit) {
  return std::max(1L, static_cast<long>(std::ceil(length * static_cast<double>(per_unit))));
}

// -y_-(lo) y_+(hi) / W, where y_- decays at -inf and y_+ at +inf. Both start
// at +-L with the WKB log-derivative of the decaying branch.
inline double shoot(double lambda, double lo, double hi, long per_unit) {
  const double L = shooting_boundary;
  const double k2 = L * L - lambda;
  const double k = std::sqrt(k2);
  // y_-: y'/y = kappa + L/(2 kappa^2) at x = -L; y_+: y'/y = -(kappa + L/(2 kappa^2)) at x = +L.
  const double slope = k + L / (2.0 * k2);

  const State left_lo = rk4(lambda, {1.0, slope}, -L, lo, steps(lo + L, per_unit));
  const State right_hi = rk4(lambda, {1.0, -slope}, L, hi, steps(L - hi, per_unit));
  const State right_lo = hi > lo ? rk4(lambda, right_hi, hi, lo, steps(hi - lo, per_unit)) : right_hi;

  const double w = left_lo.y * right_lo.dy - left_lo.dy * right_lo.y;
  return -left_lo.y * right_hi.y / w;
}

}  // namespace detail

/// The Green function by shooting: RK4 from +-8, refined until successive
/// step sizes agree to 1e-9 relative.
inline double green_ode_oracle(const GreenQuery& q) {
  if (!std::isfinite(q.lambda) || !(std::abs(q.x) <= oracle_max_argument) ||
      !(std::abs(q.xprime) <= oracle_max_argument))
    throw pcf::domain_error("green_ode_oracle requires |x|, |x'| <= 6");
  if (eigenvalue_distance(q.lambda) < oracle_pole_guard)
    throw pcf::domain_error("green_ode_oracle requires lambda at least 0.1 from every eigenvalue");
  const double lo = std::min(q.x, q.xprime);
  const double hi = std::max(q.x, q.xprime);
  double previous = detail::shoot(q.lambda, lo, hi, 512);
  std::size_t work = 512;
  for (long per_unit = 1024; per_unit <= 65536; per_unit *= 2) {
    const double current = detail::shoot(q.lambda, lo, hi, per_unit);
    work += static_cast<std::size_t>(per_unit);
    if (std::abs(current - previous) <= 1e-9 * std::abs(current)) return current;
    previous = current;
  }
  throw pcf::convergence_error("green_ode_oracle: step refinement did not settle", previous, 0.0, work);
}

}  // namespace pcf::green
