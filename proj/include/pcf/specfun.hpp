#pragma once

// Scalar special functions: Hermite polynomials, Gamma, erfc, K_{1/4} and
// the parabolic cylinder function D_v for the orders used by the identities
// in this library.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

#include "pcf/errors.hpp"
#include "pcf/quadrature.hpp"

namespace pcf::specfun {

/// A truncated sum.
struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// Estimated absolute truncation error.
  double tail_bound = 0.0;
};

/// mantissa * exp(log_scale), for values that leave double range.
struct ScaledValue {
  double mantissa = 0.0;
  double log_scale = 0.0;

  double value() const {
    if (mantissa == 0.0) return 0.0;
    return std::copysign(std::exp(std::log(std::abs(mantissa)) + log_scale), mantissa);
  }
  double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
};

/// ln n! by direct summation (std::lgamma writes a global and is avoided).
inline double log_factorial(unsigned n) {
  double s = 0.0;
  for (unsigned k = 2; k <= n; ++k) s += std::log(static_cast<double>(k));
  return s;
}

/// h_n(x) = H_n(x) / sqrt(2^n n!) via
/// h_{k+1} = x sqrt(2/(k+1)) h_k - sqrt(k/(k+1)) h_{k-1}, rescaled to stay in range.
inline ScaledValue hermite_normalized(unsigned n, double x) {
  double prev = 0.0;
  double cur = 1.0;
  double log_scale = 0.0;
  for (unsigned k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const double next = x * std::sqrt(2.0 / (kd + 1.0)) * cur - std::sqrt(kd / (kd + 1.0)) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > 1e250) {
      cur *= 1e-250;
      prev *= 1e-250;
      log_scale += 250.0 * std::numbers::ln10;
    }
  }
  return {cur, log_scale};
}

/// Physicists' Hermite polynomial H_n(x) by the three-term recurrence.
/// Overflow yields a signed infinity.
inline double hermite(unsigned n, double x) {
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * x;
  for (unsigned k = 1; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
    if (!std::isfinite(cur)) {
      const ScaledValue h = hermite_normalized(n, x);
      if (h.mantissa == 0.0) return 0.0;
      const double log_abs = h.log_abs() + 0.5 * (n * std::numbers::ln2 + log_factorial(n));
      return std::copysign(std::exp(log_abs), h.mantissa);
    }
  }
  return cur;
}

/// Gamma(nu) for nu > 0.
inline double gamma(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw pcf::domain_error("gamma: argument must be positive");
  return std::tgamma(nu);
}

inline double erfc(double x) { return std::erfc(x); }

/// K_{1/4}(z) from K_v(z) = int_0^inf exp(-z cosh t) cosh(v t) dt, computed as
/// exp(-z) int exp(-2 z sinh^2(t/2)) cosh(t/4) dt.
inline double bessel_k_quarter(double z, double tol = 1e-13) {
  if (!(z > 0.0) || !std::isfinite(z)) throw pcf::domain_error("bessel_k_quarter: z must be positive");
  auto exponent = [z](double t) {
    const double s = std::sinh(0.5 * t);
    return -2.0 * z * s * s;
  };
  const double target = std::log(1.0 / tol) + 40.0;
  double cutoff = 1.0;
  while (exponent(cutoff) + 0.25 * cutoff > -target) cutoff *= 2.0;
  auto integrand = [&exponent](double t) { return std::exp(exponent(t)) * std::cosh(0.25 * t); };
  const auto r = quad::integrate_to_cutoff(integrand, 0.0, cutoff, tol);
  return std::exp(-z) * r.value;
}

inline constexpr double max_pcf_order = 20.0;

/// Parabolic cylinder function D_order(z).
///
/// Negative order -v: D_{-v}(z) = exp(-z^2/4)/Gamma(v) int_0^inf t^(v-1) exp(-z t - t^2/2) dt.
/// Non-negative integer order n: D_n(z) = 2^(-n/2) exp(-z^2/4) H_n(z/sqrt 2).
/// Other orders are rejected.
inline double pcf_d(double order, double z, double tol = 1e-13) {
  if (!std::isfinite(order) || !std::isfinite(z)) throw pcf::domain_error("pcf_d: non-finite argument");
  if (std::abs(order) > max_pcf_order) throw pcf::domain_error("pcf_d: order outside [-20, 20]");

  if (order >= 0.0) {
    if (order != std::floor(order)) throw pcf::domain_error("pcf_d: positive non-integer order is not supported");
    const auto n = static_cast<unsigned>(order);
    const ScaledValue h = hermite_normalized(n, z / std::numbers::sqrt2);
    if (h.mantissa == 0.0) return 0.0;
    const double log_abs = -0.25 * z * z + 0.5 * log_factorial(n) + h.log_abs();
    return std::copysign(std::exp(log_abs), h.mantissa);
  }

  const double nu = -order;
  // Exponent shifted so its maximum over t >= 0 is zero.
  const double shift = z < 0.0 ? 0.5 * z * z : 0.0;
  auto exponent = [z](double t) { return z < 0.0 ? -0.5 * (t + z) * (t + z) : -z * t - 0.5 * t * t; };
  const double target = std::log(1.0 / tol) + 40.0;
  const double growth = std::max(nu - 1.0, 0.0);
  double cutoff = std::max(1.0, 1.0 - z);
  while (exponent(cutoff) + growth * std::log(cutoff) > -target) cutoff *= 1.5;
  auto integrand = [nu, &exponent](double t) { return std::pow(t, nu - 1.0) * std::exp(exponent(t)); };
  const auto r = quad::integrate_to_cutoff(integrand, nu - 1.0, cutoff, tol);
  return std::exp(-0.25 * z * z + shift) / gamma(nu) * r.value;
}

}  // namespace pcf::specfun
