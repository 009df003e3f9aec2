#pragma once

// Hyperbolic integrals with closed forms in erfc and K_{1/4}:
//
//   int_0^inf sech(th) e^{-al^2 sinh(th) sinh(th+phi)} dth
//       = (pi/2) e^{al^2 cosh phi} erfc(al sinh(phi/2)) erfc(al cosh(phi/2))
//   int_0^inf sinh(th) e^{-al^2 sinh(th) sinh(th+phi)} dth
//       = sqrt(pi)/(2 al) [e^{al^2 c^2} c erfc(al c) - e^{al^2 s^2} s erfc(al s)],  c, s = cosh, sinh(phi/2)
//   int_0^inf sinh(th)^{-1/2} e^{-a cosh(th+phi)} dth
//       = sqrt(a sinh(phi)/pi) K_{1/4}(a c^2) K_{1/4}(a s^2)
//
// Left sides are plain theta quadratures and never touch erfc or K; right
// sides never touch the theta quadrature.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "pcf/errors.hpp"
#include "pcf/quadrature.hpp"
#include "pcf/specfun.hpp"
#include "pcf/verification.hpp"

namespace pcf::hyperbolic {

using quad::QuadratureResult;

struct HyperbolicQuery {
  double alpha = 1.0;
  double a = 1.0;
  double phi = 1.0;
};

/// e^{-745} is below the smallest subnormal double.
inline constexpr double underflow_exponent = 745.0;
inline constexpr double inner_tol = 1e-12;
inline constexpr double erfc_floor = 1e-8;
inline constexpr double k_floor = 1e-7;
inline constexpr double min_k_phi = 0.05;

namespace detail {

inline void check_alpha_phi(double alpha, double phi) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw pcf::domain_error("alpha must be positive");
  if (!(phi > 0.0) || !std::isfinite(phi)) throw pcf::domain_error("phi must be positive");
}

inline void check_a_phi(double a, double phi) {
  if (!(a > 0.0) || !std::isfinite(a)) throw pcf::domain_error("a must be positive");
  if (!(phi >= min_k_phi) || !std::isfinite(phi)) throw pcf::domain_error("phi must be at least 0.05");
}

// Smallest theta (to bisection accuracy) with g(theta) >= 745; g increasing.
template <class G>
double cutoff(const G& g) {
  double hi = 1.0;
  while (g(hi) < underflow_exponent) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < underflow_exponent ? lo : hi) = mid;
  }
  return hi;
}

inline double erfc_exponent(double alpha, double phi, double th) {
  return alpha * alpha * std::sinh(th) * std::sinh(th + phi);
}

}  // namespace detail

/// int_0^inf sech(th) e^{-al^2 sinh(th) sinh(th+phi)} dth.
inline QuadratureResult erfc_sech_lhs(double alpha, double phi, double tol = inner_tol) {
  detail::check_alpha_phi(alpha, phi);
  const double top = detail::cutoff([=](double th) { return detail::erfc_exponent(alpha, phi, th); });
  auto f = [=](double th) { return std::exp(-detail::erfc_exponent(alpha, phi, th)) / std::cosh(th); };
  return quad::integrate_to_cutoff(f, 0.0, top, tol);
}

inline double erfc_sech_rhs(double alpha, double phi) {
  detail::check_alpha_phi(alpha, phi);
  return 0.5 * std::numbers::pi * std::exp(alpha * alpha * std::cosh(phi)) *
         specfun::erfc(alpha * std::sinh(0.5 * phi)) * specfun::erfc(alpha * std::cosh(0.5 * phi));
}

/// int_0^inf sinh(th) e^{-al^2 sinh(th) sinh(th+phi)} dth.
inline QuadratureResult erfc_sinh_lhs(double alpha, double phi, double tol = inner_tol) {
  detail::check_alpha_phi(alpha, phi);
  const double top = detail::cutoff([=](double th) { return detail::erfc_exponent(alpha, phi, th); });
  auto f = [=](double th) { return std::sinh(th) * std::exp(-detail::erfc_exponent(alpha, phi, th)); };
  return quad::integrate_to_cutoff(f, 0.0, top, tol);
}

inline double erfc_sinh_rhs(double alpha, double phi) {
  detail::check_alpha_phi(alpha, phi);
  const double c = std::cosh(0.5 * phi);
  const double s = std::sinh(0.5 * phi);
  const double big = std::exp(alpha * alpha * c * c) * c * specfun::erfc(alpha * c);
  const double small = std::exp(alpha * alpha * s * s) * s * specfun::erfc(alpha * s);
  return std::sqrt(std::numbers::pi) / (2.0 * alpha) * (big - small);
}

/// int_0^inf sinh(th)^{-1/2} e^{-a cosh(th+phi)} dth, computed as
/// e^{-a cosh phi} int sinh(th)^{-1/2} e^{-2a sinh(th/2 + phi) sinh(th/2)} dth.
inline QuadratureResult k_quarter_lhs(double a, double phi, double tol = inner_tol) {
  detail::check_a_phi(a, phi);
  auto excess = [=](double th) { return 2.0 * a * std::sinh(0.5 * th + phi) * std::sinh(0.5 * th); };
  const double top = detail::cutoff(excess);
  auto f = [&excess](double th) { return std::exp(-excess(th)) / std::sqrt(std::sinh(th)); };
  QuadratureResult r = quad::integrate_to_cutoff(f, -0.5, top, tol);
  const double scale = std::exp(-a * std::cosh(phi));
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

inline double k_quarter_rhs(double a, double phi) {
  detail::check_a_phi(a, phi);
  const double c = std::cosh(0.5 * phi);
  const double s = std::sinh(0.5 * phi);
  return std::sqrt(a * std::sinh(phi) / std::numbers::pi) * specfun::bessel_k_quarter(a * c * c) *
         specfun::bessel_k_quarter(a * s * s);
}

/// sech-weighted erfc identity; passes at max(tol, 1e-8) relative.
inline VerificationRecord erfc_identity_sech(const HyperbolicQuery& q, double tol) {
  const QuadratureResult lhs = erfc_sech_lhs(q.alpha, q.phi);
  return make_record(IdentityId::EQ13A, {{"alpha", q.alpha}, {"phi", q.phi}}, lhs.value,
                     erfc_sech_rhs(q.alpha, q.phi), std::max(tol, erfc_floor), lhs.evaluations);
}

/// sinh-weighted erfc identity; passes at max(tol, 1e-8) relative.
inline VerificationRecord erfc_identity_sinh(const HyperbolicQuery& q, double tol) {
  const QuadratureResult lhs = erfc_sinh_lhs(q.alpha, q.phi);
  return make_record(IdentityId::EQ13B, {{"alpha", q.alpha}, {"phi", q.phi}}, lhs.value,
                     erfc_sinh_rhs(q.alpha, q.phi), std::max(tol, erfc_floor), lhs.evaluations);
}

/// K_{1/4} identity; passes at max(tol, 1e-7) relative.
inline VerificationRecord k_quarter_identity(const HyperbolicQuery& q, double tol) {
  const QuadratureResult lhs = k_quarter_lhs(q.a, q.phi);
  return make_record(IdentityId::EQ14, {{"a", q.a}, {"phi", q.phi}}, lhs.value, k_quarter_rhs(q.a, q.phi),
                     std::max(tol, k_floor), lhs.evaluations);
}

}  // namespace pcf::hyperbolic
