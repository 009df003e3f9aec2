#pragma once

// Integral representation of D_{-nu}(x) D_{-nu}(-y) for x > y > 0, nu > 0:
//
//   D_{-nu}(x) D_{-nu}(-y) = e^{-(x^2+y^2)/4} / (2 Gamma(nu))
//       * int_0^inf t^{nu/2-1} (t+1)^{-(nu+1)/2} e^{-(x^2+y^2)t/2 + xy sqrt(t(t+1))} dt,
//
// and its Laplace-transform forms in (a, b) = ((x^2+y^2)/2, xy):
//
//   int_0^inf t^{nu/2-1} (1+t)^{-(nu+1)/2} e^{-at} e^{+-b sqrt(t(t+1))} dt
//       = 2 e^{a/2} Gamma(nu) D_{-nu}(x) D_{-nu}(-+y).

#include <cmath>
#include <limits>

#include "pcf/errors.hpp"
#include "pcf/quadrature.hpp"
#include "pcf/specfun.hpp"

namespace pcf::product {

using quad::QuadratureResult;

struct ProductQuery {
  double nu = 1.0;
  double x = 0.0;
  double y = 0.0;
};

struct LaplaceParams {
  double nu = 1.0;
  double a = 0.0;
  double b = 0.0;
};

enum class LaplaceSign : int { plus = 1, minus = -1 };

/// Domain handling for product_via_integral.
enum class Domain {
  /// x > y > 0 only.
  strict,
  /// Also admits x == y > 0, where the integrand tail is algebraic (~ t^{-3/2}).
  exploratory,
};

inline constexpr double default_tol = 1e-10;
inline constexpr double max_reference_order = 10.0;
inline constexpr double max_reference_argument = 8.0;

/// a = (x^2+y^2)/2, b = xy.
inline LaplaceParams params_from_xy(const ProductQuery& q) {
  if (!(q.y > 0.0) || !(q.x > q.y)) throw pcf::domain_error("params_from_xy requires x > y > 0");
  return {q.nu, 0.5 * (q.x * q.x + q.y * q.y), q.x * q.y};
}

/// x = sqrt(a + sqrt(a^2-b^2)), y = sqrt(a - sqrt(a^2-b^2)), for a >= |b|, b >= 0.
inline ProductQuery xy_from_params(const LaplaceParams& p) {
  if (!(p.b >= 0.0)) throw pcf::domain_error("xy_from_params requires b >= 0");
  if (!(p.a >= p.b)) throw pcf::domain_error("xy_from_params requires a >= |b| (real arguments)");
  const double root = std::sqrt((p.a - p.b) * (p.a + p.b));
  const double x = std::sqrt(p.a + root);
  // a - root = b^2 / (a + root) avoids cancellation when b << a.
  const double y = p.a + root > 0.0 ? p.b / x : 0.0;
  return {p.nu, x, y};
}

/// D_{-nu}(x) D_{-nu}(-y) from two independent pcf_d evaluations.
inline double product_reference(const ProductQuery& q) {
  if (!(q.nu > 0.0) || q.nu > max_reference_order)
    throw pcf::domain_error("product_reference requires 0 < nu <= 10");
  if (std::abs(q.x) > max_reference_argument || std::abs(q.y) > max_reference_argument)
    throw pcf::domain_error("product_reference requires |x|, |y| <= 8");
  return specfun::pcf_d(-q.nu, q.x) * specfun::pcf_d(-q.nu, -q.y);
}

namespace detail {

// t^{nu/2-1} (1+t)^{-(nu+1)/2} exp(-gap t + c (sqrt(t(t+1)) - t)), where
// gap = a - c; sqrt(t(t+1)) - t = 1/(1 + sqrt(1 + 1/t)) keeps large t exact.
struct LaplaceIntegrand {
  double nu;
  double gap;
  double c;

  double operator()(double t) const {
    const double excess = 1.0 / (1.0 + std::sqrt(1.0 + 1.0 / t));
    return std::pow(t, 0.5 * nu - 1.0) * std::pow(1.0 + t, -0.5 * (nu + 1.0)) * std::exp(-gap * t + c * excess);
  }
};

inline QuadratureResult integrate(const LaplaceIntegrand& f, double tol) {
  const double p = 0.5 * f.nu - 1.0;
  if (f.gap > 0.0) return quad::integrate_semi_infinite(f, {p, f.gap}, tol);
  return quad::integrate_algebraic_tail(f, p, -1.5, tol);
}

}  // namespace detail

/// D_{-nu}(x) D_{-nu}(-y) through the integral representation.
inline QuadratureResult product_via_integral(const ProductQuery& q, double tol = default_tol,
                                             Domain domain = Domain::strict) {
  if (!(q.nu > 0.0) || !std::isfinite(q.nu)) throw pcf::domain_error("product_via_integral requires nu > 0");
  if (!(q.y > 0.0) || !std::isfinite(q.x)) throw pcf::domain_error("product_via_integral requires y > 0");
  if (domain == Domain::strict ? !(q.x > q.y) : !(q.x >= q.y))
    throw pcf::domain_error(domain == Domain::strict ? "product_via_integral requires x > y"
                                                     : "product_via_integral requires x >= y");
  const double gap = 0.5 * (q.x - q.y) * (q.x - q.y);
  QuadratureResult r = detail::integrate({q.nu, gap, q.x * q.y}, tol);
  const double scale = std::exp(-0.25 * (q.x * q.x + q.y * q.y)) / (2.0 * specfun::gamma(q.nu));
  r.value *= scale;
  r.error_estimate *= scale;
  return r;
}

/// int_0^inf t^{nu/2-1} (1+t)^{-(nu+1)/2} e^{-at} e^{sign b sqrt(t(t+1))} dt.
/// sign = plus needs a > b > 0; sign = minus needs a + b > 0.
inline QuadratureResult laplace_I(const LaplaceParams& p, LaplaceSign sign, double tol = default_tol) {
  if (!(p.nu > 0.0) || !std::isfinite(p.nu)) throw pcf::domain_error("laplace_I requires nu > 0");
  if (!std::isfinite(p.a) || !std::isfinite(p.b)) throw pcf::domain_error("laplace_I requires finite a, b");
  if (sign == LaplaceSign::plus && !(p.a > p.b && p.b > 0.0))
    throw pcf::domain_error("laplace_I(+) requires a > b > 0");
  if (sign == LaplaceSign::minus && !(p.a + p.b > 0.0)) throw pcf::domain_error("laplace_I(-) requires a + b > 0");
  const double c = sign == LaplaceSign::plus ? p.b : -p.b;
  return detail::integrate({p.nu, p.a - c, c}, tol);
}

/// The transform I(nu, a, b) = int_0^inf t^{nu-1} (1+t)^{-nu-1/2} e^{-at} e^{b sqrt(t(t+1))} dt,
/// nu > 0, a > b. Same integral as laplace_I(+) with order 2 nu.
inline QuadratureResult transform_integral(double nu, double a, double b, double tol = default_tol) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw pcf::domain_error("transform_integral requires nu > 0");
  if (!(a > b) || !std::isfinite(a) || !std::isfinite(b)) throw pcf::domain_error("transform_integral requires a > b");
  return detail::integrate({2.0 * nu, a - b, b}, tol);
}

/// Exponent of (1 - u^2) in the u-form of I after t = u^2/(1-u^2).
enum class UFormExponent {
  /// -1/2, what the substitution actually produces.
  substituted,
  /// nu - 3/2, kept only to show it gives a different number.
  printed,
};

/// I(nu, a, b) as 2 int_0^1 u^{2nu-1} (1-u^2)^e exp{(bu - au^2)/(1-u^2)} du.
inline QuadratureResult transform_integral_u(double nu, double a, double b, double tol = default_tol,
                                             UFormExponent which = UFormExponent::substituted) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw pcf::domain_error("transform_integral_u requires nu > 0");
  if (!(a > b) || !std::isfinite(a) || !std::isfinite(b))
    throw pcf::domain_error("transform_integral_u requires a > b");
  const double e = which == UFormExponent::substituted ? -0.5 : nu - 1.5;
  auto f = [=](double u, double, double one_minus_u) {
    const double w = one_minus_u * (1.0 + u);  // 1 - u^2 without cancellation
    const double arg = (b * u - a * u * u) / w;
    if (arg < -745.0) return 0.0;
    return std::pow(u, 2.0 * nu - 1.0) * std::pow(w, e) * std::exp(arg);
  };
  QuadratureResult r = quad::integrate_finite(f, 0.0, 1.0, tol);
  r.value *= 2.0;
  r.error_estimate *= 2.0;
  return r;
}

/// 2 e^{a/2} Gamma(nu) D_{-nu}(x) D_{-nu}(-+y) with (x, y) from xy_from_params,
/// the closed form of laplace_I. Requires a >= |b| so that x, y are real.
inline double laplace_I_closed(const LaplaceParams& p, LaplaceSign sign) {
  if (!(p.nu > 0.0)) throw pcf::domain_error("laplace_I_closed requires nu > 0");
  const double c = sign == LaplaceSign::plus ? p.b : -p.b;
  const ProductQuery q = xy_from_params({p.nu, p.a, std::abs(c)});
  // c >= 0: D(x) D(-y); c < 0: D(x) D(y).
  const double second = c >= 0.0 ? -q.y : q.y;
  return 2.0 * std::exp(0.5 * p.a) * specfun::gamma(p.nu) * specfun::pcf_d(-p.nu, q.x) *
         specfun::pcf_d(-p.nu, second);
}

}  // namespace pcf::product
