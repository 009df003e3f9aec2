#pragma once

// Adaptive tanh-sinh quadrature for finite intervals, truncated semi-infinite
// ranges and algebraically decaying tails.
//
// Integrands are callables f(x) or, when endpoint singularities need exact
// distances, f(x, x - lo, hi - x). Panels are refined by halving the
// tanh-sinh step; a panel is accepted when two successive levels agree to its
// share of the global tolerance, and split in two when it reaches max_level
// without doing so. All reductions run in a fixed order, so results are
// bit-reproducible.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "pcf/errors.hpp"

namespace pcf::quad {

struct QuadratureResult {
  double value = 0.0;
  /// Absolute; sum over panels of the last level-to-level change.
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Shape of an integrand on (0, inf): f(t) ~ t^endpoint_exponent near 0 and
/// f(t) ~ exp(-decay_rate t) (up to powers of t) as t -> inf.
struct IntegrandSpec {
  double endpoint_exponent = 0.0;
  double decay_rate = 1.0;
};

struct Options {
  int min_level = 3;
  int max_level = 8;
  int max_bisections = 10;
  double abs_floor = 1e-300;
};

inline constexpr double min_tolerance = 1e-14;
inline constexpr double max_tolerance = 1e-2;

namespace detail {

inline constexpr double half_pi = std::numbers::pi / 2.0;
// Nodes beyond |s| = 5 sit within ~1e-100 (relative) of an endpoint.
inline constexpr double s_max = 5.0;
// Below this t the origin-substituted integrand is replaced by its limit.
inline constexpr double t_floor = 1e-280;

template <class F>
concept EndpointAware = std::is_invocable_r_v<double, const F&, double, double, double>;

template <class F>
double call(const F& f, double x, double dlo, double dhi) {
  if constexpr (EndpointAware<F>)
    return f(x, dlo, dhi);
  else
    return f(x);
}

inline void check_tolerance(double tol) {
  if (!(tol >= min_tolerance && tol <= max_tolerance))
    throw pcf::domain_error("quadrature tolerance must lie in [1e-14, 1e-2]");
}

// One tanh-sinh panel. With power != 1 the panel runs in sigma on
// [lo, hi] and the integrand is evaluated at t = sigma^power with Jacobian
// power * sigma^(power - 1); this absorbs t^p at the origin when
// power = 1/(p + 1).
struct Panel {
  double lo = 0.0;
  double hi = 0.0;
  double t_hi = 0.0;
  double power = 1.0;
  int depth = 0;
  int level = -1;
  double raw = 0.0;
  double estimate = 0.0;
  double difference = std::numeric_limits<double>::infinity();
  bool limit_cached = false;
  double limit_value = 0.0;
};

template <class F>
double panel_value(const F& f, Panel& p, double x, double dlo, double dhi, std::size_t& evals) {
  if (p.power == 1.0) {
    ++evals;
    return call(f, x, dlo, dhi);
  }
  const double t = std::pow(x, p.power);
  if (!(t >= t_floor)) {
    // f(t) * power * sigma^(power-1) -> power * t^-p f(t) as t -> 0.
    if (!p.limit_cached) {
      const double exponent = 1.0 / p.power - 1.0;
      ++evals;
      p.limit_value = p.power * call(f, t_floor, t_floor, p.t_hi - t_floor) *
                      std::pow(t_floor, -exponent);
      p.limit_cached = true;
    }
    return p.limit_value;
  }
  ++evals;
  return call(f, t, t, p.t_hi - t) * p.power * std::pow(x, p.power - 1.0);
}

template <class F>
void refine(const F& f, Panel& p, std::size_t& evals) {
  const int level = p.level + 1;
  const double h = std::ldexp(1.0, -level);
  const double width = p.hi - p.lo;
  const double c = 0.5 * width;
  double added = 0.0;

  auto checked = [](double v, double x) {
    if (!std::isfinite(v))
      throw pcf::evaluation_error("integrand is not finite at x = " + std::to_string(x), x);
    return v;
  };

  auto pair_at = [&](double s) {
    const double u = half_pi * std::sinh(s);
    const double e = std::exp(-2.0 * u);
    const double dist = c * 2.0 * e / (1.0 + e);
    const double w = c * half_pi * std::cosh(s) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    if (dist == 0.0 || w == 0.0) return;
    const double xl = p.lo + dist;
    const double xr = p.hi - dist;
    double sum = 0.0;
    if (EndpointAware<F> || p.power != 1.0 || xl != p.lo)
      sum += checked(panel_value(f, p, xl, dist, width - dist, evals), xl);
    if (EndpointAware<F> || xr != p.hi)
      sum += checked(panel_value(f, p, xr, width - dist, dist, evals), xr);
    added += w * sum;
  };

  if (level == 0) {
    const double mid = p.lo + c;
    added += c * half_pi * checked(panel_value(f, p, mid, c, c, evals), mid);
    for (int k = 1; k <= static_cast<int>(s_max); ++k) pair_at(static_cast<double>(k));
  } else {
    for (long j = 1; static_cast<double>(j) * h <= s_max; j += 2) pair_at(static_cast<double>(j) * h);
  }

  p.raw += added;
  const double estimate = h * p.raw;
  p.difference = level == 0 ? std::numeric_limits<double>::infinity() : std::abs(estimate - p.estimate);
  p.estimate = estimate;
  p.level = level;
}

template <class F>
void warm_up(const F& f, Panel& p, const Options& opt, std::size_t& evals) {
  while (p.level < opt.min_level) refine(f, p, evals);
}

template <class F>
QuadratureResult run(const F& f, std::vector<Panel> panels, double tol, const Options& opt) {
  std::size_t evals = 0;
  for (auto& p : panels) warm_up(f, p, opt, evals);

  for (;;) {
    double total = 0.0;
    double spread = 0.0;
    for (const auto& p : panels) {
      total += p.estimate;
      spread += p.difference;
    }
    const double budget = std::max(tol * std::abs(total), opt.abs_floor);
    const double share = 0.5 * budget / static_cast<double>(panels.size());

    bool all_done = true;
    std::vector<Panel> next;
    next.reserve(panels.size() + 2);
    for (auto& p : panels) {
      if (p.difference <= share) {
        next.push_back(p);
        continue;
      }
      all_done = false;
      if (p.level < opt.max_level) {
        refine(f, p, evals);
        next.push_back(p);
      } else if (p.depth < opt.max_bisections) {
        const double mid = 0.5 * (p.lo + p.hi);
        Panel left = p;
        Panel right = p;
        for (Panel* child : {&left, &right}) {
          child->depth = p.depth + 1;
          child->level = -1;
          child->raw = 0.0;
          child->estimate = 0.0;
          child->difference = std::numeric_limits<double>::infinity();
          child->limit_cached = false;
        }
        left.hi = mid;
        right.lo = mid;
        if (p.power != 1.0) left.t_hi = right.t_hi = p.t_hi;
        warm_up(f, left, opt, evals);
        warm_up(f, right, opt, evals);
        next.push_back(left);
        next.push_back(right);
      } else {
        throw pcf::convergence_error("tanh-sinh refinement did not converge", total, spread, evals);
      }
    }
    panels = std::move(next);
    if (all_done) break;
  }

  QuadratureResult r;
  for (const auto& p : panels) {
    r.value += p.estimate;
    r.error_estimate += p.difference;
  }
  r.evaluations = evals;
  return r;
}

inline Panel origin_panel(double t1, double endpoint_exponent) {
  Panel p;
  p.t_hi = t1;
  if (endpoint_exponent < 0.0) {
    p.power = 1.0 / (endpoint_exponent + 1.0);
    p.hi = std::pow(t1, 1.0 / p.power);
  } else {
    p.hi = t1;
  }
  return p;
}

}  // namespace detail

/// Integral over [lo, hi]. Power-law endpoint singularities are resolved by
/// the tanh-sinh clustering; pass an endpoint-aware integrand f(x, x-lo, hi-x)
/// when the singular factor must be formed from the exact distance.
template <class F>
QuadratureResult integrate_finite(const F& f, double lo, double hi, double tol, const Options& opt = {}) {
  detail::check_tolerance(tol);
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi))
    throw pcf::domain_error("integrate_finite requires finite lo < hi");
  detail::Panel p;
  p.lo = lo;
  p.hi = hi;
  p.t_hi = hi;
  return detail::run(f, {p}, tol, opt);
}

/// Integral over [0, cutoff] of an integrand behaving like t^endpoint_exponent
/// at the origin. [0, min(1, cutoff)] is integrated in the substituted
/// variable sigma = t^(p+1) when p < 0; the rest is split into doubling
/// panels [1, 2], [2, 4], ...
template <class F>
QuadratureResult integrate_to_cutoff(const F& f, double endpoint_exponent, double cutoff, double tol,
                                     const Options& opt = {}) {
  detail::check_tolerance(tol);
  if (!(endpoint_exponent > -1.0) || !std::isfinite(endpoint_exponent))
    throw pcf::domain_error("endpoint exponent must exceed -1");
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw pcf::domain_error("cutoff must be positive and finite");

  std::vector<detail::Panel> panels;
  panels.push_back(detail::origin_panel(std::min(1.0, cutoff), endpoint_exponent));
  for (double lo = 1.0; lo < cutoff; lo *= 2.0) {
    detail::Panel p;
    p.lo = lo;
    p.hi = std::min(2.0 * lo, cutoff);
    p.t_hi = p.hi;
    panels.push_back(p);
  }
  return detail::run(f, std::move(panels), tol, opt);
}

/// Truncation point T of a semi-infinite integral: the smallest T with
/// decay_rate * T - max(p, 0) * ln T >= ln(1/tol) + 40.
inline double tail_cutoff(const IntegrandSpec& spec, double tol) {
  const double target = std::log(1.0 / tol) + 40.0;
  const double growth = std::max(spec.endpoint_exponent, 0.0);
  double t = target / spec.decay_rate;
  for (int i = 0; i < 50; ++i) t = (target + growth * std::log(std::max(t, 1.0))) / spec.decay_rate;
  return t;
}

/// Integral over (0, inf) of an integrand with the given origin exponent and
/// exponential decay rate.
template <class F>
QuadratureResult integrate_semi_infinite(const F& f, const IntegrandSpec& spec, double tol,
                                         const Options& opt = {}) {
  detail::check_tolerance(tol);
  if (!(spec.endpoint_exponent > -1.0) || !std::isfinite(spec.endpoint_exponent))
    throw pcf::domain_error("IntegrandSpec.endpoint_exponent must exceed -1");
  if (!(spec.decay_rate > 0.0) || !std::isfinite(spec.decay_rate))
    throw pcf::domain_error("IntegrandSpec.decay_rate must be positive");

  double cutoff = tail_cutoff(spec, tol);
  QuadratureResult r = integrate_to_cutoff(f, spec.endpoint_exponent, cutoff, tol, opt);
  // The envelope assumes an O(1) amplitude; extend the range if the integrand
  // is still significant at the cut.
  for (int grow = 0; grow < 6; ++grow) {
    const double at_cut = std::abs(detail::call(f, cutoff, cutoff, std::numeric_limits<double>::infinity()));
    if (!(at_cut / spec.decay_rate > 1e-3 * tol * std::abs(r.value))) break;
    cutoff *= 2.0;
    const std::size_t spent = r.evaluations + 1;
    r = integrate_to_cutoff(f, spec.endpoint_exponent, cutoff, tol, opt);
    r.evaluations += spent;
  }
  return r;
}

/// Integral over (0, inf) of an integrand with f(t) ~ t^endpoint_exponent at
/// the origin and f(t) ~ t^tail_exponent (tail_exponent < -1) at infinity.
/// [1, inf) is mapped to (0, 1] by t = 1/w.
template <class F>
QuadratureResult integrate_algebraic_tail(const F& f, double endpoint_exponent, double tail_exponent, double tol,
                                          const Options& opt = {}) {
  if (!(tail_exponent < -1.0)) throw pcf::domain_error("algebraic tail must decay faster than 1/t");
  const QuadratureResult head = integrate_to_cutoff(f, endpoint_exponent, 1.0, tol, opt);
  auto mapped = [&f](double w) {
    const double t = 1.0 / w;
    // f(t) t^2 in two steps; w * w underflows long before f(t) t^2 is small.
    return detail::call(f, t, t, std::numeric_limits<double>::infinity()) * t * t;
  };
  const QuadratureResult tail = integrate_to_cutoff(mapped, -tail_exponent - 2.0, 1.0, tol, opt);
  return {head.value + tail.value, head.error_estimate + tail.error_estimate, head.evaluations + tail.evaluations};
}

}  // namespace pcf::quad
