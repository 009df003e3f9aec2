#pragma once

// Mehler kernel and the bilinear Hermite series built on it:
//
//   exp[(2XYu - (X^2+Y^2)u^2)/(1-u^2)] = sqrt(1-u^2) sum_n r_n u^n,
//   r_n = H_n(X) H_n(Y) / (2^n n!) = h_n(X) h_n(Y),
//
// and the resolvent sums F(s) = sum_n r_n / (n + s) that appear in the
// Laplace-transform series, the oscillator Green function and the sum rule.
//
// Terms of F(s) decay only like n^{-3/2} with a slow cos(sqrt(2n)(X-Y))
// oscillation, so by default F is evaluated by Abel regularization:
//
//   F(s) = sum_n r_n u0^{n+s}/(n+s) + int_{u0}^1 u^{s-1} G(u) du,
//   G(u) = sum_n r_n u^n = Mehler(u)/sqrt(1-u^2),
//
// where the remainder integral is bounded analytically through
// |Mehler(u)| <= e^{max(XY,0)} exp(-u^2 (X-Y)^2 / (1-u^2)) and the series
// truncation through Cramer's inequality |h_n(x)| <= 1.086435 e^{x^2/2}.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "pcf/errors.hpp"
#include "pcf/specfun.hpp"

namespace pcf::mehler {

using specfun::SeriesResult;

struct MehlerPoint {
  double X = 0.0;
  double Y = 0.0;
  double u = 0.0;
};

struct SumRuleQuery {
  double nu = 1.0;
  double x = 0.0;
  double y = 0.0;
};

enum class SummationMethod {
  /// Abel-regularized sum with an analytic remainder bound (default).
  abel,
  /// Plain partial sums, stopped by the fitted C n^{-3/2} envelope.
  direct,
};

inline constexpr double cramer_constant = 1.086435;
inline constexpr std::size_t kernel_max_terms = 5000;
inline constexpr std::size_t resolvent_max_terms = 200000;
// h_n(x) ~ e^{x^2/2} stays finite in double only for moderate |x|.
inline constexpr double max_hermite_argument = 25.0;

/// Steps h_n(x) = H_n(x)/sqrt(2^n n!) forward in n.
class NormalizedHermite {
 public:
  explicit NormalizedHermite(double x) : x_(x) {}

  double value() const { return cur_; }
  std::size_t index() const { return n_; }

  void advance() {
    const double n = static_cast<double>(n_);
    const double next = x_ * std::sqrt(2.0 / (n + 1.0)) * cur_ - std::sqrt(n / (n + 1.0)) * prev_;
    prev_ = cur_;
    cur_ = next;
    ++n_;
  }

 private:
  double x_;
  std::size_t n_ = 0;
  double prev_ = 0.0;
  double cur_ = 1.0;
};

namespace detail {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void check_arguments(double X, double Y) {
  if (!std::isfinite(X) || !std::isfinite(Y) || std::abs(X) > max_hermite_argument ||
      std::abs(Y) > max_hermite_argument)
    throw pcf::domain_error("Hermite series arguments must satisfy |X|, |Y| <= 25");
}

inline void check_shift(double shift) {
  if (!std::isfinite(shift)) throw pcf::domain_error("series shift must be finite");
  if (shift <= 0.0 && std::abs(shift - std::round(shift)) < 1e-12)
    throw pcf::domain_error("series shift hits a pole n + s = 0");
}

// ln of the Cramer bound on |r_n| = |h_n(X) h_n(Y)|.
inline double log_term_bound(double X, double Y) {
  return 2.0 * std::log(cramer_constant) + 0.5 * (X * X + Y * Y);
}

inline double remainder_bound(double X, double Y, double shift, double u0) {
  const double gap2 = (X - Y) * (X - Y);
  const double power = std::max(1.0, std::pow(u0, shift - 1.0));
  return power * std::exp(std::max(X * Y, 0.0) - u0 * u0 * gap2 / (1.0 - u0 * u0)) * std::acos(u0);
}

// Smallest N such that sum_{n>N} |r_n| u0^{n+s}/(n+s) <= target.
inline double truncation_index(double X, double Y, double shift, double u0, double target) {
  const double log_u0 = std::log(u0);
  const double needed = std::log(target) - log_term_bound(X, Y) + std::log(1.0 - u0);
  const double n = needed / log_u0 - 1.0 - shift;
  return std::max({n, std::ceil(-shift) + 1.0, 1.0});
}

inline double truncation_bound(double X, double Y, double shift, double u0, std::size_t last) {
  const double m = static_cast<double>(last) + 1.0 + shift;
  return std::exp(log_term_bound(X, Y) + m * std::log(u0) - std::log(m) - std::log(1.0 - u0));
}

// sum_{n=0}^{last} r_n u0^{n+s} / (n+s)
inline double abel_partial(double X, double Y, double shift, double u0, std::size_t last) {
  NormalizedHermite hx(X);
  NormalizedHermite hy(Y);
  CompensatedSum sum;
  double weight = std::pow(u0, shift);
  for (std::size_t n = 0; n <= last; ++n) {
    sum.add(hx.value() * hy.value() * weight / (static_cast<double>(n) + shift));
    hx.advance();
    hy.advance();
    weight *= u0;
  }
  return sum.value();
}

inline SeriesResult abel_sum(double X, double Y, double shift, double tol, std::size_t max_terms) {
  const double gap2 = (X - Y) * (X - Y);
  if (!(gap2 > 0.0))
    throw pcf::convergence_error("resolvent series at X == Y cannot be Abel-regularized", 0.0,
                                 std::numeric_limits<double>::infinity(), 0);

  double target = tol;  // absolute; refined once the magnitude is known
  SeriesResult best;
  for (int pass = 0; pass < 4; ++pass) {
    // Remainder: choose u0 so that u0^2 gap^2/(1-u0^2) >= k.
    double k = std::max(X * Y, 0.0) + std::log(std::numbers::pi / 2.0) + std::log(2.0 / target);
    double u0 = 0.5;
    for (int it = 0; it < 20; ++it) {
      k = std::max(k, 1.0);
      u0 = std::max(0.5, std::sqrt(k / (gap2 + k)));
      const double r = remainder_bound(X, Y, shift, u0);
      if (r <= 0.5 * target) break;
      k += std::log(r / (0.5 * target)) + 0.1;
    }
    const double remainder = remainder_bound(X, Y, shift, u0);

    const double n_needed = truncation_index(X, Y, shift, u0, 0.5 * target);
    const bool capped = !(n_needed < static_cast<double>(max_terms));
    const auto last = capped ? max_terms - 1 : static_cast<std::size_t>(n_needed);
    const double value = abel_partial(X, Y, shift, u0, last);
    const double tail = remainder + truncation_bound(X, Y, shift, u0, last);
    best = {value, last + 1, tail};

    if (capped) throw pcf::convergence_error("resolvent series exceeded its term cap", value, tail, last + 1);
    if (tail <= tol * std::abs(value) || value == 0.0) return best;
    target = 0.5 * tol * std::abs(value);
  }
  throw pcf::convergence_error("resolvent series did not reach tolerance", best.value, best.tail_bound,
                               best.terms_used);
}

// Plain partial sums; stops when 2 C / sqrt(n), with C the largest
// |term_k| k^{3/2} among the last 20 terms, drops below tol |S|.
inline SeriesResult direct_sum(double X, double Y, double shift, double tol, std::size_t max_terms) {
  NormalizedHermite hx(X);
  NormalizedHermite hy(Y);
  CompensatedSum sum;
  std::array<double, 20> window{};
  double tail = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < max_terms; ++n) {
    const double nd = static_cast<double>(n);
    const double term = hx.value() * hy.value() / (nd + shift);
    sum.add(term);
    window[n % window.size()] = std::abs(term) * std::pow(std::max(nd, 1.0), 1.5);
    hx.advance();
    hy.advance();
    if (n >= 2 * window.size()) {
      const double c = *std::max_element(window.begin(), window.end());
      tail = 2.0 * c / std::sqrt(nd);
      if (tail <= tol * std::abs(sum.value())) return {sum.value(), n + 1, tail};
    }
  }
  throw pcf::convergence_error("direct resolvent summation hit its term cap", sum.value(), tail, max_terms);
}

}  // namespace detail

/// exp[(2XYu - (X^2+Y^2)u^2)/(1-u^2)], |u| < 1.
inline double mehler_kernel_closed(const MehlerPoint& p) {
  if (!(std::abs(p.u) < 1.0)) throw pcf::domain_error("Mehler kernel requires |u| < 1");
  const double num = 2.0 * p.X * p.Y * p.u - (p.X * p.X + p.Y * p.Y) * p.u * p.u;
  return std::exp(num / ((1.0 - p.u) * (1.0 + p.u)));
}

/// sqrt(1-u^2) sum_n h_n(X) h_n(Y) u^n, truncated once the Cramer bound on
/// the remaining terms is below tol.
inline SeriesResult mehler_kernel_series(const MehlerPoint& p, double tol,
                                         std::size_t max_terms = kernel_max_terms) {
  if (!(std::abs(p.u) <= 0.95)) throw pcf::domain_error("Mehler series requires |u| <= 0.95");
  if (!(tol > 0.0)) throw pcf::domain_error("tolerance must be positive");
  detail::check_arguments(p.X, p.Y);

  const double root = std::sqrt((1.0 - p.u) * (1.0 + p.u));
  const double au = std::abs(p.u);
  const double log_prefix = detail::log_term_bound(p.X, p.Y) + std::log(root) - std::log(1.0 - au);
  const double log_au = au > 0.0 ? std::log(au) : -std::numeric_limits<double>::infinity();

  NormalizedHermite hx(p.X);
  NormalizedHermite hy(p.Y);
  detail::CompensatedSum sum;
  double power = 1.0;
  for (std::size_t n = 0; n < max_terms; ++n) {
    sum.add(hx.value() * hy.value() * power);
    hx.advance();
    hy.advance();
    power *= p.u;
    const double tail = std::exp(log_prefix + static_cast<double>(n + 1) * log_au);
    if (tail < tol) return {root * sum.value(), n + 1, tail};
  }
  throw pcf::convergence_error("Mehler series did not converge", root * sum.value(),
                               std::exp(log_prefix + static_cast<double>(max_terms) * log_au), max_terms);
}

/// F(s) = sum_{n>=0} h_n(X) h_n(Y) / (n + s), relative tolerance tol.
inline SeriesResult resolvent_sum(double X, double Y, double shift, double tol,
                                  SummationMethod method = SummationMethod::abel,
                                  std::size_t max_terms = resolvent_max_terms) {
  detail::check_arguments(X, Y);
  detail::check_shift(shift);
  if (!(tol > 0.0)) throw pcf::domain_error("tolerance must be positive");
  return method == SummationMethod::abel ? detail::abel_sum(X, Y, shift, tol, max_terms)
                                         : detail::direct_sum(X, Y, shift, tol, max_terms);
}

/// sum_{n<n_terms} h_n(X) h_n(Y) / (n + s), no truncation control.
inline double resolvent_partial_sum(double X, double Y, double shift, std::size_t n_terms) {
  detail::check_arguments(X, Y);
  detail::check_shift(shift);
  NormalizedHermite hx(X);
  NormalizedHermite hy(Y);
  detail::CompensatedSum sum;
  for (std::size_t n = 0; n < n_terms; ++n) {
    sum.add(hx.value() * hy.value() / (static_cast<double>(n) + shift));
    hx.advance();
    hy.advance();
  }
  return sum.value();
}

/// I = 2 sum_n H_n(X) H_n(Y) / (2^n n! (2 nu + n)), the Hermite series for
/// int_0^inf t^(nu-1) (1+t)^(-nu-1/2) e^{-at + b sqrt(t(t+1))} dt with
/// a = X^2 + Y^2, b = 2XY.
inline SeriesResult series_for_I(double nu, double X, double Y, double tol,
                                 SummationMethod method = SummationMethod::abel) {
  if (!(nu > 0.0)) throw pcf::domain_error("series_for_I requires nu > 0");
  SeriesResult r = resolvent_sum(X, Y, 2.0 * nu, tol, method);
  r.value *= 2.0;
  r.tail_bound *= 2.0;
  return r;
}

/// First n_terms terms of series_for_I.
inline double series_for_I_partial(double nu, double X, double Y, std::size_t n_terms) {
  if (!(nu > 0.0)) throw pcf::domain_error("series_for_I requires nu > 0");
  return 2.0 * resolvent_partial_sum(X, Y, 2.0 * nu, n_terms);
}

namespace detail {
inline void check_sum_rule(const SumRuleQuery& q) {
  if (!(q.nu > 0.0)) throw pcf::domain_error("sum rule requires nu > 0");
  if (!(q.x > q.y)) throw pcf::domain_error("sum rule requires x > y");
}
}  // namespace detail

/// sum_n D_n(x) D_n(y) / (n! (n + nu)), with D_n(x) D_n(y)/n! written as
/// e^{-(x^2+y^2)/4} h_n(x/sqrt2) h_n(y/sqrt2).
inline SeriesResult sum_rule_lhs(const SumRuleQuery& q, double tol, SummationMethod method = SummationMethod::abel) {
  detail::check_sum_rule(q);
  const double scale = std::exp(-0.25 * (q.x * q.x + q.y * q.y));
  SeriesResult r =
      resolvent_sum(q.x / std::numbers::sqrt2, q.y / std::numbers::sqrt2, q.nu, tol, method);
  r.value *= scale;
  r.tail_bound *= scale;
  return r;
}

/// First n_terms terms of the sum-rule series.
inline double sum_rule_partial(const SumRuleQuery& q, std::size_t n_terms) {
  detail::check_sum_rule(q);
  return std::exp(-0.25 * (q.x * q.x + q.y * q.y)) *
         resolvent_partial_sum(q.x / std::numbers::sqrt2, q.y / std::numbers::sqrt2, q.nu, n_terms);
}

/// Gamma(nu) D_{-nu}(x) D_{-nu}(-y).
inline double sum_rule_rhs(const SumRuleQuery& q) {
  detail::check_sum_rule(q);
  return specfun::gamma(q.nu) * specfun::pcf_d(-q.nu, q.x) * specfun::pcf_d(-q.nu, -q.y);
}

struct DecayFit {
  /// Fitted p in |term_n| ~ C n^{-p}.
  double exponent = 0.0;
  /// max |term_n| n^{3/2} over the fitted range.
  double max_scaled = 0.0;
  std::size_t blocks = 0;
};

/// Least-squares fit of log(block max |term_n|) against log n over
/// geometric blocks of [n_lo, n_hi), terms h_n(X) h_n(Y)/(n + nu) of the sum rule.
inline DecayFit fit_term_decay(const SumRuleQuery& q, std::size_t n_lo = 100, std::size_t n_hi = 100000,
                               std::size_t n_blocks = 24) {
  detail::check_sum_rule(q);
  if (!(n_lo >= 1 && n_hi > 2 * n_lo)) throw pcf::domain_error("fit_term_decay needs 1 <= n_lo < n_hi / 2");
  NormalizedHermite hx(q.x / std::numbers::sqrt2);
  NormalizedHermite hy(q.y / std::numbers::sqrt2);
  while (hx.index() < n_lo) {
    hx.advance();
    hy.advance();
  }

  const double ratio = std::pow(static_cast<double>(n_hi) / static_cast<double>(n_lo), 1.0 / n_blocks);
  std::vector<double> log_n;
  std::vector<double> log_max;
  DecayFit fit;
  double edge = static_cast<double>(n_lo);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    edge *= ratio;
    double best = 0.0;
    std::size_t at = hx.index();
    while (static_cast<double>(hx.index()) < edge) {
      const double n = static_cast<double>(hx.index());
      const double term = std::abs(hx.value() * hy.value() / (n + q.nu));
      fit.max_scaled = std::max(fit.max_scaled, term * n * std::sqrt(n));
      if (term > best) {
        best = term;
        at = hx.index();
      }
      hx.advance();
      hy.advance();
    }
    if (best > 0.0) {
      log_n.push_back(std::log(static_cast<double>(at)));
      log_max.push_back(std::log(best));
    }
  }

  const double m = static_cast<double>(log_n.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sx += log_n[i];
    sy += log_max[i];
    sxx += log_n[i] * log_n[i];
    sxy += log_n[i] * log_max[i];
  }
  fit.exponent = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  fit.blocks = log_n.size();
  return fit;
}

}  // namespace pcf::mehler
