#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "pcf/product.hpp"
#include "pcf/mehler.hpp"
#include "support.hpp"

using namespace pcf::mehler;
using testing_support::for_all;
using testing_support::Gen;
using testing_support::rel_diff;

// mpmath: Gamma(nu) D_{-nu}(x) D_{-nu}(-y), and the transform at nu = 2, a = 2.5, b = 2.
constexpr double sum_rule_1_2_1 = 0.4197646649478962795991998;
constexpr double sum_rule_05_3_05 = 0.1571288297704366757722576;
constexpr double sum_rule_2_25_m05 = 0.0126489528812377153049728;
constexpr double transform_2_25_2 = 0.5682892978753672600348515;

TEST(Kernel, ClosedExamples) {
  EXPECT_EQ(mehler_kernel_closed({1.3, -0.4, 0.0}), 1.0);
  EXPECT_LE(rel_diff(mehler_kernel_closed({1.0, 1.0, 0.5}), std::exp(2.0 / 3.0)), 1e-15);
  Gen g(43);
  for (int i = 0; i < 50; ++i) {
    const double X = g.uniform(-3, 3), Y = g.uniform(-3, 3), u = g.uniform(-0.99, 0.99);
    EXPECT_EQ(mehler_kernel_closed({X, Y, u}), mehler_kernel_closed({Y, X, u}));
  }
  EXPECT_THROW(mehler_kernel_closed({0.0, 0.0, 1.0}), pcf::domain_error);
  EXPECT_THROW(mehler_kernel_closed({0.0, 0.0, -1.0}), pcf::domain_error);
}

TEST(Kernel, SeriesExamples) {
  const auto a = mehler_kernel_series({1.0, 0.5, 0.3}, 1e-12);
  EXPECT_NEAR(a.value, mehler_kernel_closed({1.0, 0.5, 0.3}), 1e-12 * (1.0 + std::abs(a.value)));
  const auto b = mehler_kernel_series({0.7, -2.0, 0.0}, 1e-12);
  EXPECT_EQ(b.value, 1.0);
  EXPECT_EQ(b.terms_used, 1u);
  const auto c = mehler_kernel_series({2.0, 1.0, 0.9}, 1e-10);
  EXPECT_LE(rel_diff(c.value, mehler_kernel_closed({2.0, 1.0, 0.9})), 1e-9);
  EXPECT_THROW(mehler_kernel_series({0.0, 0.0, 0.96}, 1e-10), pcf::domain_error);
}

TEST(Kernel, IdentityOnRandomGrid) {
  const auto failure = for_all(
      47, 200, [](Gen& g) { return MehlerPoint{g.uniform(-3, 3), g.uniform(-3, 3), g.uniform(-0.9, 0.9)}; },
      [](const MehlerPoint& p) -> std::string {
        const auto s = mehler_kernel_series(p, 1e-12);
        const double c = mehler_kernel_closed(p);
        if (std::abs(s.value - c) <= 1e-9 * (1.0 + std::abs(c)) && s.tail_bound >= 0.0) return "";
        std::ostringstream os;
        os << "X=" << p.X << " Y=" << p.Y << " u=" << p.u << " series=" << s.value << " closed=" << c;
        return os.str();
      });
  EXPECT_EQ(failure, "");
}

TEST(SeriesForI, BruteForcePartialSumsAtOrigin) {
  // H_n(0)^2 / (2^n n!) = C(n, n/2) / 2^n for even n, 0 for odd n.
  for (double nu : {0.25, 1.0, 3.5}) {
    double brute = 0.0;
    double central = 1.0;  // C(n, n/2) / 2^n
    for (int n = 0; n < 200; ++n) {
      if (n % 2 == 0) {
        if (n > 0) central *= static_cast<double>(n - 1) / static_cast<double>(n);
        brute += 2.0 * central / (2.0 * nu + n);
      }
      if (n == 0 || n == 1 || n == 57 || n == 199) {
        EXPECT_LE(rel_diff(series_for_I_partial(nu, 0.0, 0.0, n + 1), brute), 1e-13) << nu << " " << n;
      }
    }
  }
}

TEST(SeriesForI, FirstTerm) {
  for (double nu : {0.3, 2.0}) EXPECT_DOUBLE_EQ(series_for_I_partial(nu, 0.4, -1.1, 1), 1.0 / nu);
}

TEST(SeriesForI, MatchesTransform) {
  const auto s = series_for_I(2.0, std::sqrt(2.0), std::sqrt(0.5), 1e-11);
  EXPECT_LE(rel_diff(s.value, transform_2_25_2), 1e-9);
  EXPECT_GE(s.terms_used, 1u);
}

TEST(SeriesForI, FrameConsistency) {
  // X^2 + Y^2 = a, 2XY = b.
  const auto failure = for_all(
      53, 30,
      [](Gen& g) { return std::array<double, 3>{g.uniform(0.3, 4.0), g.uniform(0.2, 2.5), g.uniform(-1.5, 1.5)}; },
      [](std::array<double, 3> c) -> std::string {
        const double nu = c[0], X = c[1], Y = X - 0.2 - std::abs(c[2]);
        const double a = X * X + Y * Y, b = 2.0 * X * Y;
        const double series = series_for_I(nu, X, Y, 1e-11).value;
        const double quad = pcf::product::transform_integral(nu, a, b, 1e-11).value;
        if (rel_diff(series, quad) <= 1e-8) return "";
        std::ostringstream os;
        os << "nu=" << nu << " X=" << X << " Y=" << Y << " series=" << series << " quad=" << quad;
        return os.str();
      });
  EXPECT_EQ(failure, "");
}

TEST(SumRule, Examples) {
  const auto a = sum_rule_lhs({1.0, 2.0, 1.0}, 1e-10);
  EXPECT_LE(rel_diff(a.value, sum_rule_1_2_1), 5e-7);
  EXPECT_LE(rel_diff(a.value, sum_rule_rhs({1.0, 2.0, 1.0})), 5e-7);
  const auto b = sum_rule_lhs({0.5, 3.0, 0.5}, 1e-10);
  EXPECT_LE(rel_diff(b.value, sum_rule_05_3_05), 5e-7);
  const auto c = sum_rule_lhs({2.0, 2.5, -0.5}, 1e-10);
  EXPECT_LE(rel_diff(c.value, sum_rule_2_25_m05), 5e-7);
  EXPECT_GT(a.terms_used, 0u);
}

TEST(SumRule, FirstTerm) {
  const SumRuleQuery q{0.7, 2.0, 1.0};
  EXPECT_LE(rel_diff(sum_rule_partial(q, 1), std::exp(-0.25 * 5.0) / 0.7), 1e-15);
}

TEST(SumRule, Grid) {
  for (double nu : {0.5, 1.0, 2.0})
    for (auto [x, y] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.5}, std::pair{2.5, -0.5}}) {
      const SumRuleQuery q{nu, x, y};
      EXPECT_LE(rel_diff(sum_rule_lhs(q, 1e-10).value, sum_rule_rhs(q)), 5e-7) << nu << " " << x << " " << y;
    }
}

TEST(SumRule, DirectSummationAtLooseTolerance) {
  const SumRuleQuery q{1.0, 2.0, 1.0};
  const auto d = sum_rule_lhs(q, 1e-3, SummationMethod::direct);
  EXPECT_LE(rel_diff(d.value, sum_rule_rhs(q)), 1e-3);
  EXPECT_GT(d.tail_bound, 0.0);
}

TEST(SumRule, TermDecayEnvelope) {
  for (auto [x, y] : {std::pair{2.0, 1.0}, std::pair{3.0, 0.5}, std::pair{2.5, -0.5}}) {
    const DecayFit f = fit_term_decay({1.0, x, y});
    EXPECT_GE(f.exponent, 1.3) << x << " " << y;
    EXPECT_LE(f.exponent, 1.7) << x << " " << y;
    EXPECT_TRUE(std::isfinite(f.max_scaled));
  }
}

TEST(SumRule, DomainErrors) {
  EXPECT_THROW(sum_rule_lhs({1.0, 1.0, 1.0}, 1e-8), pcf::domain_error);
  EXPECT_THROW(sum_rule_lhs({0.0, 2.0, 1.0}, 1e-8), pcf::domain_error);
  EXPECT_THROW(resolvent_sum(30.0, 0.0, 1.0, 1e-8), pcf::domain_error);
  EXPECT_THROW(resolvent_sum(1.0, 0.0, -2.0, 1e-8), pcf::domain_error);
}
