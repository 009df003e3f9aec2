#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pcf/product.hpp"
#include "pcf/green.hpp"
#include "support.hpp"

using namespace pcf::green;
using testing_support::gauss_legendre;
using testing_support::rel_diff;

// mpmath closed-form values.
constexpr double closed_0_1_0 = 0.2770674596149354651601403;
constexpr double closed_m1_2_1 = 0.04653091423004085415053259;

TEST(Eigenfunction, GroundStateAtOrigin) {
  EXPECT_LE(rel_diff(eigenfunction(0, 0.0), std::pow(std::numbers::pi, -0.25)), 1e-15);
}

TEST(Eigenfunction, Orthonormal) {
  for (unsigned m = 0; m <= 6; ++m)
    for (unsigned n = 0; n <= 6; ++n) {
      const double ip = gauss_legendre([m, n](double x) { return eigenfunction(m, x) * eigenfunction(n, x); }, -10.0,
                                       10.0, 200);
      EXPECT_NEAR(ip, m == n ? 1.0 : 0.0, 1e-9) << m << " " << n;
    }
}

TEST(Eigenfunction, OdeResidual) {
  const double h = 1e-3;
  for (unsigned n : {0u, 1u, 4u, 9u})
    for (double x = -3.0; x <= 3.0; x += 0.5) {
      const double d2 = (eigenfunction(n, x + h) - 2.0 * eigenfunction(n, x) + eigenfunction(n, x - h)) / (h * h);
      EXPECT_LE(std::abs(d2 + (2.0 * n + 1.0 - x * x) * eigenfunction(n, x)), 1e-5) << n << " " << x;
    }
}

TEST(Eigenfunction, LargeIndexStaysFinite) {
  EXPECT_TRUE(std::isfinite(eigenfunction(200, 9.5)));
  EXPECT_THROW(eigenfunction(201, 0.0), pcf::domain_error);
  EXPECT_THROW(eigenfunction(3, 10.5), pcf::domain_error);
}

TEST(Closed, Examples) {
  EXPECT_LE(rel_diff(green_closed({0.0, 1.0, 0.0}), closed_0_1_0), 1e-12);
  EXPECT_LE(rel_diff(green_closed({-1.0, 2.0, 1.0}), closed_m1_2_1), 1e-12);
  // Gamma(1) D_{-1}(2 sqrt2) D_{-1}(-sqrt2) / (2 sqrt pi) through erfc.
  auto d1 = [](double z) {
    return std::sqrt(std::numbers::pi / 2.0) * std::exp(0.25 * z * z) * std::erfc(z / std::numbers::sqrt2);
  };
  const double by_erfc = d1(2.0 * std::numbers::sqrt2) * d1(-std::numbers::sqrt2) / (2.0 * std::sqrt(std::numbers::pi));
  EXPECT_LE(rel_diff(green_closed({-1.0, 2.0, 1.0}), by_erfc), 1e-12);
  EXPECT_THROW(green_closed({0.0, 0.0, 1.0}), pcf::domain_error);
  EXPECT_THROW(green_closed({1.5, 1.0, 0.0}), pcf::domain_error);
}

TEST(Closed, MatchesProductFrame) {
  for (double nu : {0.5, 1.0, 2.0}) {
    const double x = 1.3, xp = 0.4;
    const double g = green_closed({1.0 - 2.0 * nu, x, xp});
    const double product = pcf::product::product_reference({nu, x * std::numbers::sqrt2, xp * std::numbers::sqrt2});
    EXPECT_LE(rel_diff(2.0 * std::sqrt(std::numbers::pi) * g / std::tgamma(nu), product), 1e-12) << nu;
  }
}

TEST(Spectral, Examples) {
  const auto s = green_spectral({0.0, 1.0, 0.0}, 1e-10);
  EXPECT_LE(rel_diff(s.value, green_closed({0.0, 1.0, 0.0})), 5e-7);
  EXPECT_LE(rel_diff(green_spectral({0.0, 2.0, -1.0}, 1e-10).value, green_ode_oracle({0.0, 2.0, -1.0})), 5e-7);
  EXPECT_LE(std::abs(green_spectral({0.7, 1.2, -0.3}, 1e-10).value - green_spectral({0.7, -0.3, 1.2}, 1e-10).value),
            1e-12);
}

TEST(Spectral, PoleGuard) {
  EXPECT_THROW(green_spectral({3.0, 1.0, 0.0}, 1e-10), pcf::domain_error);
  EXPECT_THROW(green_spectral({1.0 + 5e-7, 1.0, 0.0}, 1e-10), pcf::domain_error);
  EXPECT_NO_THROW(green_spectral({1.0 + 1e-5, 1.0, 0.0}, 1e-10));
}

// Residue at lambda_n: (lambda_n - lambda) G -> y_n(x) y_n(x'). The O(delta)
// term cancels in the symmetric average.
TEST(Spectral, PoleResidue) {
  const double x = 1.0, xp = 0.5, delta = 1e-3;
  for (unsigned n : {0u, 1u, 3u}) {
    const double ln = 2.0 * n + 1.0;
    const double above = green_spectral({ln + delta, x, xp}, 1e-12).value * (-delta);
    const double below = green_spectral({ln - delta, x, xp}, 1e-12).value * delta;
    const double residue = eigenfunction(n, x) * eigenfunction(n, xp);
    EXPECT_LE(rel_diff(0.5 * (above + below), residue), 1e-4) << n;
  }
}

TEST(Oracle, Examples) {
  EXPECT_LE(rel_diff(green_ode_oracle({0.0, 1.0, 0.0}), green_spectral({0.0, 1.0, 0.0}, 1e-10).value), 1e-6);
  EXPECT_LE(rel_diff(green_ode_oracle({-3.0, 1.5, -0.5}), green_closed({-3.0, 1.5, -0.5})), 1e-6);
  EXPECT_THROW(green_ode_oracle({2.95, 1.0, 0.0}), pcf::domain_error);
  EXPECT_THROW(green_ode_oracle({0.0, 6.5, 0.0}), pcf::domain_error);
}

// Continuous at x = x' with derivative jump -1 (source -delta).
TEST(Oracle, Kink) {
  const double xp = 0.3, eps = 1e-3;
  const double at = green_ode_oracle({0.0, xp, xp});
  const double right1 = green_ode_oracle({0.0, xp + eps, xp});
  const double right2 = green_ode_oracle({0.0, xp + 2.0 * eps, xp});
  const double left1 = green_ode_oracle({0.0, xp - eps, xp});
  const double left2 = green_ode_oracle({0.0, xp - 2.0 * eps, xp});
  EXPECT_NEAR(right1, at, 2.0 * eps);
  EXPECT_NEAR(left1, at, 2.0 * eps);
  // Second-order one-sided differences.
  const double d_right = (-3.0 * at + 4.0 * right1 - right2) / (2.0 * eps);
  const double d_left = (3.0 * at - 4.0 * left1 + left2) / (2.0 * eps);
  EXPECT_NEAR(d_right - d_left, -1.0, 1e-4);
}

TEST(ThreeWay, Battery) {
  for (double lambda : {-3.0, -1.0, 0.0, 0.5})
    for (auto [x, xp] : {std::pair{1.0, 0.0}, std::pair{2.0, -1.0}, std::pair{1.5, 0.5}}) {
      const GreenQuery q{lambda, x, xp};
      const double s = green_spectral(q, 1e-10).value;
      const double c = green_closed(q);
      const double o = green_ode_oracle(q);
      EXPECT_LE(rel_diff(s, c), 1e-6) << lambda << " " << x << " " << xp;
      EXPECT_LE(rel_diff(o, c), 1e-6) << lambda << " " << x << " " << xp;
    }
}

// lambda = 1 - 2 nu: the spectral sum equals Gamma(nu)/(2 sqrt pi) times the
// integral representation at (x sqrt2, x' sqrt2).
TEST(Chain, SpectralEqualsIntegralRepresentation) {
  for (double nu : {0.5, 1.0, 2.5})
    for (auto [x, xp] : {std::pair{1.0, 0.2}, std::pair{2.0, 0.5}}) {
      const double s = green_spectral({1.0 - 2.0 * nu, x, xp}, 1e-11).value;
      const double integral =
          pcf::product::product_via_integral({nu, x * std::numbers::sqrt2, xp * std::numbers::sqrt2}).value;
      EXPECT_LE(rel_diff(s, std::tgamma(nu) / (2.0 * std::sqrt(std::numbers::pi)) * integral), 1e-6) << nu << " " << x;
    }
}
