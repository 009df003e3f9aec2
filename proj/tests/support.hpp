#pragma once

// Test helpers: seeded generators, a tiny property runner, and a composite
// Gauss-Legendre rule that shares no code with the library quadrature.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>

namespace testing_support {

inline double rel_diff(double a, double b) {
  const double d = std::abs(a - b);
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? d : d / s;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

// Runs check(make(gen)) on `count` cases; returns "" or the first failure.
template <class Make, class Check>
std::string for_all(std::uint64_t seed, int count, Make make, Check check) {
  Gen g(seed);
  for (int i = 0; i < count; ++i) {
    auto c = make(g);
    std::string why = check(c);
    if (!why.empty()) {
      std::ostringstream os;
      os << "case " << i << " (seed " << seed << "): " << why;
      return os.str();
    }
  }
  return "";
}

// 10-point Gauss-Legendre on each of n equal panels of [lo, hi].
inline double gauss_legendre(const std::function<double(double)>& f, double lo, double hi, int n) {
  static constexpr std::array<double, 5> x = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                                              0.8650633666889845, 0.9739065285171717};
  static constexpr std::array<double, 5> w = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                                              0.1494513491505806, 0.0666713443086881};
  const double h = (hi - lo) / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = lo + (i + 0.5) * h;
    const double r = 0.5 * h;
    double s = 0.0;
    for (int k = 0; k < 5; ++k) s += w[k] * (f(c - r * x[k]) + f(c + r * x[k]));
    total += r * s;
  }
  return total;
}

}  // namespace testing_support
