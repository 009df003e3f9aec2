#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcf {

/// Argument outside the declared domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative method (quadrature refinement, series, shooting) did not reach
/// its tolerance. Carries the best estimate available when it gave up.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double best_estimate, double error_estimate,
                    std::size_t work)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate),
        work_(work) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }
  /// Integrand evaluations or series terms spent.
  std::size_t work() const noexcept { return work_; }

 private:
  double best_estimate_;
  double error_estimate_;
  std::size_t work_;
};

/// The integrand returned NaN or an infinity at an interior node.
class evaluation_error : public std::runtime_error {
 public:
  evaluation_error(const std::string& what, double where)
      : std::runtime_error(what), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

}  // namespace pcf
