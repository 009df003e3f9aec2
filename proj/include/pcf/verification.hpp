#pragma once

// One both-sides evaluation of an identity at one parameter point.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pcf {

enum class IdentityId { EQ10, EQ11, EQ12, EQ13A, EQ13B, EQ14, EQ15, EQ3, EQ8_EQ9 };

inline constexpr std::array<IdentityId, 9> all_identities = {
    IdentityId::EQ10,  IdentityId::EQ11, IdentityId::EQ12, IdentityId::EQ13A,  IdentityId::EQ13B,
    IdentityId::EQ14, IdentityId::EQ15, IdentityId::EQ3,  IdentityId::EQ8_EQ9,
};

inline std::string_view to_string(IdentityId id) {
  switch (id) {
    case IdentityId::EQ10: return "EQ10";
    case IdentityId::EQ11: return "EQ11";
    case IdentityId::EQ12: return "EQ12";
    case IdentityId::EQ13A: return "EQ13A";
    case IdentityId::EQ13B: return "EQ13B";
    case IdentityId::EQ14: return "EQ14";
    case IdentityId::EQ15: return "EQ15";
    case IdentityId::EQ3: return "EQ3";
    case IdentityId::EQ8_EQ9: return "EQ8_EQ9";
  }
  return "?";
}

inline std::optional<IdentityId> parse_identity(std::string_view name) {
  for (IdentityId id : all_identities)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

enum class RecordStatus { passed, failed, skipped };

inline std::string_view to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::passed: return "passed";
    case RecordStatus::failed: return "failed";
    case RecordStatus::skipped: return "skipped";
  }
  return "?";
}

struct VerificationRecord {
  IdentityId identity = IdentityId::EQ10;
  /// In grid order, so reports keep a fixed column order.
  std::vector<std::pair<std::string, double>> params;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool passed = false;
  RecordStatus status = RecordStatus::failed;
  std::size_t evaluations = 0;
  /// Why a point was skipped or failed; empty otherwise.
  std::string note;
};

inline constexpr double rel_err_floor = 1e-300;
inline constexpr double tiny_rhs = 1e-280;

/// abs_err = |lhs - rhs|, rel_err = abs_err / max(|lhs|, |rhs|, 1e-300).
/// Passes on rel_err <= tolerance, or on abs_err <= 1e-300 when |rhs| < 1e-280.
inline VerificationRecord make_record(IdentityId id, std::vector<std::pair<std::string, double>> params, double lhs,
                                      double rhs, double tolerance, std::size_t evaluations) {
  VerificationRecord r;
  r.identity = id;
  r.params = std::move(params);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = r.abs_err / std::max({std::abs(lhs), std::abs(rhs), rel_err_floor});
  r.evaluations = std::max<std::size_t>(evaluations, 1);
  if (std::abs(rhs) < tiny_rhs)
    r.passed = r.abs_err <= rel_err_floor;
  else
    r.passed = r.rel_err <= tolerance;
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) r.passed = false;
  r.status = r.passed ? RecordStatus::passed : RecordStatus::failed;
  return r;
}

inline VerificationRecord skipped_record(IdentityId id, std::vector<std::pair<std::string, double>> params,
                                         std::string note) {
  VerificationRecord r;
  r.identity = id;
  r.params = std::move(params);
  r.lhs = r.rhs = r.abs_err = r.rel_err = std::nan("");
  r.status = RecordStatus::skipped;
  r.evaluations = 0;
  r.note = std::move(note);
  return r;
}

}  // namespace pcf
