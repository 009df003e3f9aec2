#pragma once

// Grid sweeps over the identities, with CSV and JSON reports.
//
// Range grammar, per parameter:
//   lo:hi:count        count points, linear, both ends included
//   log:lo:hi:count    same, log spaced (lo, hi > 0)
//   v1,v2,...          explicit list
//   v                  single value

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pcf/errors.hpp"
#include "pcf/product.hpp"
#include "pcf/green.hpp"
#include "pcf/hyperbolic.hpp"
#include "pcf/mehler.hpp"
#include "pcf/verification.hpp"

namespace pcf::verify {

/// Malformed range spec or unknown parameter.
class usage_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double parse_number(std::string_view s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw usage_error("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace detail

inline std::vector<double> parse_range(std::string_view spec) {
  if (spec.empty()) throw usage_error("empty range spec");
  if (spec.find(':') != std::string_view::npos) {
    auto parts = detail::split(spec, ':');
    bool log = false;
    if (parts.size() == 4 && parts[0] == "log") {
      log = true;
      parts.erase(parts.begin());
    }
    if (parts.size() != 3) throw usage_error("range spec must be lo:hi:count or log:lo:hi:count: '" + std::string(spec) + "'");
    const double lo = detail::parse_number(parts[0]);
    const double hi = detail::parse_number(parts[1]);
    const double count_d = detail::parse_number(parts[2]);
    if (count_d < 1.0 || count_d != std::floor(count_d) || count_d > 1e6)
      throw usage_error("range count must be a positive integer: '" + std::string(spec) + "'");
    const auto count = static_cast<std::size_t>(count_d);
    if (log && !(lo > 0.0 && hi > 0.0)) throw usage_error("log range needs positive ends: '" + std::string(spec) + "'");
    if (count == 1 && lo != hi) throw usage_error("a one-point range needs lo == hi: '" + std::string(spec) + "'");
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
      values[i] = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    values.back() = hi;
    return values;
  }
  std::vector<double> values;
  for (auto part : detail::split(spec, ',')) values.push_back(detail::parse_number(part));
  return values;
}

struct IdentitySpec {
  IdentityId id;
  /// Parameter names with default range specs, in grid order.
  std::vector<std::pair<std::string, std::string>> grid;
  double tolerance;
  /// Parameter values in grid order, pass tolerance -> record.
  std::function<VerificationRecord(const std::vector<double>&, double)> evaluate;
};

namespace detail {

using Params = std::vector<std::pair<std::string, double>>;

inline Params named(const IdentitySpec& spec, const std::vector<double>& v) {
  Params p;
  for (std::size_t i = 0; i < v.size(); ++i) p.emplace_back(spec.grid[i].first, v[i]);
  return p;
}

inline double inner_tol(double tol) { return std::clamp(1e-2 * tol, 1e-14, 1e-10); }

inline VerificationRecord eq10(const std::vector<double>& v, double tol) {
  const product::ProductQuery q{v[0], v[1], v[2]};
  const Params p = {{"nu", q.nu}, {"x", q.x}, {"y", q.y}};
  if (!(q.x > q.y && q.y > 0.0)) return skipped_record(IdentityId::EQ10, p, "outside x > y > 0");
  const auto lhs = product::product_via_integral(q, inner_tol(tol));
  return make_record(IdentityId::EQ10, p, lhs.value, product::product_reference(q), std::max(tol, 1e-9),
                     lhs.evaluations);
}

inline VerificationRecord laplace(IdentityId id, product::LaplaceSign sign, const std::vector<double>& v, double tol) {
  const product::LaplaceParams lp{v[0], v[1], v[2]};
  const Params p = {{"nu", lp.nu}, {"a", lp.a}, {"b", lp.b}};
  if (sign == product::LaplaceSign::plus && !(lp.a > lp.b && lp.b > 0.0))
    return skipped_record(id, p, "outside a > b > 0");
  if (sign == product::LaplaceSign::minus && !(lp.a + lp.b > 0.0 && lp.a >= std::abs(lp.b)))
    return skipped_record(id, p, "outside a >= |b|, a + b > 0");
  const auto lhs = product::laplace_I(lp, sign, inner_tol(tol));
  return make_record(id, p, lhs.value, product::laplace_I_closed(lp, sign), tol, lhs.evaluations);
}

inline VerificationRecord eq15(const std::vector<double>& v, double tol) {
  const mehler::SumRuleQuery q{v[0], v[1], v[2]};
  const Params p = {{"nu", q.nu}, {"x", q.x}, {"y", q.y}};
  if (!(q.x > q.y)) return skipped_record(IdentityId::EQ15, p, "outside x > y");
  const auto lhs = mehler::sum_rule_lhs(q, inner_tol(tol));
  return make_record(IdentityId::EQ15, p, lhs.value, mehler::sum_rule_rhs(q), std::max(tol, 5e-7), lhs.terms_used);
}

inline VerificationRecord eq3(const std::vector<double>& v, double tol) {
  const mehler::MehlerPoint m{v[0], v[1], v[2]};
  const Params p = {{"X", m.X}, {"Y", m.Y}, {"u", m.u}};
  if (!(std::abs(m.u) <= 0.95)) return skipped_record(IdentityId::EQ3, p, "outside |u| <= 0.95");
  const auto lhs = mehler::mehler_kernel_series(m, 1e-13);
  return make_record(IdentityId::EQ3, p, lhs.value, mehler::mehler_kernel_closed(m), tol, lhs.terms_used);
}

inline VerificationRecord eq8_eq9(const std::vector<double>& v, double tol) {
  const green::GreenQuery q{v[0], v[1], v[2]};
  const Params p = {{"lambda", q.lambda}, {"x", q.x}, {"xprime", q.xprime}};
  if (!(q.x > q.xprime)) return skipped_record(IdentityId::EQ8_EQ9, p, "outside x > x'");
  if (!(q.lambda < 1.0)) return skipped_record(IdentityId::EQ8_EQ9, p, "closed form needs lambda < 1");
  if (green::eigenvalue_distance(q.lambda) < green::oracle_pole_guard)
    return skipped_record(IdentityId::EQ8_EQ9, p, "lambda within 0.1 of an eigenvalue");
  const auto lhs = green::green_spectral(q, inner_tol(tol));
  const double closed = green::green_closed(q);
  VerificationRecord r = make_record(IdentityId::EQ8_EQ9, p, lhs.value, closed, tol, lhs.terms_used);
  const double ode = green::green_ode_oracle(q);
  const double ode_rel = std::abs(ode - closed) / std::max({std::abs(ode), std::abs(closed), rel_err_floor});
  char buf[64];
  std::snprintf(buf, sizeof buf, "ode_rel_err=%.3e", ode_rel);
  r.note = buf;
  if (!(ode_rel <= tol)) {
    r.passed = false;
    r.status = RecordStatus::failed;
  }
  return r;
}

template <class Op>
VerificationRecord hyper(Op op, bool uses_a, const std::vector<double>& v, double tol) {
  hyperbolic::HyperbolicQuery q;
  (uses_a ? q.a : q.alpha) = v[0];
  q.phi = v[1];
  return op(q, tol);
}

}  // namespace detail

inline const std::vector<IdentitySpec>& identity_table() {
  using product::LaplaceSign;
  static const std::vector<IdentitySpec> table = {
      {IdentityId::EQ10, {{"nu", "0.5,1,1.5,2.5"}, {"x", "1.5,2,3,4"}, {"y", "0.3,0.7,1.2"}}, 1e-8, detail::eq10},
      {IdentityId::EQ11, {{"nu", "0.5:2.5:3"}, {"a", "2.5:4:4"}, {"b", "0.5:2:4"}}, 1e-8,
       [](const std::vector<double>& v, double t) { return detail::laplace(IdentityId::EQ11, LaplaceSign::plus, v, t); }},
      {IdentityId::EQ12, {{"nu", "0.5:2.5:3"}, {"a", "2.5:4:4"}, {"b", "0.5:2:4"}}, 1e-8,
       [](const std::vector<double>& v, double t) { return detail::laplace(IdentityId::EQ12, LaplaceSign::minus, v, t); }},
      {IdentityId::EQ13A, {{"alpha", "log:0.3:4:5"}, {"phi", "log:0.1:3:5"}}, 1e-8,
       [](const std::vector<double>& v, double t) { return detail::hyper(hyperbolic::erfc_identity_sech, false, v, t); }},
      {IdentityId::EQ13B, {{"alpha", "log:0.3:4:5"}, {"phi", "log:0.1:3:5"}}, 1e-8,
       [](const std::vector<double>& v, double t) { return detail::hyper(hyperbolic::erfc_identity_sinh, false, v, t); }},
      {IdentityId::EQ14, {{"a", "log:0.3:4:5"}, {"phi", "log:0.1:3:5"}}, 1e-7,
       [](const std::vector<double>& v, double t) { return detail::hyper(hyperbolic::k_quarter_identity, true, v, t); }},
      {IdentityId::EQ15, {{"nu", "0.5,1,2"}, {"x", "2:3:3"}, {"y", "-0.5:1:3"}}, 5e-7, detail::eq15},
      {IdentityId::EQ3, {{"X", "-2:2:5"}, {"Y", "-2:2:5"}, {"u", "-0.5:0.5:5"}}, 1e-9, detail::eq3},
      {IdentityId::EQ8_EQ9, {{"lambda", "-3,-1,0,0.5"}, {"x", "1,1.5,2"}, {"xprime", "-1,0,0.5"}}, 1e-6,
       detail::eq8_eq9},
  };
  return table;
}

inline const IdentitySpec& identity_spec(IdentityId id) {
  for (const auto& s : identity_table())
    if (s.id == id) return s;
  throw usage_error("unknown identity");
}

/// PCF_MAX_THREADS if set to a positive integer, else the hardware concurrency.
inline unsigned max_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PCF_MAX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) n = static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return n;
}

/// Evaluates one point, turning numeric exceptions into records.
inline VerificationRecord evaluate_point(const IdentitySpec& spec, const std::vector<double>& v, double tol) {
  try {
    return spec.evaluate(v, tol);
  } catch (const pcf::domain_error& e) {
    return skipped_record(spec.id, detail::named(spec, v), e.what());
  } catch (const pcf::convergence_error& e) {
    VerificationRecord r = skipped_record(spec.id, detail::named(spec, v), e.what());
    r.lhs = e.best_estimate();
    r.status = RecordStatus::failed;
    r.evaluations = std::max<std::size_t>(e.work(), 1);
    return r;
  } catch (const pcf::evaluation_error& e) {
    VerificationRecord r = skipped_record(spec.id, detail::named(spec, v), e.what());
    r.status = RecordStatus::failed;
    return r;
  }
}

/// Runs the grid of one identity. overrides replaces default range specs by
/// parameter name; tol <= 0 selects the identity's own tolerance.
inline std::vector<VerificationRecord> run(IdentityId id, const std::map<std::string, std::string>& overrides,
                                           double tol = 0.0, unsigned threads = max_threads()) {
  const IdentitySpec& spec = identity_spec(id);
  const double use_tol = tol > 0.0 ? tol : spec.tolerance;

  std::vector<std::vector<double>> axes;
  for (const auto& [name, def] : spec.grid) {
    auto it = overrides.find(name);
    axes.push_back(parse_range(it == overrides.end() ? def : it->second));
  }

  // Cartesian product, last axis fastest.
  std::vector<std::vector<double>> points(1);
  for (const auto& axis : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(points.size() * axis.size());
    for (const auto& p : points)
      for (double v : axis) {
        next.push_back(p);
        next.back().push_back(v);
      }
    points = std::move(next);
  }

  std::vector<VerificationRecord> out(points.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor++; i < points.size(); i = cursor++) out[i] = evaluate_point(spec, points[i], use_tol);
  };
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), points.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

struct Summary {
  std::size_t total = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

inline Summary summarize(const std::vector<VerificationRecord>& records) {
  Summary s;
  for (const auto& r : records) {
    ++s.total;
    switch (r.status) {
      case RecordStatus::passed: ++s.passed; break;
      case RecordStatus::failed: ++s.failed; break;
      case RecordStatus::skipped: ++s.skipped; break;
    }
  }
  return s;
}

inline std::string summary_line(const Summary& s) {
  return "summary: total=" + std::to_string(s.total) + " passed=" + std::to_string(s.passed) +
         " failed=" + std::to_string(s.failed) + " skipped=" + std::to_string(s.skipped);
}

namespace detail {
inline std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

/// One block per identity: header identity_id,<params>,lhs,rhs,abs_err,rel_err,passed.
inline std::string to_csv(const std::vector<VerificationRecord>& records) {
  std::string out;
  const VerificationRecord* prev = nullptr;
  for (const auto& r : records) {
    if (!prev || prev->identity != r.identity) {
      out += "identity_id";
      for (const auto& [name, value] : r.params) out += "," + name;
      out += ",lhs,rhs,abs_err,rel_err,passed\n";
    }
    out += to_string(r.identity);
    for (const auto& [name, value] : r.params) out += "," + detail::number(value);
    out += "," + detail::number(r.lhs) + "," + detail::number(r.rhs) + "," + detail::number(r.abs_err) + "," +
           detail::number(r.rel_err) + ",";
    out += r.status == RecordStatus::skipped ? "skipped" : (r.passed ? "true" : "false");
    out += "\n";
    prev = &r;
  }
  return out;
}

inline std::string to_json(const std::vector<VerificationRecord>& records) {
  using nlohmann::ordered_json;
  const Summary s = summarize(records);
  ordered_json doc;
  doc["summary"] = {{"total", s.total}, {"passed", s.passed}, {"failed", s.failed}, {"skipped", s.skipped}};
  doc["records"] = ordered_json::array();
  for (const auto& r : records) {
    ordered_json params = ordered_json::object();
    for (const auto& [name, value] : r.params) params[name] = value;
    ordered_json rec;
    rec["identity_id"] = to_string(r.identity);
    rec["params"] = std::move(params);
    rec["lhs"] = r.lhs;
    rec["rhs"] = r.rhs;
    rec["abs_err"] = r.abs_err;
    rec["rel_err"] = r.rel_err;
    rec["passed"] = r.passed;
    rec["status"] = to_string(r.status);
    rec["evaluations"] = r.evaluations;
    if (!r.note.empty()) rec["note"] = r.note;
    doc["records"].push_back(std::move(rec));
  }
  return doc.dump(2) + "\n";
}

}  // namespace pcf::verify
