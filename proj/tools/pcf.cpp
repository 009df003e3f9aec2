// pcf: evaluate single quantities or sweep identity checks.
//
//   pcf eval <target> --<param> <value> ... [--tol T]
//   pcf verify <identity|all> [--<param> <range>] ... [--tol T] [--format csv|json]

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pcf/product.hpp"
#include "pcf/green.hpp"
#include "pcf/hyperbolic.hpp"
#include "pcf/mehler.hpp"
#include "pcf/specfun.hpp"
#include "pcf/verification.hpp"
#include "pcf/verify.hpp"

namespace {

const std::vector<std::string> param_names = {"nu", "z", "x", "y", "a", "b", "sign", "X", "Y", "u",
                                              "lambda", "xprime", "alpha", "phi", "n"};

using Args = std::map<std::string, double>;

struct Output {
  double value;
  std::vector<std::pair<std::string, std::string>> meta;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Output from(const pcf::quad::QuadratureResult& r) {
  return {r.value, {{"error_estimate", fmt(r.error_estimate)}, {"evaluations", std::to_string(r.evaluations)}}};
}

Output from(const pcf::specfun::SeriesResult& r) {
  return {r.value, {{"terms_used", std::to_string(r.terms_used)}, {"tail_bound", fmt(r.tail_bound)}}};
}

Output plain(double v) { return {v, {}}; }

unsigned as_index(double v) {
  if (v < 0.0 || v != static_cast<double>(static_cast<unsigned>(v)))
    throw pcf::domain_error("n must be a nonnegative integer");
  return static_cast<unsigned>(v);
}

pcf::product::LaplaceSign as_sign(double v) {
  if (v == 1.0) return pcf::product::LaplaceSign::plus;
  if (v == -1.0) return pcf::product::LaplaceSign::minus;
  throw pcf::domain_error("sign must be +1 or -1");
}

struct Target {
  std::vector<std::string> params;
  std::function<Output(const Args&, double tol)> run;
};

const std::map<std::string, Target>& targets() {
  using namespace pcf;
  static const std::map<std::string, Target> t = {
      {"hermite", {{"n", "x"}, [](const Args& p, double) { return plain(specfun::hermite(as_index(p.at("n")), p.at("x"))); }}},
      {"gamma", {{"nu"}, [](const Args& p, double) { return plain(specfun::gamma(p.at("nu"))); }}},
      {"erfc", {{"x"}, [](const Args& p, double) { return plain(specfun::erfc(p.at("x"))); }}},
      {"bessel_k_quarter", {{"z"}, [](const Args& p, double) { return plain(specfun::bessel_k_quarter(p.at("z"))); }}},
      {"pcf_d", {{"nu", "z"}, [](const Args& p, double) { return plain(specfun::pcf_d(p.at("nu"), p.at("z"))); }}},
      {"product_integral",
       {{"nu", "x", "y"},
        [](const Args& p, double tol) {
          return from(product::product_via_integral({p.at("nu"), p.at("x"), p.at("y")}, tol));
        }}},
      {"product_integral_exploratory",
       {{"nu", "x", "y"},
        [](const Args& p, double tol) {
          return from(product::product_via_integral({p.at("nu"), p.at("x"), p.at("y")}, tol,
                                                    product::Domain::exploratory));
        }}},
      {"product_reference",
       {{"nu", "x", "y"},
        [](const Args& p, double) { return plain(product::product_reference({p.at("nu"), p.at("x"), p.at("y")})); }}},
      {"laplace_I",
       {{"nu", "a", "b", "sign"},
        [](const Args& p, double tol) {
          return from(product::laplace_I({p.at("nu"), p.at("a"), p.at("b")}, as_sign(p.at("sign")), tol));
        }}},
      {"laplace_I_closed",
       {{"nu", "a", "b", "sign"},
        [](const Args& p, double) {
          return plain(product::laplace_I_closed({p.at("nu"), p.at("a"), p.at("b")}, as_sign(p.at("sign"))));
        }}},
      {"transform_integral",
       {{"nu", "a", "b"},
        [](const Args& p, double tol) { return from(product::transform_integral(p.at("nu"), p.at("a"), p.at("b"), tol)); }}},
      {"transform_integral_u",
       {{"nu", "a", "b"},
        [](const Args& p, double tol) {
          return from(product::transform_integral_u(p.at("nu"), p.at("a"), p.at("b"), tol));
        }}},
      {"mehler_kernel",
       {{"X", "Y", "u"},
        [](const Args& p, double) { return plain(mehler::mehler_kernel_closed({p.at("X"), p.at("Y"), p.at("u")})); }}},
      {"mehler_kernel_series",
       {{"X", "Y", "u"},
        [](const Args& p, double tol) {
          return from(mehler::mehler_kernel_series({p.at("X"), p.at("Y"), p.at("u")}, tol));
        }}},
      {"series_for_I",
       {{"nu", "X", "Y"},
        [](const Args& p, double tol) { return from(mehler::series_for_I(p.at("nu"), p.at("X"), p.at("Y"), tol)); }}},
      {"sum_rule_lhs",
       {{"nu", "x", "y"},
        [](const Args& p, double tol) { return from(mehler::sum_rule_lhs({p.at("nu"), p.at("x"), p.at("y")}, tol)); }}},
      {"sum_rule_rhs",
       {{"nu", "x", "y"},
        [](const Args& p, double) { return plain(mehler::sum_rule_rhs({p.at("nu"), p.at("x"), p.at("y")})); }}},
      {"eigenfunction",
       {{"n", "x"}, [](const Args& p, double) { return plain(green::eigenfunction(as_index(p.at("n")), p.at("x"))); }}},
      {"green_spectral",
       {{"lambda", "x", "xprime"},
        [](const Args& p, double tol) {
          return from(green::green_spectral({p.at("lambda"), p.at("x"), p.at("xprime")}, tol));
        }}},
      {"green_closed",
       {{"lambda", "x", "xprime"},
        [](const Args& p, double) { return plain(green::green_closed({p.at("lambda"), p.at("x"), p.at("xprime")})); }}},
      {"green_ode",
       {{"lambda", "x", "xprime"},
        [](const Args& p, double) {
          return plain(green::green_ode_oracle({p.at("lambda"), p.at("x"), p.at("xprime")}));
        }}},
      {"hyperbolic_lhs_sech",
       {{"alpha", "phi"},
        [](const Args& p, double tol) { return from(hyperbolic::erfc_sech_lhs(p.at("alpha"), p.at("phi"), tol)); }}},
      {"hyperbolic_rhs_sech",
       {{"alpha", "phi"}, [](const Args& p, double) { return plain(hyperbolic::erfc_sech_rhs(p.at("alpha"), p.at("phi"))); }}},
      {"hyperbolic_lhs_sinh",
       {{"alpha", "phi"},
        [](const Args& p, double tol) { return from(hyperbolic::erfc_sinh_lhs(p.at("alpha"), p.at("phi"), tol)); }}},
      {"hyperbolic_rhs_sinh",
       {{"alpha", "phi"}, [](const Args& p, double) { return plain(hyperbolic::erfc_sinh_rhs(p.at("alpha"), p.at("phi"))); }}},
      {"hyperbolic_lhs_k",
       {{"a", "phi"}, [](const Args& p, double tol) { return from(hyperbolic::k_quarter_lhs(p.at("a"), p.at("phi"), tol)); }}},
      {"hyperbolic_rhs_k",
       {{"a", "phi"}, [](const Args& p, double) { return plain(hyperbolic::k_quarter_rhs(p.at("a"), p.at("phi"))); }}},
  };
  return t;
}

int fail(const std::string& msg, int code) {
  std::cerr << "pcf: " << msg << "\n";
  return code;
}

int cmd_eval(const std::string& target, const std::map<std::string, std::optional<std::string>>& raw, double tol) {
  auto it = targets().find(target);
  if (it == targets().end()) {
    std::string known;
    for (const auto& [name, t] : targets()) known += " " + name;
    return fail("unknown target '" + target + "'; known:" + known, 2);
  }
  Args args;
  for (const auto& name : it->second.params) {
    const auto& v = raw.at(name);
    if (!v) return fail("target " + target + " needs --" + name, 2);
    try {
      args[name] = pcf::verify::detail::parse_number(*v);
    } catch (const std::exception& e) {
      return fail("--" + name + ": " + e.what(), 2);
    }
  }
  for (const auto& [name, v] : raw)
    if (v && !args.count(name)) return fail("target " + target + " does not take --" + name, 2);

  try {
    const Output out = it->second.run(args, tol);
    std::printf("%.17g\n", out.value);
    for (const auto& [k, v] : out.meta) std::printf("%s=%s\n", k.c_str(), v.c_str());
    return 0;
  } catch (const pcf::domain_error& e) {
    return fail(std::string("domain error: ") + e.what(), 3);
  } catch (const pcf::convergence_error& e) {
    return fail(std::string("no convergence: ") + e.what() + " (best estimate " + fmt(e.best_estimate()) + ")", 4);
  } catch (const pcf::evaluation_error& e) {
    return fail(std::string("evaluation error: ") + e.what(), 4);
  }
}

int cmd_verify(const std::string& which, const std::map<std::string, std::optional<std::string>>& raw,
               std::optional<double> tol, const std::string& format) {
  std::vector<pcf::IdentityId> ids;
  if (which == "all") {
    ids.assign(pcf::all_identities.begin(), pcf::all_identities.end());
  } else if (auto id = pcf::parse_identity(which)) {
    ids.push_back(*id);
  } else {
    return fail("unknown identity '" + which + "'", 2);
  }

  std::map<std::string, std::string> overrides;
  for (const auto& [name, v] : raw)
    if (v) overrides[name] = *v;
  if (ids.size() == 1) {
    const auto& grid = pcf::verify::identity_spec(ids[0]).grid;
    for (const auto& [name, v] : overrides) {
      bool found = false;
      for (const auto& g : grid) found = found || g.first == name;
      if (!found) return fail(which + " has no parameter --" + name, 2);
    }
  }

  std::vector<pcf::VerificationRecord> records;
  try {
    for (auto id : ids) {
      auto part = pcf::verify::run(id, overrides, tol.value_or(0.0));
      records.insert(records.end(), part.begin(), part.end());
    }
  } catch (const pcf::verify::usage_error& e) {
    return fail(e.what(), 2);
  }

  const auto summary = pcf::verify::summarize(records);
  if (format == "json") {
    std::cout << pcf::verify::to_json(records);
  } else {
    std::cout << pcf::verify::to_csv(records);
    std::cerr << pcf::verify::summary_line(summary) << "\n";
  }
  std::cout.flush();
  return summary.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parabolic cylinder function products: evaluation and identity checks"};
  app.require_subcommand(1);

  std::map<std::string, std::optional<std::string>> eval_raw, verify_raw;
  for (const auto& n : param_names) eval_raw[n], verify_raw[n];

  std::string target;
  double eval_tol = 1e-10;
  auto* eval = app.add_subcommand("eval", "Evaluate one quantity at a point");
  eval->add_option("target", target, "Quantity name")->required();
  eval->add_option("--tol", eval_tol, "Tolerance")->check(CLI::Range(1e-14, 1e-2));

  std::string identity;
  std::optional<double> verify_tol;
  std::string format = "csv";
  auto* verify = app.add_subcommand("verify", "Check identities on parameter grids");
  verify->add_option("identity", identity, "Identity id or 'all'")->required();
  verify->add_option("--tol", verify_tol, "Pass tolerance (default: per identity)")->check(CLI::Range(1e-14, 1e-2));
  verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  for (const auto& n : param_names) {
    eval->add_option_function<std::string>("--" + n, [&eval_raw, n](const std::string& v) { eval_raw[n] = v; },
                                           "Parameter " + n);
    verify->add_option_function<std::string>("--" + n, [&verify_raw, n](const std::string& v) { verify_raw[n] = v; },
                                             "Range for " + n);
  }

  CLI11_PARSE(app, argc, argv);

  if (eval->parsed()) return cmd_eval(target, eval_raw, eval_tol);
  return cmd_verify(identity, verify_raw, verify_tol, format);
}
