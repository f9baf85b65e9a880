#pragma once

#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "enteq/dsl.hpp"
#include "enteq/errors.hpp"
#include "enteq/serialize.hpp"
#include "enteq/solutions.hpp"
#include "enteq/verifier.hpp"
#include "enteq/version.hpp"

namespace enteq {

/// Everything needed to reproduce a check run.  A report embeds the exact
/// RunConfig (and the loaded descriptor) that produced it, so re-running
/// a report file regenerates the same numbers bit for bit.
struct RunConfig {
  std::string subcommand = "check";
  std::string descriptor_path;
  std::string equation = "modified";
  SampleSpec spec;
  Tolerances tol;
  int threads = 1;
  int degree = 1;           // homogeneity
  std::string assoc_expr;   // equation == "assoc"; variables x, y stand for u, v
  std::string mu_override;  // "zero" or a comma list of exponents
  std::string out_path;
};

inline const char* region_name(Region r) {
  switch (r) {
    case Region::OpenCube: return "cube";
    case Region::Cone: return "cone";
    default: return "feim-d";
  }
}

inline Region region_from_name(const std::string& name) {
  if (name == "cube") return Region::OpenCube;
  if (name == "cone") return Region::Cone;
  if (name == "feim-d") return Region::FeimD;
  throw ConstraintError("unknown region \"" + name + "\"");
}

namespace io {

inline std::string config_to_text(const RunConfig& c) {
  std::string out = "{";
  out += "\"subcommand\":" + json_quote(c.subcommand);
  out += ",\"descriptor_path\":" + json_quote(c.descriptor_path);
  out += ",\"equation\":" + json_quote(c.equation);
  out += ",\"k\":" + std::to_string(c.spec.k);
  out += ",\"samples\":" + std::to_string(c.spec.count);
  out += ",\"seed\":" + std::to_string(c.spec.seed);
  out += ",\"region\":" + json_quote(region_name(c.spec.region));
  out += ",\"lo\":" + format17(c.spec.lo);
  out += ",\"hi\":" + format17(c.spec.hi);
  out += ",\"atol\":" + format17(c.tol.atol);
  out += ",\"rtol\":" + format17(c.tol.rtol);
  out += ",\"threads\":" + std::to_string(c.threads);
  out += ",\"degree\":" + std::to_string(c.degree);
  out += ",\"assoc_expr\":" + json_quote(c.assoc_expr);
  out += ",\"mu_override\":" + json_quote(c.mu_override);
  out += ",\"out\":" + json_quote(c.out_path);
  out += "}";
  return out;
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.subcommand = j.value("subcommand", std::string("check"));
  c.descriptor_path = j.value("descriptor_path", std::string());
  c.equation = j.at("equation").get<std::string>();
  c.spec.k = j.at("k").get<std::size_t>();
  c.spec.count = j.at("samples").get<std::size_t>();
  c.spec.seed = j.at("seed").get<std::uint64_t>();
  c.spec.region = region_from_name(j.at("region").get<std::string>());
  c.spec.lo = j.at("lo").get<double>();
  c.spec.hi = j.at("hi").get<double>();
  c.tol.atol = j.at("atol").get<double>();
  c.tol.rtol = j.at("rtol").get<double>();
  c.threads = j.value("threads", 1);
  c.degree = j.value("degree", 1);
  c.assoc_expr = j.value("assoc_expr", std::string());
  c.mu_override = j.value("mu_override", std::string());
  c.out_path = j.value("out", std::string());
  return c;
}

inline std::string report_body_text(const ResidualReport& r) {
  std::string out = "{";
  out += "\"equation\":" + json_quote(r.equation);
  out += ",\"samples\":" + std::to_string(r.samples);
  out += ",\"max_abs_residual\":" + format17(r.max_abs_residual);
  out += ",\"mean_abs_residual\":" + format17(r.mean_abs_residual);
  out += ",\"argmax_index\":" + std::to_string(r.argmax_index);
  out += ",\"argmax\":" + point_array17(r.argmax_point);
  out += ",\"tolerance\":" + format17(r.tolerance);
  out += ",\"pass\":" + std::string(r.pass ? "true" : "false");
  out += ",\"seed\":" + std::to_string(r.seed);
  out += "}";
  return out;
}

}  // namespace io

struct CheckOutcome {
  ResidualReport primary;
  std::optional<ResidualReport> secondary;  // the exchange probe of assoc
  bool pass = false;
};

namespace detail {

inline MultFn mu_from_override(const std::string& text, std::size_t k) {
  if (text == "zero") return MultFn::zero_map(k);
  auto alpha = io::parse_double_list(text);
  if (alpha.size() != k)
    throw DimensionError("mu override has " + std::to_string(alpha.size()) +
                         " exponents, expected " + std::to_string(k));
  return MultFn::power(std::move(alpha));
}

}  // namespace detail

/// Runs the check described by `config` against `descriptor` (absent only
/// for the associativity equation).  The single entry point used by both
/// a fresh `check` invocation and a `--rerun`, which is what makes report
/// reproduction exact.
inline CheckOutcome execute_check(const RunConfig& config,
                                  const std::optional<io::json>& descriptor) {
  CheckOutcome outcome;

  if (config.equation == "assoc") {
    if (config.assoc_expr.empty())
      throw ConstraintError(
          "the associativity check needs an expression (variables x, y stand "
          "for u, v)");
    const auto expr =
        dsl::parse(config.assoc_expr, static_cast<int>(config.spec.k),
                   dsl::VarSet::xy());
    auto a = [&expr](const PosVec& u, const PosVec& v) {
      return dsl::eval(expr, dsl::Bindings::bind_xy(u.coords(), v.coords()));
    };
    AssocResult res =
        check_associativity(a, config.spec, config.tol, config.threads);
    outcome.primary = std::move(res.sum_form);
    outcome.secondary = std::move(res.exchange);
    outcome.pass = res.pass;
    return outcome;
  }

  if (!descriptor)
    throw ConstraintError("equation \"" + config.equation +
                          "\" needs a solution descriptor");
  const TriSolution f =
      io::solution_from_json(*descriptor, io::ConstraintPolicy::Permit);
  if (f.dim() != config.spec.k)
    throw DimensionError("descriptor has k = " + std::to_string(f.dim()) +
                         " but the run is configured for k = " +
                         std::to_string(config.spec.k));

  auto declared_or_override = [&]() -> MultFn {
    if (!config.mu_override.empty())
      return detail::mu_from_override(config.mu_override, f.dim());
    auto mu = f.declared_mu();
    if (!mu)
      throw ConstraintError(
          "an expression solution declares no mu; pass one with --mu");
    return *mu;
  };

  if (config.equation == "modified") {
    outcome.primary = check_modified(f, declared_or_override(), config.spec,
                                     config.tol, config.threads);
  } else if (config.equation == "entropy-classic") {
    outcome.primary =
        check_entropy_classic(f, config.spec, config.tol, config.threads);
  } else if (config.equation == "ent-special") {
    outcome.primary =
        check_ent_special(f, config.spec, config.tol, config.threads);
  } else if (config.equation == "feim") {
    SampleSpec spec = config.spec;
    spec.region = Region::FeimD;
    outcome.primary = check_feim(derive_h(f), declared_or_override(), spec,
                                 config.tol, config.threads);
  } else if (config.equation == "symmetry") {
    outcome.primary =
        check_symmetry(f, config.spec, config.tol, config.threads);
  } else if (config.equation == "homogeneity") {
    outcome.primary = check_homogeneity(f, config.degree, config.spec,
                                        config.tol, config.threads);
  } else {
    throw ConstraintError("unknown equation \"" + config.equation + "\"");
  }
  outcome.pass = outcome.primary.pass;
  return outcome;
}

namespace io {

/// Full report document: primary results, the embedded RunConfig and
/// descriptor, tool version, and (for assoc) the secondary probe.
inline std::string report_to_text(const CheckOutcome& outcome,
                                  const RunConfig& config,
                                  const std::optional<json>& descriptor) {
  std::string out = "{";
  const ResidualReport& r = outcome.primary;
  out += "\"equation\":" + json_quote(r.equation);
  out += ",\"samples\":" + std::to_string(r.samples);
  out += ",\"max_abs_residual\":" + format17(r.max_abs_residual);
  out += ",\"mean_abs_residual\":" + format17(r.mean_abs_residual);
  out += ",\"argmax_index\":" + std::to_string(r.argmax_index);
  out += ",\"argmax\":" + point_array17(r.argmax_point);
  out += ",\"tolerance\":" + format17(r.tolerance);
  out += ",\"pass\":" + std::string(outcome.pass ? "true" : "false");
  out += ",\"seed\":" + std::to_string(r.seed);
  if (outcome.secondary)
    out += ",\"secondary\":" + report_body_text(*outcome.secondary);
  out += ",\"version\":" + json_quote(kVersion);
  out += ",\"config\":" + config_to_text(config);
  out += ",\"descriptor\":" + (descriptor ? descriptor->dump() : "null");
  out += "}";
  return out;
}

}  // namespace io
}  // namespace enteq
