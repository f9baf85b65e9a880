// Command-line front end: constructs solution descriptors, runs the
// residual checks and witness oracles, and classifies solutions.  Every
// run takes an explicit seed and emits JSON that embeds the full run
// configuration, so reports are reproducible.
//
// Exit codes: 0 pass, 1 verification failure (or witness outcome contrary
// to prediction), 2 usage/config error, 3 domain error during evaluation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enteq/classify.hpp"
#include "enteq/errors.hpp"
#include "enteq/runconfig.hpp"
#include "enteq/serialize.hpp"
#include "enteq/solutions.hpp"
#include "enteq/verifier.hpp"
#include "enteq/version.hpp"

namespace {

using enteq::io::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw enteq::ConstraintError("cannot open \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw enteq::ConstraintError("cannot write \"" + out_path + "\"");
  out << text << "\n";
}

double parse_base(const std::string& text) {
  if (text == "e") return std::numbers::e;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (!end || *end != '\0' || !(v > 0.0) || v == 1.0)
    throw enteq::ConstraintError("invalid logarithm base \"" + text + "\"");
  return v;
}

struct ConstructArgs {
  std::string which;
  std::size_t k = 1;
  std::string base = "e";
  std::string alpha;
  bool mu_zero = false;
  std::string l_coeffs;
  double b = 1.0;
  std::string psi_expr;
  double psi_const = 0.0;
  bool psi_const_given = false;
  std::string psi_linear;
  bool psi_negxlogx = false;
  std::string expr;
  std::string out;
};

enteq::PsiFn build_psi(const ConstructArgs& a, double fallback_const) {
  if (!a.psi_expr.empty()) return enteq::PsiFn::expression(a.psi_expr, a.k);
  if (a.psi_const_given) return enteq::PsiFn::constant(a.psi_const);
  if (!a.psi_linear.empty())
    return enteq::PsiFn::linear(enteq::io::parse_double_list(a.psi_linear));
  if (a.psi_negxlogx) return enteq::PsiFn::neg_x_log_x(parse_base(a.base));
  return enteq::PsiFn::constant(fallback_const);
}

int run_construct(const ConstructArgs& a) {
  using enteq::LogFn;
  using enteq::MultFn;
  using enteq::TriSolution;

  std::optional<TriSolution> f;
  std::string constraint_echo = "no normalization constraint";

  auto make_mu = [&](std::vector<double> fallback) {
    if (a.mu_zero) return MultFn::zero_map(a.k);
    if (!a.alpha.empty()) {
      auto alpha = enteq::io::parse_double_list(a.alpha);
      if (alpha.size() != a.k)
        throw enteq::DimensionError("--alpha needs exactly k exponents");
      return MultFn::power(std::move(alpha));
    }
    return MultFn::power(std::move(fallback));
  };
  auto make_l = [&]() {
    if (a.l_coeffs.empty()) return LogFn::natural(a.k);
    auto c = enteq::io::parse_double_list(a.l_coeffs);
    if (c.size() != a.k)
      throw enteq::DimensionError("--l needs exactly k coefficients");
    return LogFn(std::move(c));
  };

  if (a.which == "projection") {
    std::vector<double> e0(a.k, 0.0);
    e0[0] = 1.0;
    MultFn mu = make_mu(std::move(e0));
    enteq::PsiFn psi = build_psi(a, 0.0);
    const double psi1 = psi.value_at_ones(a.k);
    f = TriSolution::case_projection(std::move(mu), make_l(), std::move(psi));
    if (!f->mu().is_zero())
      constraint_echo = "psi(1)=0: ok (psi(1) = " + enteq::io::format17(psi1) +
                        ")";
  } else if (a.which == "one") {
    enteq::PsiFn psi = build_psi(a, 0.0);
    const double psi1 = psi.value_at_ones(a.k);
    f = TriSolution::case_one(a.k, std::move(psi));
    constraint_echo =
        "psi(1)=0: ok (psi(1) = " + enteq::io::format17(psi1) + ")";
  } else if (a.which == "other") {
    MultFn mu = make_mu(std::vector<double>(a.k, 2.0));
    enteq::PsiFn psi = build_psi(a, -a.b);
    const double psi1 = psi.value_at_ones(a.k);
    f = TriSolution::case_other(std::move(mu), a.b, std::move(psi));
    constraint_echo = "psi(1)=-b: ok (psi(1) = " + enteq::io::format17(psi1) +
                      ", -b = " + enteq::io::format17(-a.b) + ")";
  } else if (a.which == "zero_mu") {
    f = TriSolution::case_zero_mu(make_l(), build_psi(a, 0.0));
  } else if (a.which == "shannon") {
    if (a.k != 1)
      throw enteq::ConstraintError("the shannon case requires --k 1");
    f = TriSolution::shannon(parse_base(a.base));
  } else if (a.which == "expr") {
    if (a.expr.empty())
      throw enteq::ConstraintError("--expr is required for the expr case");
    f = TriSolution::user_expr(a.expr, a.k);
  } else {
    throw enteq::ConstraintError("unknown case \"" + a.which + "\"");
  }

  std::cerr << constraint_echo << "\n";
  write_output(enteq::io::solution_to_json(*f).dump(2), a.out);
  return kExitPass;
}

struct CheckArgs {
  std::string descriptor_path;
  std::string rerun_path;
  enteq::RunConfig config;
  bool seed_given = false;
  std::size_t k_flag = 1;
  std::string region = "cone";
};

int run_check_config(enteq::RunConfig config,
                     const std::optional<json>& descriptor,
                     const std::optional<json>& expected) {
  const enteq::CheckOutcome outcome = enteq::execute_check(config, descriptor);
  const std::string text =
      enteq::io::report_to_text(outcome, config, descriptor);
  write_output(text, config.out_path);

  std::cerr << outcome.primary.equation
            << ": max residual = " << enteq::io::format17(
                   outcome.primary.max_abs_residual)
            << ", tolerance = " << enteq::io::format17(
                   outcome.primary.tolerance)
            << ", " << (outcome.pass ? "pass" : "FAIL") << "\n";

  if (expected) {
    const json fresh = json::parse(text);
    const bool reproduced =
        fresh.at("max_abs_residual").get<double>() ==
            expected->at("max_abs_residual").get<double>() &&
        fresh.at("pass").get<bool>() == expected->at("pass").get<bool>();
    std::cerr << "reproduced: " << (reproduced ? "true" : "false") << "\n";
    if (!reproduced) return kExitVerificationFail;
  }
  return outcome.pass ? kExitPass : kExitVerificationFail;
}

int run_check(const CheckArgs& a) {
  if (!a.rerun_path.empty()) {
    const json report = json::parse(read_file(a.rerun_path));
    enteq::RunConfig config =
        enteq::io::config_from_json(report.at("config"));
    config.out_path = a.config.out_path;  // --out may redirect the fresh copy
    std::optional<json> descriptor;
    if (report.contains("descriptor") && !report.at("descriptor").is_null())
      descriptor = report.at("descriptor");
    return run_check_config(std::move(config), descriptor, report);
  }

  if (!a.seed_given)
    throw enteq::ConstraintError(
        "--seed is required; runs are never seeded from the clock");

  enteq::RunConfig config = a.config;
  config.spec.region = enteq::region_from_name(a.region);

  std::optional<json> descriptor;
  if (config.equation == "assoc") {
    config.spec.k = a.k_flag;
  } else {
    if (a.descriptor_path.empty())
      throw enteq::ConstraintError(
          "a descriptor file is required for this equation");
    config.descriptor_path = a.descriptor_path;
    descriptor = json::parse(read_file(a.descriptor_path));
    // malformed descriptors surface as usage errors here; well-formed but
    // constraint-violating ones are checked anyway, with a warning
    (void)enteq::io::solution_from_json(*descriptor,
                                        enteq::io::ConstraintPolicy::Permit);
    try {
      (void)enteq::io::solution_from_json(*descriptor);
    } catch (const enteq::ConstraintError& e) {
      std::cerr << "warning: descriptor violates its normalization constraint ("
                << e.what() << "); verification is expected to fail\n";
    }
    config.spec.k = descriptor->at("k").get<std::size_t>();
  }
  return run_check_config(std::move(config), descriptor, std::nullopt);
}

struct OracleArgs {
  std::string lemma;
  std::string alpha;
  std::string coeffs;
  std::string l_coeffs;
  std::string which_case;
  double delta = 1.0;
  double b = 1.0;
  double gap = 1e-6;
  std::size_t k = 1;
  enteq::SampleSpec spec;
  bool seed_given = false;
  std::string out;
};

int run_oracle(const OracleArgs& a) {
  using enteq::MultFn;
  if (!a.seed_given)
    throw enteq::ConstraintError(
        "--seed is required; runs are never seeded from the clock");
  enteq::SampleSpec spec = a.spec;
  spec.k = a.k;

  enteq::Witness w;
  bool predicted = false;

  if (a.lemma == "mult-symmetry") {
    if (a.alpha.empty())
      throw enteq::ConstraintError("--alpha is required for mult-symmetry");
    MultFn mu = a.alpha == "zero"
                    ? MultFn::zero_map(a.k)
                    : MultFn::power(enteq::io::parse_double_list(a.alpha));
    if (mu.dim() != a.k)
      throw enteq::DimensionError("--alpha needs exactly k exponents");
    predicted = !mu.is_one() && !mu.is_zero();
    w = enteq::oracle_lemma_mult(mu, spec, a.gap);
  } else if (a.lemma == "log-symmetry") {
    if (a.coeffs.empty())
      throw enteq::ConstraintError("--coeffs is required for log-symmetry");
    enteq::LogFn l(enteq::io::parse_double_list(a.coeffs));
    if (l.dim() != a.k)
      throw enteq::DimensionError("--coeffs needs exactly k coefficients");
    predicted = !l.is_identically_zero();
    w = enteq::oracle_lemma_log(l, spec, a.gap);
  } else if (a.lemma == "normalization") {
    enteq::NormalizationParams params;
    if (!a.alpha.empty())
      params.alpha = enteq::io::parse_double_list(a.alpha);
    if (!a.l_coeffs.empty())
      params.l_coeffs = enteq::io::parse_double_list(a.l_coeffs);
    params.b = a.b;
    enteq::TriSolution::Case which;
    if (a.which_case == "projection")
      which = enteq::TriSolution::Case::Projection;
    else if (a.which_case == "one")
      which = enteq::TriSolution::Case::One;
    else if (a.which_case == "other")
      which = enteq::TriSolution::Case::Other;
    else if (a.which_case == "zero_mu")
      which = enteq::TriSolution::Case::ZeroMu;
    else
      throw enteq::ConstraintError(
          "--case must be projection, one, other or zero_mu");
    predicted = which != enteq::TriSolution::Case::ZeroMu && a.delta != 0.0;
    w = enteq::oracle_normalization(which, a.delta, spec, params);
  } else {
    throw enteq::ConstraintError(
        "--lemma must be mult-symmetry, log-symmetry or normalization");
  }

  const std::string extra =
      "\"expected_found\":" + std::string(predicted ? "true" : "false") +
      ",\"version\":" + enteq::io::json_quote(enteq::kVersion);
  write_output(enteq::io::witness_to_text(w, extra), a.out);
  std::cerr << w.claim << ": " << (w.found ? "witness found" : "no witness")
            << " (violation = " << enteq::io::format17(w.violation)
            << ", searched " << w.samples_searched << " samples)\n";
  if (w.found != predicted) {
    std::cerr << "outcome contradicts the prediction (expected "
              << (predicted ? "a witness" : "none") << ")\n";
    return kExitVerificationFail;
  }
  return kExitPass;
}

struct ClassifyArgs {
  std::string descriptor_path;
  std::size_t grid = 65;
  std::string out;
};

int run_classify(const ClassifyArgs& a) {
  const json descriptor = json::parse(read_file(a.descriptor_path));
  const enteq::TriSolution f = enteq::io::solution_from_json(
      descriptor, enteq::io::ConstraintPolicy::Permit);
  enteq::ClassifyOptions opt;
  opt.grid = a.grid;
  const enteq::Classification c = enteq::classify(f, opt);
  write_output(enteq::io::classification_to_text(c), a.out);
  std::cerr << "classified as: " << c.kind << "\n";
  return c.kind == "unclassified" ? kExitVerificationFail : kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solution families of the modified entropy equation and their "
               "numerical verification"};
  app.set_version_flag("--version", std::string(enteq::kVersion));
  app.require_subcommand(1);

  ConstructArgs ca;
  CLI::App* construct =
      app.add_subcommand("construct", "build a solution descriptor");
  construct->add_option("--case", ca.which,
                        "projection | one | other | zero_mu | shannon | expr")
      ->required();
  construct->add_option("--k", ca.k, "dimension")->required();
  construct->add_option("--base", ca.base, "logarithm base (number or 'e')");
  construct->add_option("--alpha", ca.alpha, "mu exponents, comma separated");
  construct->add_flag("--mu-zero", ca.mu_zero, "use the zero map for mu");
  construct->add_option("--l", ca.l_coeffs,
                        "log-family coefficients, comma separated");
  construct->add_option("--b", ca.b, "constant b (other case)");
  construct->add_option("--psi", ca.psi_expr, "psi as an expression over s[i]");
  auto* psi_const_opt =
      construct->add_option("--psi-const", ca.psi_const, "psi constant value");
  construct->add_option("--psi-linear", ca.psi_linear,
                        "psi linear coefficients, comma separated");
  construct->add_flag("--psi-negxlogx", ca.psi_negxlogx,
                      "psi(s) = -sum s_i log(s_i) with --base");
  construct->add_option("--expr", ca.expr, "f as an expression over x,y,z");
  construct->add_option("--out", ca.out, "output path (default stdout)");

  CheckArgs ka;
  CLI::App* check = app.add_subcommand("check", "run a residual check");
  check->add_option("descriptor", ka.descriptor_path, "solution descriptor");
  check->add_option("--rerun", ka.rerun_path,
                    "re-execute the run embedded in a report file");
  check->add_option("--equation", ka.config.equation,
                    "modified | entropy-classic | ent-special | feim | assoc "
                    "| symmetry | homogeneity");
  check->add_option("--samples", ka.config.spec.count, "sample count");
  auto* seed_opt = check->add_option("--seed", ka.config.spec.seed,
                                     "sampling seed (required)");
  check->add_option("--region", ka.region, "cone | cube");
  check->add_option("--lo", ka.config.spec.lo, "cone lower bound");
  check->add_option("--hi", ka.config.spec.hi, "cone upper bound");
  check->add_option("--atol", ka.config.tol.atol, "absolute tolerance");
  check->add_option("--rtol", ka.config.tol.rtol, "relative tolerance");
  check->add_option("--threads", ka.config.threads, "worker threads");
  check->add_option("--degree", ka.config.degree, "homogeneity degree");
  check->add_option("--A", ka.config.assoc_expr,
                    "associativity kernel over x,y (standing for u,v)");
  check->add_option("--mu", ka.config.mu_override,
                    "mu override: 'zero' or comma-separated exponents");
  check->add_option("--k", ka.k_flag, "dimension (assoc only)");
  check->add_option("--out", ka.config.out_path, "report path (default stdout)");

  OracleArgs oa;
  CLI::App* oracle = app.add_subcommand("oracle", "witness-search oracles");
  oracle->add_option("--lemma", oa.lemma,
                     "mult-symmetry | log-symmetry | normalization")
      ->required();
  oracle->add_option("--alpha", oa.alpha, "mu exponents ('zero' allowed)");
  oracle->add_option("--coeffs", oa.coeffs, "log-family coefficients");
  oracle->add_option("--l", oa.l_coeffs, "log coefficients (normalization)");
  oracle->add_option("--case", oa.which_case,
                     "projection | one | other | zero_mu (normalization)");
  oracle->add_option("--delta", oa.delta, "normalization offset");
  oracle->add_option("--b", oa.b, "constant b (normalization, other case)");
  oracle->add_option("--gap", oa.gap, "witness gap threshold");
  oracle->add_option("--k", oa.k, "dimension");
  oracle->add_option("--samples", oa.spec.count, "search budget")
      ->default_val(100);
  auto* oracle_seed = oracle->add_option("--seed", oa.spec.seed,
                                         "sampling seed (required)");
  oracle->add_option("--out", oa.out, "witness path (default stdout)");

  ClassifyArgs la;
  CLI::App* classify_cmd =
      app.add_subcommand("classify", "fit a k=1 solution to the known cases");
  classify_cmd->add_option("descriptor", la.descriptor_path, "solution descriptor")
      ->required();
  classify_cmd->add_option("--grid", la.grid, "h-grid resolution");
  classify_cmd->add_option("--out", la.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (construct->parsed()) {
      ca.psi_const_given = psi_const_opt->count() > 0;
      return run_construct(ca);
    }
    if (check->parsed()) {
      ka.seed_given = seed_opt->count() > 0;
      return run_check(ka);
    }
    if (oracle->parsed()) {
      oa.seed_given = oracle_seed->count() > 0;
      return run_oracle(oa);
    }
    ClassifyArgs args = la;
    return run_classify(args);
  } catch (const enteq::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const enteq::ParseError& e) {
    std::cerr << "expression error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const enteq::ConstraintError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const enteq::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "JSON error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
