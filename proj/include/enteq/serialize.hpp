#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "enteq/classify.hpp"
#include "enteq/errors.hpp"
#include "enteq/families.hpp"
#include "enteq/psi.hpp"
#include "enteq/solutions.hpp"
#include "enteq/verifier.hpp"

namespace enteq::io {

using nlohmann::json;

/// 17 significant digits: parses back to the identical double.
inline std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string json_quote(std::string_view s) {
  return '"' + json_escape(s) + '"';
}

inline std::string double_array17(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format17(v[i]);
  }
  out += "]";
  return out;
}

inline std::string point_array17(const std::vector<std::vector<double>>& pts) {
  std::string out = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ",";
    out += double_array17(pts[i]);
  }
  out += "]";
  return out;
}

// --- function families -------------------------------------------------------

inline json mult_to_json(const MultFn& mu) {
  if (mu.is_zero()) return json{{"kind", "zero"}};
  return json{{"kind", "power"}, {"alpha", mu.exponents()}};
}

inline MultFn mult_from_json(const json& j, std::size_t k) {
  if (!j.is_object() || !j.contains("kind"))
    throw ConstraintError("mu: expected an object with a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "zero") return MultFn::zero_map(k);
  if (kind == "power") {
    auto alpha = j.at("alpha").get<std::vector<double>>();
    if (alpha.size() != k)
      throw DimensionError("mu: alpha has " + std::to_string(alpha.size()) +
                           " entries, expected " + std::to_string(k));
    return MultFn::power(std::move(alpha));
  }
  throw ConstraintError("mu: unknown kind \"" + kind + "\"");
}

inline json log_to_json(const LogFn& l) { return json{{"coeffs", l.coeffs()}}; }

inline LogFn log_from_json(const json& j, std::size_t k) {
  auto coeffs = j.at("coeffs").get<std::vector<double>>();
  if (coeffs.size() != k)
    throw DimensionError("l: coeffs has " + std::to_string(coeffs.size()) +
                         " entries, expected " + std::to_string(k));
  return LogFn(std::move(coeffs));
}

// --- psi ---------------------------------------------------------------------

inline json psi_to_json(const PsiFn& psi) {
  switch (psi.kind()) {
    case PsiFn::Kind::Const:
      return json{{"kind", "const"}, {"c", psi.const_value()}};
    case PsiFn::Kind::Linear:
      return json{{"kind", "linear"}, {"a", psi.linear_coeffs()}};
    case PsiFn::Kind::NegXLogX:
      return json{{"kind", "neg_x_log_x"}, {"base", psi.base()}};
    default:
      return json{{"kind", "expr"}, {"source", psi.source()}};
  }
}

inline PsiFn psi_from_json(const json& j, std::size_t k) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "const") return PsiFn::constant(j.at("c").get<double>());
  if (kind == "linear") {
    auto a = j.at("a").get<std::vector<double>>();
    if (a.size() != k)
      throw DimensionError("psi: linear coefficients have " +
                           std::to_string(a.size()) + " entries, expected " +
                           std::to_string(k));
    return PsiFn::linear(std::move(a));
  }
  if (kind == "neg_x_log_x")
    return PsiFn::neg_x_log_x(j.value("base", std::numbers::e));
  if (kind == "expr")
    return PsiFn::expression(j.at("source").get<std::string>(), k);
  throw ConstraintError("psi: unknown kind \"" + kind + "\"");
}

// --- solution descriptors ----------------------------------------------------

inline const char* case_name(TriSolution::Case c) {
  switch (c) {
    case TriSolution::Case::Projection: return "projection";
    case TriSolution::Case::One: return "one";
    case TriSolution::Case::Other: return "other";
    case TriSolution::Case::ZeroMu: return "zero_mu";
    case TriSolution::Case::Shannon: return "shannon";
    default: return "expr";
  }
}

inline json solution_to_json(const TriSolution& f) {
  json j;
  j["k"] = f.dim();
  j["case"] = case_name(f.kind());
  switch (f.kind()) {
    case TriSolution::Case::Projection:
      j["mu"] = mult_to_json(f.mu());
      j["l"] = log_to_json(f.l());
      j["psi"] = psi_to_json(f.psi());
      break;
    case TriSolution::Case::One:
      j["psi"] = psi_to_json(f.psi());
      break;
    case TriSolution::Case::Other:
      j["mu"] = mult_to_json(f.mu());
      j["b"] = f.b();
      j["psi"] = psi_to_json(f.psi());
      break;
    case TriSolution::Case::ZeroMu:
      j["l"] = log_to_json(f.l());
      j["psi"] = psi_to_json(f.psi());
      break;
    case TriSolution::Case::Shannon:
      j["base"] = f.shannon_base();
      break;
    default:
      j["expr"] = f.source();
      break;
  }
  return j;
}

/// Whether descriptor loading enforces the normalization constraints.
/// Construction does; the check/classify paths load permissively so that
/// defective descriptors can be diagnosed instead of rejected unseen.
enum class ConstraintPolicy { Enforce, Permit };

inline TriSolution solution_from_json(
    const json& j, ConstraintPolicy policy = ConstraintPolicy::Enforce) {
  if (!j.is_object())
    throw ConstraintError("descriptor: expected a JSON object");
  if (!j.contains("k") || !j.at("k").is_number_integer())
    throw ConstraintError("descriptor: missing integer field \"k\"");
  const auto k_signed = j.at("k").get<long long>();
  if (k_signed < 1) throw ConstraintError("descriptor: k must be >= 1");
  const auto k = static_cast<std::size_t>(k_signed);
  if (!j.contains("case") || !j.at("case").is_string())
    throw ConstraintError("descriptor: missing string field \"case\"");
  const std::string which = j.at("case").get<std::string>();
  const bool enforce = policy == ConstraintPolicy::Enforce;

  if (which == "projection") {
    MultFn mu = mult_from_json(j.at("mu"), k);
    LogFn l = log_from_json(j.at("l"), k);
    PsiFn psi = psi_from_json(j.at("psi"), k);
    return enforce ? TriSolution::case_projection(std::move(mu), std::move(l),
                                                  std::move(psi))
                   : TriSolution::unchecked_case_projection(
                         std::move(mu), std::move(l), std::move(psi));
  }
  if (which == "one") {
    PsiFn psi = psi_from_json(j.at("psi"), k);
    return enforce ? TriSolution::case_one(k, std::move(psi))
                   : TriSolution::unchecked_case_one(k, std::move(psi));
  }
  if (which == "other") {
    MultFn mu = mult_from_json(j.at("mu"), k);
    const double b = j.at("b").get<double>();
    PsiFn psi = psi_from_json(j.at("psi"), k);
    return enforce ? TriSolution::case_other(std::move(mu), b, std::move(psi))
                   : TriSolution::unchecked_case_other(std::move(mu), b,
                                                       std::move(psi));
  }
  if (which == "zero_mu") {
    LogFn l = log_from_json(j.at("l"), k);
    PsiFn psi = psi_from_json(j.at("psi"), k);
    return TriSolution::case_zero_mu(std::move(l), std::move(psi));
  }
  if (which == "shannon") {
    if (k != 1) throw ConstraintError("descriptor: shannon requires k = 1");
    return TriSolution::shannon(j.value("base", std::numbers::e));
  }
  if (which == "expr")
    return TriSolution::user_expr(j.at("expr").get<std::string>(), k);
  throw ConstraintError("descriptor: unknown case \"" + which + "\"");
}

// --- witness / classification writers ----------------------------------------

inline std::string witness_to_text(const Witness& w,
                                   const std::string& extra_fields = "") {
  std::string out = "{";
  out += "\"claim\":" + json_quote(w.claim);
  out += ",\"found\":" + std::string(w.found ? "true" : "false");
  out += ",\"point\":" + point_array17(w.point);
  out += ",\"violation\":" + format17(w.violation);
  out += ",\"samples_searched\":" + std::to_string(w.samples_searched);
  out += ",\"seed\":" + std::to_string(w.seed);
  if (!extra_fields.empty()) out += "," + extra_fields;
  out += "}";
  return out;
}

inline std::string classification_to_text(const Classification& c) {
  std::string out = "{";
  out += "\"case\":" + json_quote(c.kind);
  if (c.alpha) out += ",\"alpha\":[" + format17(*c.alpha) + "]";
  if (c.b) out += ",\"b\":" + format17(*c.b);
  if (c.log_coeff) out += ",\"log_coeff\":" + format17(*c.log_coeff);
  if (c.base) out += ",\"base\":" + format17(*c.base);
  if (c.h_constant) out += ",\"h_constant\":" + format17(*c.h_constant);
  out += ",\"fit_residual\":" + format17(c.fit_residual);
  if (!c.note.empty()) out += ",\"note\":" + json_quote(c.note);
  out += "}";
  return out;
}

inline std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    if (item.empty())
      throw ConstraintError("empty entry in numeric list \"" + text + "\"");
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    while (end && *end == ' ') ++end;
    if (!end || *end != '\0')
      throw ConstraintError("cannot parse \"" + item + "\" as a number");
    out.push_back(v);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  return out;
}

}  // namespace enteq::io
