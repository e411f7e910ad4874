#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtwist/error.hpp"
#include "qtwist/format.hpp"
#include "qtwist/spec.hpp"
#include "qtwist/verify.hpp"

namespace qtwist::io {

using json = nlohmann::json;

namespace detail {

inline Scalar rational_field(const json& v, const std::string& path) {
  if (v.is_number_integer()) return Scalar(v.dump());
  if (v.is_string()) {
    if (auto q = parse_rational(v.get<std::string>())) return *q;
    throw parse_error(path, 0, "malformed rational '" + v.get<std::string>() + "'");
  }
  throw parse_error(path, 0, "expected an integer or a \"p/q\" string, got " + std::string(v.type_name()));
}

inline const json& array_field(const json& v, const std::string& path, std::size_t expected) {
  if (!v.is_array()) throw parse_error(path, 0, "expected an array");
  if (v.size() != expected)
    throw parse_error(path, 0,
                      "dimension mismatch: expected " + std::to_string(expected) + " entries, got " +
                          std::to_string(v.size()));
  return v;
}

inline std::size_t dimension_field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw parse_error(key, 0, "missing field");
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() <= 0 || v.get<long long>() > 24)
    throw parse_error(key, 0, "expected a positive integer no larger than 24");
  return static_cast<std::size_t>(v.get<long long>());
}

inline RationalMatrix matrix_field(const json& v, const std::string& path, std::size_t rows, std::size_t cols) {
  array_field(v, path, rows);
  RationalMatrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    array_field(v[i], p, cols);
    for (std::size_t j = 0; j < cols; ++j) M(i, j) = rational_field(v[i][j], p + "[" + std::to_string(j) + "]");
  }
  return M;
}

inline json matrix_json(const RationalMatrix& M) {
  json a = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) row.push_back(to_string(M(i, j)));
    a.push_back(row);
  }
  return a;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace detail

/// Spec document -> AlgebraSpec. Field errors name a JSON path such as
/// "B[1][0][2]".
inline AlgebraSpec spec_from_json(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw parse_error("", 0, "spec document must be a JSON object");
  for (const char* key : {"name", "m", "n", "B", "r", "order"})
    if (!doc.contains(key)) throw parse_error(key, 0, "missing field");
  static const std::vector<std::string> known = {"name", "m", "n", "generator_names", "B", "r",
                                                 "xi", "order", "alpha", "metadata"};
  for (const auto& [k, v] : doc.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw parse_error(k, 0, "unknown field");

  AlgebraSpec s;
  if (!doc["name"].is_string()) throw parse_error("name", 0, "expected a string");
  s.name = doc["name"].get<std::string>();
  s.m = dimension_field(doc, "m");
  s.n = dimension_field(doc, "n");
  if (s.m != s.n) throw parse_error("n", 0, "dimension mismatch: m and n must be equal");

  if (doc.contains("generator_names")) {
    const json& g = array_field(doc["generator_names"], "generator_names", s.m + s.n);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_string() || g[i].get<std::string>().empty())
        throw parse_error("generator_names[" + std::to_string(i) + "]", 0, "expected a non-empty string");
      s.generator_names.push_back(g[i].get<std::string>());
    }
  }

  s.B = StructureTensor(s.m, s.n);
  array_field(doc["B"], "B", s.m);
  for (std::size_t i = 0; i < s.m; ++i) {
    const RationalMatrix slice = matrix_field(doc["B"][i], "B[" + std::to_string(i) + "]", s.m, s.n);
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t mu = 0; mu < s.n; ++mu) s.B(i, j, mu) = slice(j, mu);
  }
  s.r = matrix_field(doc["r"], "r", s.m, s.n);

  if (doc.contains("xi")) {
    const json& x = array_field(doc["xi"], "xi", s.n);
    std::vector<Scalar> xi;
    for (std::size_t i = 0; i < s.n; ++i) xi.push_back(rational_field(x[i], "xi[" + std::to_string(i) + "]"));
    s.xi = xi;
  }

  const json& o = doc["order"];
  if (!o.is_number_integer() || o.get<long long>() < 0 || o.get<long long>() > 64)
    throw parse_error("order", 0, "expected an integer in 0..64");
  s.order = static_cast<int>(o.get<long long>());

  if (doc.contains("alpha")) {
    array_field(doc["alpha"], "alpha", s.m);
    std::vector<RationalMatrix> alpha;
    for (std::size_t i = 0; i < s.m; ++i)
      alpha.push_back(matrix_field(doc["alpha"][i], "alpha[" + std::to_string(i) + "]", s.n, s.n));
    s.alpha_reference = alpha;
  }
  if (doc.contains("metadata")) {
    if (!doc["metadata"].is_object()) throw parse_error("metadata", 0, "expected an object of strings");
    for (const auto& [k, v] : doc["metadata"].items()) {
      if (!v.is_string()) throw parse_error("metadata." + k, 0, "expected a string");
      s.metadata[k] = v.get<std::string>();
    }
  }
  return s;
}

inline AlgebraSpec parse_spec_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw parse_error("", detail::line_of(text, e.byte), e.what());
  }
  return spec_from_json(doc);
}

inline AlgebraSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("", 0, "cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str());
}

inline json spec_to_json(const AlgebraSpec& s) {
  json doc;
  doc["name"] = s.name;
  doc["m"] = s.m;
  doc["n"] = s.n;
  if (!s.generator_names.empty()) doc["generator_names"] = s.generator_names;
  json B = json::array();
  for (std::size_t i = 0; i < s.m; ++i) {
    RationalMatrix slice(s.m, s.n);
    for (std::size_t j = 0; j < s.m; ++j)
      for (std::size_t mu = 0; mu < s.n; ++mu) slice(j, mu) = s.B(i, j, mu);
    B.push_back(detail::matrix_json(slice));
  }
  doc["B"] = B;
  doc["r"] = detail::matrix_json(s.r);
  if (s.xi) {
    json x = json::array();
    for (const auto& v : *s.xi) x.push_back(to_string(v));
    doc["xi"] = x;
  }
  doc["order"] = s.order;
  if (s.alpha_reference) {
    json a = json::array();
    for (const auto& M : *s.alpha_reference) a.push_back(detail::matrix_json(M));
    doc["alpha"] = a;
  }
  if (!s.metadata.empty()) doc["metadata"] = s.metadata;
  return doc;
}

namespace detail {

// Like json::dump(2), but arrays of scalars stay on one line.
inline void compact_dump(const json& v, int depth, std::string& out) {
  const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
  if (v.is_object() && !v.empty()) {
    out += "{\n";
    bool first = true;
    for (const auto& [key, item] : v.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + json(key).dump() + ": ";
      compact_dump(item, depth + 1, out);
    }
    out += "\n" + close + "}";
  } else if (v.is_array() && !v.empty() && (v.front().is_array() || v.front().is_object())) {
    out += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ",\n";
      out += pad;
      compact_dump(v[i], depth + 1, out);
    }
    out += "\n" + close + "]";
  } else if (v.is_array()) {
    out += "[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].dump();
    out += "]";
  } else {
    out += v.dump();
  }
}

}  // namespace detail

inline std::string render_spec(const AlgebraSpec& s) {
  std::string out;
  detail::compact_dump(spec_to_json(s), 0, out);
  return out + "\n";
}

/// Machine-readable report. Keys are sorted; elapsed times are included only
/// on request because they differ between runs.
inline json report_to_json(const CheckReport& r, bool include_timing = false) {
  json doc;
  doc["spec"] = r.spec_name;
  doc["order"] = r.order;
  doc["overall"] = r.overall() ? "pass" : "fail";
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j;
    j["name"] = c.name;
    j["status"] = c.pass ? "pass" : "fail";
    j["residual_terms"] = c.residual_terms;
    j["max_order"] = c.max_order;
    if (include_timing) j["elapsed_ms"] = static_cast<long long>(c.elapsed_ms + 0.5);
    if (c.witness) j["witness"] = *c.witness;
    checks.push_back(j);
  }
  doc["checks"] = checks;
  return doc;
}

inline std::string render_report_machine(const CheckReport& r, bool include_timing = false) {
  return report_to_json(r, include_timing).dump(2) + "\n";
}

inline std::string render_report_text(const CheckReport& r) {
  std::ostringstream out;
  out << "spec " << r.spec_name << ", order " << r.order << "\n";
  for (const auto& c : r.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual_terms=" << c.residual_terms;
    out << "  (" << static_cast<long long>(c.elapsed_ms + 0.5) << " ms)";
    if (c.witness) out << "\n     witness: " << *c.witness;
    out << "\n";
  }
  out << "overall: " << (r.overall() ? "pass" : "fail") << "\n";
  return out.str();
}

inline std::string render_validation_text(const ValidationReport& rep) {
  std::ostringstream out;
  for (const auto& c : rep.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.pass) out << "  violations=" << c.violations << "  witness: " << c.witness;
    out << "\n";
  }
  out << "overall: " << (rep.passed() ? "pass" : "fail") << "\n";
  return out.str();
}

template <std::size_t L>
json tensor_to_json(const Tensor<L>& t) {
  json terms = json::array();
  const auto& alg = t.alg();
  for (const auto& [k, c] : t.terms()) {
    json legs = json::array();
    for (std::size_t l = 0; l < L; ++l) legs.push_back(format_monomial(alg, k.exps.data() + l * alg.width()));
    terms.push_back(json{{"power", k.power}, {"coeff", to_string(c)}, {"legs", legs}});
  }
  return terms;
}

}  // namespace qtwist::io
