#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "codazzi/chart.hpp"

namespace codazzi {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Manifest: a chart, its fields and sample points, and the checks to run.
// The schema is documented field by field in docs/manifest_format.md.
// ---------------------------------------------------------------------------

struct CheckSpec {
  std::string check;
  std::map<std::string, std::string> bindings;  // binding name -> field name
  double tol = 0.0;          // 0 means "use the default tolerance"
  double cluster_tol = 0.0;  // invariance only; 0 means default (1e-6)
  bool expect_fail = false;
};

struct Manifest {
  std::string name;
  int schema = 1;
  double default_tol = 0.0;  // 0 means unset
  std::shared_ptr<ChartManifold> chart;
  std::vector<CheckSpec> checks;
  std::string digest;  // fnv1a-64 of the source text
};

namespace detail {

inline std::string fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct BindingSpec {
  const char* name;
  char kind;  // 's' = sym2 (or auto), 'c' = covector
};

inline const std::map<std::string, std::vector<BindingSpec>>& check_table() {
  static const std::map<std::string, std::vector<BindingSpec>> table = {
      {"engine", {}},
      {"commutator", {{"b", 's'}}},
      {"codazzi", {{"b", 's'}}},
      {"gauged_codazzi", {{"b", 's'}, {"beta", 'c'}}},
      {"recurrent_form", {{"b", 's'}, {"beta", 'c'}}},
      {"weakly_symmetric", {{"b", 's'}, {"A", 'c'}, {"B", 'c'}, {"D", 'c'}}},
      {"harmonic_curvature", {}},
      {"weyl_closedness", {}},
      {"cyclic_identity", {{"b", 's'}}},
      {"four_term", {{"b", 's'}}},
      {"k_symmetries", {{"b", 's'}}},
      {"invariance", {{"b", 's'}}},
  };
  return table;
}

inline Expr parse_component(const json& value, const std::string& path,
                            const std::vector<std::string>& coords) {
  if (!value.is_string()) throw SchemaError(path, "expected an expression string");
  try {
    return parse_expression(value.get<std::string>(), coords);
  } catch (const ParseError& e) {
    throw SchemaError(path, std::string(e.what()) + " (byte offset " +
                                std::to_string(e.offset()) + ")");
  }
}

inline std::pair<int, int> parse_pair_key(const std::string& key, const std::string& prefix,
                                          int n, const std::string& path) {
  // keys look like g_1_2 or c_1_2, 1-based, upper triangle
  if (key.rfind(prefix + "_", 0) != 0) throw SchemaError(path, "unrecognized key '" + key + "'");
  std::string rest = key.substr(prefix.size() + 1);
  auto sep = rest.find('_');
  if (sep == std::string::npos) throw SchemaError(path, "unrecognized key '" + key + "'");
  int i = 0, j = 0;
  try {
    i = std::stoi(rest.substr(0, sep));
    j = std::stoi(rest.substr(sep + 1));
  } catch (...) {
    throw SchemaError(path, "unrecognized key '" + key + "'");
  }
  if (i < 1 || j < 1 || i > n || j > n)
    throw SchemaError(path, "index out of range in key '" + key + "'");
  if (i > j) throw SchemaError(path, "key '" + key + "' is below the diagonal; " +
                                         "only the upper triangle is accepted");
  return {i - 1, j - 1};
}

}  // namespace detail

/// Parse and fully validate a manifest: every expression parsed against the
/// declared coordinates, every check binding resolved against declared fields
/// of the right kind, every sample point metric-validated.
inline Manifest parse_manifest(const std::string& text, const std::string& fallback_name = {}) {
  json root;
  try {
    root = json::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("$", "manifest must be a JSON object");

  Manifest m;
  m.digest = detail::fnv1a64(text);
  m.schema = root.value("schema", 0);
  if (m.schema != 1) throw SchemaError("/schema", "unsupported schema version");
  m.name = root.value("name", fallback_name);

  if (!root.contains("chart") || !root["chart"].is_object())
    throw SchemaError("/chart", "missing chart object");
  const json& chart = root["chart"];
  if (!chart.contains("coordinates") || !chart["coordinates"].is_array())
    throw SchemaError("/chart/coordinates", "missing coordinate list");
  std::vector<std::string> coords;
  for (const auto& c : chart["coordinates"]) {
    if (!c.is_string()) throw SchemaError("/chart/coordinates", "coordinate names are strings");
    coords.push_back(c.get<std::string>());
  }
  int n = static_cast<int>(coords.size());
  if (chart.contains("dimension") && chart["dimension"].get<int>() != n)
    throw SchemaError("/chart/dimension", "dimension does not match the coordinate list");
  if (n < 2) throw SchemaError("/chart/coordinates", "at least two coordinates required");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coords[i] == coords[j])
        throw SchemaError("/chart/coordinates", "duplicate coordinate '" + coords[i] + "'");

  if (!root.contains("metric") || !root["metric"].is_object())
    throw SchemaError("/metric", "missing metric object");
  Tensor<Expr> g(n, 2);
  for (const auto& [key, value] : root["metric"].items()) {
    auto [i, j] = detail::parse_pair_key(key, "g", n, "/metric");
    g(i, j) = detail::parse_component(value, "/metric/" + key, coords);
  }

  auto chart_ptr = std::make_shared<ChartManifold>(m.name, coords, g);

  if (root.contains("fields")) {
    if (!root["fields"].is_object()) throw SchemaError("/fields", "expected an object");
    for (const auto& [fname, fdef] : root["fields"].items()) {
      std::string path = "/fields/" + fname;
      if (!fdef.is_object()) throw SchemaError(path, "expected an object");
      std::string kind = fdef.value("kind", "");
      if (kind != "sym2" && kind != "covector")
        throw SchemaError(path + "/kind", "kind must be 'sym2' or 'covector'");
      if (!fdef.contains("components") || !fdef["components"].is_object())
        throw SchemaError(path + "/components", "missing components object");
      if (kind == "sym2") {
        Tensor<Expr> comps(n, 2);
        for (const auto& [key, value] : fdef["components"].items()) {
          auto [i, j] = detail::parse_pair_key(key, "c", n, path + "/components");
          comps(i, j) = detail::parse_component(value, path + "/components/" + key, coords);
        }
        chart_ptr->add_sym2_field(fname, std::move(comps));
      } else {
        std::vector<Expr> comps(static_cast<std::size_t>(n), Expr::constant(0.0));
        for (const auto& [key, value] : fdef["components"].items()) {
          if (key.size() < 3 || key.rfind("c_", 0) != 0)
            throw SchemaError(path + "/components", "unrecognized key '" + key + "'");
          int i = 0;
          try {
            i = std::stoi(key.substr(2));
          } catch (...) {
            throw SchemaError(path + "/components", "unrecognized key '" + key + "'");
          }
          if (i < 1 || i > n)
            throw SchemaError(path + "/components", "index out of range in key '" + key + "'");
          comps[static_cast<std::size_t>(i - 1)] =
              detail::parse_component(value, path + "/components/" + key, coords);
        }
        chart_ptr->add_covector_field(fname, std::move(comps));
      }
    }
  }

  bool have_points = false;
  if (root.contains("points")) {
    if (!root["points"].is_object()) throw SchemaError("/points", "expected an object");
    for (const auto& [pname, pval] : root["points"].items()) {
      if (!pval.is_array() || static_cast<int>(pval.size()) != n)
        throw SchemaError("/points/" + pname, "expected an array of n coordinates");
      Vec x;
      for (const auto& v : pval) x.push_back(v.get<double>());
      chart_ptr->add_point(pname, std::move(x));
      have_points = true;
    }
  }
  if (root.contains("grids")) {
    if (!root["grids"].is_object()) throw SchemaError("/grids", "expected an object");
    for (const auto& [gname, gdef] : root["grids"].items()) {
      std::string path = "/grids/" + gname;
      for (const char* req : {"start", "stop", "count"})
        if (!gdef.contains(req) || !gdef[req].is_array() ||
            static_cast<int>(gdef[req].size()) != n)
          throw SchemaError(path, std::string("missing per-axis array '") + req + "'");
      Vec start, stop;
      std::vector<int> count;
      for (int a = 0; a < n; ++a) {
        start.push_back(gdef["start"][a].get<double>());
        stop.push_back(gdef["stop"][a].get<double>());
        count.push_back(gdef["count"][a].get<int>());
        if (count.back() < 1) throw SchemaError(path + "/count", "counts must be >= 1");
      }
      std::vector<int> idx(static_cast<std::size_t>(n), 0);
      bool more = true;
      while (more) {
        Vec x(static_cast<std::size_t>(n));
        std::string pname = gname + "[";
        for (int a = 0; a < n; ++a) {
          double t = count[a] == 1 ? 0.0
                                   : static_cast<double>(idx[a]) / (count[a] - 1);
          x[static_cast<std::size_t>(a)] = start[a] + t * (stop[a] - start[a]);
          pname += (a ? "," : "") + std::to_string(idx[a]);
        }
        pname += "]";
        chart_ptr->add_point(pname, std::move(x));
        have_points = true;
        more = false;
        for (int a = n - 1; a >= 0; --a) {
          if (++idx[a] < count[a]) {
            more = true;
            break;
          }
          idx[a] = 0;
        }
      }
    }
  }
  if (!have_points) throw SchemaError("/points", "at least one sample point is required");

  if (root.contains("tolerance")) {
    m.default_tol = root["tolerance"].get<double>();
    if (m.default_tol <= 0.0) throw SchemaError("/tolerance", "tolerance must be positive");
  }

  if (!root.contains("checks") || !root["checks"].is_array())
    throw SchemaError("/checks", "missing checks array");
  int check_index = 0;
  for (const auto& cdef : root["checks"]) {
    std::string path = "/checks/" + std::to_string(check_index++);
    if (!cdef.is_object() || !cdef.contains("check"))
      throw SchemaError(path, "each entry needs a 'check' name");
    CheckSpec spec;
    spec.check = cdef["check"].get<std::string>();
    auto it = detail::check_table().find(spec.check);
    if (it == detail::check_table().end())
      throw SchemaError(path + "/check", "unknown check '" + spec.check + "'");
    for (const auto& binding : it->second) {
      if (!cdef.contains(binding.name))
        throw SchemaError(path, "check '" + spec.check + "' requires a '" +
                                    std::string(binding.name) + "' field binding");
      std::string fname = cdef[binding.name].get<std::string>();
      if (binding.kind == 's') {
        if (chart_ptr->declared_covectors().count(fname))
          throw SchemaError(path, "check '" + spec.check + "' binding '" +
                                      std::string(binding.name) +
                                      "' needs a sym2 field, but '" + fname +
                                      "' is a covector");
        if (!chart_ptr->declared_sym2().count(fname) && fname != "ricci" && fname != "schouten")
          throw SchemaError(path, "check '" + spec.check + "' binds undeclared field '" +
                                      fname + "'");
      } else {
        if (chart_ptr->declared_sym2().count(fname) || fname == "ricci" || fname == "schouten")
          throw SchemaError(path, "check '" + spec.check + "' binding '" +
                                      std::string(binding.name) +
                                      "' needs a covector field, but '" + fname +
                                      "' is a sym2 field");
        if (!chart_ptr->declared_covectors().count(fname))
          throw SchemaError(path, "check '" + spec.check + "' binds undeclared covector '" +
                                      fname + "'");
      }
      spec.bindings[binding.name] = fname;
    }
    if (cdef.contains("tol")) {
      spec.tol = cdef["tol"].get<double>();
      if (spec.tol <= 0.0) throw SchemaError(path + "/tol", "tolerance must be positive");
    }
    if (cdef.contains("cluster_tol")) {
      spec.cluster_tol = cdef["cluster_tol"].get<double>();
      if (spec.cluster_tol <= 0.0)
        throw SchemaError(path + "/cluster_tol", "cluster tolerance must be positive");
    }
    std::string expect = cdef.value("expect", "pass");
    if (expect != "pass" && expect != "fail")
      throw SchemaError(path + "/expect", "expect must be 'pass' or 'fail'");
    spec.expect_fail = expect == "fail";
    if ((spec.check == "weyl_closedness") && n < 4)
      throw SchemaError(path, "weyl_closedness requires a chart of dimension >= 4");
    m.checks.push_back(std::move(spec));
  }

  // Finalizing builds the symbolic pipeline and validates the sample points.
  chart_ptr->finalize();
  m.chart = std::move(chart_ptr);
  return m;
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFoundError("cannot open manifest file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of("/\\"); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);
  return parse_manifest(ss.str(), name);
}

}  // namespace codazzi
