#pragma once

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "codazzi/manifest.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// Built-in fixture catalog. Each entry is the exact text `catalog emit`
// writes, and parse_manifest on that text is how the fixture is loaded, so
// emitted files and in-process fixtures cannot drift apart.
// ---------------------------------------------------------------------------

namespace catalog_detail {

inline const std::map<std::string, const char*>& table() {
  static const std::map<std::string, const char*> entries = {

      {"flat_r2", R"json({
  "schema": 1,
  "name": "flat_r2",
  "description": "Euclidean plane; positive and negative structure fixtures",
  "chart": {"dimension": 2, "coordinates": ["x", "y"]},
  "metric": {"g_1_1": "1", "g_2_2": "1"},
  "fields": {
    "bxx": {"kind": "sym2", "components": {"c_1_1": "x", "c_2_2": "x"}},
    "b2g": {"kind": "sym2", "components": {"c_1_1": "2", "c_2_2": "2"}},
    "beta_bad": {"kind": "covector", "components": {"c_1": "y"}}
  },
  "points": {
    "p1": [0.3, 0.4],
    "p2": [1.3, 0.2],
    "p3": [-0.7, 1.1],
    "p4": [0.9, -0.8],
    "p5": [2.0, 1.5]
  },
  "checks": [
    {"check": "engine"},
    {"check": "codazzi", "b": "b2g"},
    {"check": "cyclic_identity", "b": "bxx"},
    {"check": "commutator", "b": "bxx"},
    {"check": "codazzi", "b": "bxx", "expect": "fail"},
    {"check": "gauged_codazzi", "b": "b2g", "beta": "beta_bad", "expect": "fail"}
  ]
})json"},

      {"flat_r4", R"json({
  "schema": 1,
  "name": "flat_r4",
  "description": "Euclidean 4-space with a polynomial field and a constant diagonal field",
  "chart": {"dimension": 4, "coordinates": ["x1", "x2", "x3", "x4"]},
  "metric": {"g_1_1": "1", "g_2_2": "1", "g_3_3": "1", "g_4_4": "1"},
  "fields": {
    "bpoly": {"kind": "sym2", "components": {
      "c_1_1": "1 + x1^2", "c_1_2": "x1*x2", "c_1_3": "0.5*x3",
      "c_2_2": "2 + x2^2", "c_2_4": "0.3*x4",
      "c_3_3": "1 + x3*x4", "c_4_4": "3"}},
    "bconst": {"kind": "sym2", "components": {
      "c_1_1": "1", "c_2_2": "2", "c_3_3": "3", "c_4_4": "4"}}
  },
  "points": {
    "p1": [0.5, 0.3, -0.8, 1.0],
    "p2": [1.1, -0.4, 0.6, 0.2],
    "p3": [-0.7, 0.9, 1.3, -0.5],
    "p4": [0.8, 1.5, -0.2, 0.7],
    "p5": [1.4, 0.1, 0.9, -1.1]
  },
  "checks": [
    {"check": "engine"},
    {"check": "commutator", "b": "bpoly"},
    {"check": "cyclic_identity", "b": "bpoly"},
    {"check": "four_term", "b": "bpoly"},
    {"check": "k_symmetries", "b": "bpoly"},
    {"check": "codazzi", "b": "bconst"},
    {"check": "cyclic_identity", "b": "bconst"},
    {"check": "invariance", "b": "bconst"},
    {"check": "codazzi", "b": "bpoly", "expect": "fail"}
  ]
})json"},

      {"s2_round", R"json({
  "schema": 1,
  "name": "s2_round",
  "description": "Unit round 2-sphere in polar coordinates",
  "chart": {"dimension": 2, "coordinates": ["th", "ph"]},
  "metric": {"g_1_1": "1", "g_2_2": "sin(th)^2"},
  "fields": {
    "bgen": {"kind": "sym2", "components": {
      "c_1_1": "1 + th^2", "c_1_2": "0.3*th*ph", "c_2_2": "sin(th)^2 + 2"}}
  },
  "points": {
    "p1": [0.7, 0.4],
    "p2": [1.1, 1.9],
    "p3": [1.6, -0.8],
    "p4": [2.1, 3.0],
    "p5": [0.9, 5.2]
  },
  "checks": [
    {"check": "engine"},
    {"check": "codazzi", "b": "ricci"},
    {"check": "cyclic_identity", "b": "ricci"},
    {"check": "four_term", "b": "ricci"},
    {"check": "k_symmetries", "b": "ricci"},
    {"check": "invariance", "b": "ricci"},
    {"check": "harmonic_curvature"},
    {"check": "commutator", "b": "bgen"}
  ]
})json"},

      {"s3_round", R"json({
  "schema": 1,
  "name": "s3_round",
  "description": "Unit round 3-sphere in hyperspherical coordinates",
  "chart": {"dimension": 3, "coordinates": ["ch", "th", "ph"]},
  "metric": {"g_1_1": "1", "g_2_2": "sin(ch)^2", "g_3_3": "sin(ch)^2 * sin(th)^2"},
  "points": {
    "p1": [1.1, 0.9, 0.5],
    "p2": [0.8, 1.3, 2.0],
    "p3": [1.7, 0.7, 4.1],
    "p4": [2.2, 1.8, 1.2],
    "p5": [1.4, 2.2, -0.6]
  },
  "checks": [
    {"check": "engine"},
    {"check": "codazzi", "b": "ricci"},
    {"check": "cyclic_identity", "b": "ricci"},
    {"check": "four_term", "b": "ricci"},
    {"check": "k_symmetries", "b": "ricci"},
    {"check": "harmonic_curvature"},
    {"check": "commutator", "b": "ricci"}
  ]
})json"},

      {"hyperbolic2", R"json({
  "schema": 1,
  "name": "hyperbolic2",
  "description": "Hyperbolic plane, upper half-plane model",
  "chart": {"dimension": 2, "coordinates": ["x", "y"]},
  "metric": {"g_1_1": "1 / y^2", "g_2_2": "1 / y^2"},
  "fields": {
    "bgen": {"kind": "sym2", "components": {
      "c_1_1": "1 + x^2", "c_1_2": "0.2*x*y", "c_2_2": "2 + y^2"}}
  },
  "points": {
    "p1": [0.3, 0.8],
    "p2": [1.2, 1.5],
    "p3": [-0.7, 0.9],
    "p4": [0.5, 2.2],
    "p5": [2.0, 1.1]
  },
  "checks": [
    {"check": "engine"},
    {"check": "codazzi", "b": "ricci"},
    {"check": "cyclic_identity", "b": "ricci"},
    {"check": "k_symmetries", "b": "ricci"},
    {"check": "harmonic_curvature"},
    {"check": "commutator", "b": "bgen"}
  ]
})json"},

      {"s2xs2", R"json({
  "schema": 1,
  "name": "s2xs2",
  "description": "Product of round spheres S2(1) x S2(2); two Ricci eigenvalue clusters",
  "chart": {"dimension": 4, "coordinates": ["th1", "ph1", "th2", "ph2"]},
  "metric": {"g_1_1": "1", "g_2_2": "sin(th1)^2", "g_3_3": "4", "g_4_4": "4 * sin(th2)^2"},
  "fields": {
    "bgen": {"kind": "sym2", "components": {
      "c_1_1": "1 + th1^2", "c_1_3": "0.2*th1*th2",
      "c_2_2": "2 + sin(th1)^2", "c_3_3": "1 + 0.5*th2", "c_4_4": "3"}}
  },
  "points": {
    "p1": [0.9, 0.4, 1.2, 0.7],
    "p2": [1.4, 2.1, 0.8, 1.9],
    "p3": [0.7, 5.0, 1.9, 0.3],
    "p4": [2.0, 1.1, 1.5, 4.2],
    "p5": [1.1, 3.3, 2.3, 2.6]
  },
  "checks": [
    {"check": "engine"},
    {"check": "codazzi", "b": "ricci"},
    {"check": "cyclic_identity", "b": "ricci"},
    {"check": "four_term", "b": "ricci"},
    {"check": "k_symmetries", "b": "ricci"},
    {"check": "invariance", "b": "ricci"},
    {"check": "harmonic_curvature"},
    {"check": "weyl_closedness"},
    {"check": "commutator", "b": "bgen"}
  ]
})json"},

      {"warped4d", R"json({
  "schema": 1,
  "name": "warped4d",
  "description": "Warped product dt^2 + f(t)^2 (dx^2 + dy^2 + dz^2), f = 1 + t^2/4; conformally flat but not curvature-harmonic",
  "chart": {"dimension": 4, "coordinates": ["t", "x", "y", "z"]},
  "metric": {
    "g_1_1": "1",
    "g_2_2": "(1 + t^2/4)^2",
    "g_3_3": "(1 + t^2/4)^2",
    "g_4_4": "(1 + t^2/4)^2"
  },
  "fields": {
    "b2g": {"kind": "sym2", "components": {
      "c_1_1": "2",
      "c_2_2": "2 * (1 + t^2/4)^2",
      "c_3_3": "2 * (1 + t^2/4)^2",
      "c_4_4": "2 * (1 + t^2/4)^2"}}
  },
  "points": {
    "p1": [0.8, 0.3, -0.4, 1.1],
    "p2": [0.4, 1.0, 0.5, -0.3],
    "p3": [1.5, -0.6, 0.9, 0.4],
    "p4": [-0.9, 0.7, 1.3, 2.0],
    "p5": [0.6, -1.2, 0.1, 0.8]
  },
  "checks": [
    {"check": "engine"},
    {"check": "codazzi", "b": "b2g"},
    {"check": "cyclic_identity", "b": "b2g"},
    {"check": "commutator", "b": "b2g"},
    {"check": "weyl_closedness"},
    {"check": "harmonic_curvature", "expect": "fail"}
  ]
})json"},

      {"bump4d", R"json({
  "schema": 1,
  "name": "bump4d",
  "description": "Flat metric with a cubic bump in dx2^2; negative fixture for the structure checks",
  "chart": {"dimension": 4, "coordinates": ["x1", "x2", "x3", "x4"]},
  "metric": {"g_1_1": "1", "g_2_2": "1 + 0.1*(x1 + x3)^3", "g_3_3": "1", "g_4_4": "1"},
  "fields": {
    "bdiag": {"kind": "sym2", "components": {
      "c_1_1": "1", "c_2_2": "2", "c_3_3": "3", "c_4_4": "4"}}
  },
  "points": {
    "p1": [1.0, 0.5, 0.8, -0.3],
    "p2": [0.8, -0.4, 1.1, 0.6],
    "p3": [1.2, 0.9, 0.5, 1.4],
    "p4": [0.6, 1.5, 1.3, -0.9],
    "p5": [1.4, -1.0, 0.7, 0.2]
  },
  "checks": [
    {"check": "engine"},
    {"check": "commutator", "b": "bdiag"},
    {"check": "codazzi", "b": "ricci", "expect": "fail"},
    {"check": "harmonic_curvature", "expect": "fail"},
    {"check": "weyl_closedness", "expect": "fail"},
    {"check": "cyclic_identity", "b": "bdiag", "expect": "fail"},
    {"check": "four_term", "b": "bdiag", "expect": "fail"},
    {"check": "k_symmetries", "b": "bdiag", "expect": "fail"}
  ]
})json"},

      {"gauged_exp", R"json({
  "schema": 1,
  "name": "gauged_exp",
  "description": "Conformally scaled parallel field b = exp(x1) g with exact gauge beta = d(x1)",
  "chart": {"dimension": 4, "coordinates": ["x1", "x2", "x3", "x4"]},
  "metric": {"g_1_1": "1", "g_2_2": "1", "g_3_3": "1", "g_4_4": "1"},
  "fields": {
    "bexp": {"kind": "sym2", "components": {
      "c_1_1": "exp(x1)", "c_2_2": "exp(x1)", "c_3_3": "exp(x1)", "c_4_4": "exp(x1)"}},
    "beta": {"kind": "covector", "components": {"c_1": "1"}},
    "beta_bad": {"kind": "covector", "components": {"c_1": "x2"}}
  },
  "points": {
    "p1": [0.4, -0.2, 0.9, 0.1],
    "p2": [0.0, 1.1, -0.5, 0.7],
    "p3": [1.2, 0.3, 0.6, -0.8],
    "p4": [-0.6, 0.8, 1.4, 0.5],
    "p5": [0.9, -1.0, 0.2, 1.3]
  },
  "checks": [
    {"check": "engine"},
    {"check": "gauged_codazzi", "b": "bexp", "beta": "beta"},
    {"check": "recurrent_form", "b": "bexp", "beta": "beta"},
    {"check": "cyclic_identity", "b": "bexp"},
    {"check": "commutator", "b": "bexp"},
    {"check": "gauged_codazzi", "b": "bexp", "beta": "beta_bad", "expect": "fail"}
  ]
})json"},

      {"recurrence_flat", R"json({
  "schema": 1,
  "name": "recurrence_flat",
  "description": "Ordinary recurrence nabla b = beta (x) b on the flat plane; also the weakly-symmetric fixture with A = beta, B = D = 0",
  "chart": {"dimension": 2, "coordinates": ["x", "y"]},
  "metric": {"g_1_1": "1", "g_2_2": "1"},
  "fields": {
    "brec": {"kind": "sym2", "components": {"c_1_1": "exp(x)", "c_2_2": "exp(x)"}},
    "beta": {"kind": "covector", "components": {"c_1": "1"}},
    "zero": {"kind": "covector", "components": {}}
  },
  "points": {
    "p1": [0.7, -0.4],
    "p2": [0.0, 1.2],
    "p3": [1.1, 0.5],
    "p4": [-0.8, 0.3],
    "p5": [0.4, 2.0]
  },
  "checks": [
    {"check": "engine"},
    {"check": "recurrent_form", "b": "brec", "beta": "beta", "tol": 1e-10},
    {"check": "weakly_symmetric", "b": "brec", "A": "beta", "B": "zero", "D": "zero", "tol": 1e-10},
    {"check": "gauged_codazzi", "b": "brec", "beta": "beta"},
    {"check": "commutator", "b": "brec"},
    {"check": "codazzi", "b": "brec", "expect": "fail"}
  ]
})json"},
  };
  return entries;
}

}  // namespace catalog_detail

inline std::vector<std::string> catalog_list() {
  std::vector<std::string> names;
  for (const auto& [name, text] : catalog_detail::table()) names.push_back(name);
  return names;
}

inline std::string catalog_text(const std::string& name) {
  auto it = catalog_detail::table().find(name);
  if (it == catalog_detail::table().end())
    throw NotFoundError("no catalog manifest named '" + name + "'");
  return it->second;
}

inline Manifest catalog_manifest(const std::string& name) {
  return parse_manifest(catalog_text(name), name);
}

inline void catalog_emit(const std::string& name, const std::string& path) {
  const std::string text = catalog_text(name);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write to '" + path + "'");
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

}  // namespace codazzi
