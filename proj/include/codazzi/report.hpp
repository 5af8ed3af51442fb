#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "codazzi/residual.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// Verification reports. One record per (check, point); the record stream is
// deterministic (manifest order x point order, no timestamps), so two runs on
// the same manifest produce byte-identical record output. Wall-clock timing
// only ever appears in the human-readable rendering.
// ---------------------------------------------------------------------------

inline constexpr const char* kConventionSheet = "codazzi-conventions-1";

struct CheckRecord {
  std::string check;
  std::map<std::string, std::string> bindings;
  std::string point;
  double residual = 0.0;  // normalized; drives the verdict
  double raw = 0.0;
  double tol = 0.0;
  bool pass = false;
  bool expect_fail = false;
  nlohmann::ordered_json details;  // named sub-residuals, witnesses, flags

  bool ok() const { return pass != expect_fail; }
};

struct VerificationReport {
  std::string manifest_name;
  std::string digest;
  std::string conventions = kConventionSheet;
  int schema = 1;
  std::vector<CheckRecord> records;
  double elapsed_seconds = 0.0;

  bool all_ok() const {
    return std::all_of(records.begin(), records.end(),
                       [](const CheckRecord& r) { return r.ok(); });
  }
  int exit_code() const { return all_ok() ? 0 : 1; }

  /// Line-delimited records: a header line, one line per (check, point), and
  /// a summary line. Verdicts are recomputable from residual and tol alone.
  std::string to_records() const {
    std::string out;
    nlohmann::ordered_json header;
    header["type"] = "header";
    header["manifest"] = manifest_name;
    header["digest"] = digest;
    header["conventions"] = conventions;
    header["schema"] = schema;
    out += header.dump();
    out += '\n';
    for (const CheckRecord& r : records) {
      nlohmann::ordered_json line;
      line["type"] = "check";
      line["check"] = r.check;
      for (const auto& [k, v] : r.bindings) line[k] = v;
      line["point"] = r.point;
      line["residual"] = r.residual;
      line["raw"] = r.raw;
      line["tol"] = r.tol;
      line["pass"] = r.pass;
      line["expect"] = r.expect_fail ? "fail" : "pass";
      line["ok"] = r.ok();
      if (!r.details.is_null()) line["details"] = r.details;
      out += line.dump();
      out += '\n';
    }
    nlohmann::ordered_json summary;
    summary["type"] = "summary";
    summary["records"] = records.size();
    std::size_t bad = 0;
    for (const CheckRecord& r : records)
      if (!r.ok()) ++bad;
    summary["unexpected"] = bad;
    summary["exit"] = exit_code();
    out += summary.dump();
    out += '\n';
    return out;
  }

  static VerificationReport from_records(const std::string& text) {
    VerificationReport rep;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      if (line.empty()) continue;
      nlohmann::ordered_json j = nlohmann::ordered_json::parse(line);
      std::string type = j.value("type", "");
      if (type == "header") {
        rep.manifest_name = j.value("manifest", "");
        rep.digest = j.value("digest", "");
        rep.conventions = j.value("conventions", "");
        rep.schema = j.value("schema", 1);
      } else if (type == "check") {
        CheckRecord r;
        r.check = j.at("check").get<std::string>();
        for (const auto& [k, v] : j.items()) {
          if (k == "type" || k == "check" || k == "point" || k == "residual" || k == "raw" ||
              k == "tol" || k == "pass" || k == "expect" || k == "ok" || k == "details")
            continue;
          r.bindings[k] = v.get<std::string>();
        }
        r.point = j.at("point").get<std::string>();
        r.residual = j.at("residual").get<double>();
        r.raw = j.at("raw").get<double>();
        r.tol = j.at("tol").get<double>();
        r.pass = j.at("pass").get<bool>();
        r.expect_fail = j.value("expect", "pass") == "fail";
        if (j.contains("details")) r.details = j["details"];
        rep.records.push_back(std::move(r));
      }
    }
    return rep;
  }

  /// Human-readable table: per check, the worst point and its residual.
  std::string to_text() const {
    struct Row {
      std::string key;
      const CheckRecord* worst = nullptr;
      std::size_t points = 0;
      bool all_ok = true;
    };
    std::vector<Row> rows;
    for (const CheckRecord& r : records) {
      std::string key = r.check;
      if (!r.bindings.empty()) {
        key += "(";
        bool first = true;
        for (const auto& [k, v] : r.bindings) {
          if (!first) key += ",";
          key += v;
          first = false;
        }
        key += ")";
      }
      auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& w) { return w.key == key; });
      if (it == rows.end()) {
        rows.push_back({key, &r, 1, r.ok()});
      } else {
        ++it->points;
        it->all_ok = it->all_ok && r.ok();
        if (r.residual > it->worst->residual) it->worst = &r;
      }
    }

    char buf[256];
    std::string out;
    out += "manifest " + manifest_name + "  digest " + digest + "  (" + conventions + ")\n";
    std::snprintf(buf, sizeof(buf), "%-44s %6s %12s %10s %8s %s\n", "check", "points",
                  "worst resid", "tol", "verdict", "worst point");
    out += buf;
    for (const Row& row : rows) {
      const CheckRecord& w = *row.worst;
      std::snprintf(buf, sizeof(buf), "%-44s %6zu %12.3e %10.1e %8s %s\n", row.key.c_str(),
                    row.points, w.residual, w.tol,
                    row.all_ok ? (w.expect_fail ? "XFAIL" : "PASS") : "FAIL", w.point.c_str());
      out += buf;
    }
    std::size_t bad = 0;
    for (const CheckRecord& r : records)
      if (!r.ok()) ++bad;
    std::snprintf(buf, sizeof(buf), "%zu records, %zu unexpected, exit %d  (%.3f s)\n",
                  records.size(), bad, exit_code(), elapsed_seconds);
    out += buf;
    return out;
  }
};

}  // namespace codazzi
