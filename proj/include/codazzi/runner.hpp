#pragma once

#include <chrono>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "codazzi/manifest.hpp"
#include "codazzi/report.hpp"
#include "codazzi/structures.hpp"
#include "codazzi/theorem.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// Check dispatch: run the manifest's checks at every sample point and collect
// a deterministic report. Frames are built once per point and shared.
// ---------------------------------------------------------------------------

struct RunOptions {
  std::vector<std::string> only;  // empty = all declared checks
  double tol_override = 0.0;      // overrides the DEFAULT tolerance only
};

namespace detail {

inline double effective_tol(const CheckSpec& spec, const Manifest& m, const RunOptions& opt) {
  if (spec.tol > 0.0) return spec.tol;
  if (opt.tol_override > 0.0) return opt.tol_override;
  if (const char* env = std::getenv("CODAZZI_TOL"); env && *env) {
    double v = std::strtod(env, nullptr);
    if (v > 0.0) return v;
  }
  if (m.default_tol > 0.0) return m.default_tol;
  return kDefaultTolerance;
}

inline CheckRecord run_one(const ChartManifold& chart, const PointFrame& fr,
                           const CheckSpec& spec, double tol) {
  CheckRecord rec;
  rec.check = spec.check;
  rec.bindings = spec.bindings;
  rec.point = fr.point_name;
  rec.tol = tol;
  rec.expect_fail = spec.expect_fail;

  auto single = [&](const Residual& r) {
    rec.residual = r.normalized;
    rec.raw = r.raw;
    rec.pass = r.normalized <= tol;
  };

  if (spec.check == "engine") {
    auto residuals = frame_selftest(chart, fr, tol);
    double worst = 0.0, worst_raw = 0.0;
    bool pass = true;
    for (const NamedResidual& nr : residuals) {
      rec.details[nr.name] = nr.residual.normalized;
      if (nr.residual.normalized > worst) {
        worst = nr.residual.normalized;
        worst_raw = nr.residual.raw;
      }
      pass = pass && nr.residual.normalized <= nr.tolerance;
    }
    rec.residual = worst;
    rec.raw = worst_raw;
    rec.pass = pass;
  } else if (spec.check == "commutator") {
    single(commutator_residual(chart, spec.bindings.at("b"), fr.x));
  } else if (spec.check == "codazzi") {
    single(codazzi_residual(chart, spec.bindings.at("b"), fr.x));
  } else if (spec.check == "gauged_codazzi") {
    GaugedCodazziResult r =
        gauged_codazzi_residual(chart, spec.bindings.at("b"), spec.bindings.at("beta"), fr.x);
    rec.residual = std::max(r.gauged.normalized, r.closedness.normalized);
    rec.raw = std::max(r.gauged.raw, r.closedness.raw);
    rec.pass = r.gauged.normalized <= tol && r.closedness.normalized <= tol;
    rec.details["gauged"] = r.gauged.normalized;
    rec.details["closedness"] = r.closedness.normalized;
  } else if (spec.check == "recurrent_form") {
    single(recurrent_form_residual(chart, spec.bindings.at("b"), spec.bindings.at("beta"), fr.x));
  } else if (spec.check == "weakly_symmetric") {
    WeaklySymmetricResult r =
        weakly_symmetric_residual(chart, spec.bindings.at("b"), spec.bindings.at("A"),
                                  spec.bindings.at("B"), spec.bindings.at("D"), fr.x);
    single(r.decomposition);
    rec.details["derived_beta_closedness"] = r.derived_closedness.normalized;
    rec.details["derived_beta"] = r.derived_beta;
  } else if (spec.check == "harmonic_curvature") {
    HarmonicCurvatureResult r = harmonic_curvature_residual(chart, fr.x);
    single(r.divergence);
    rec.details["ricci_codazzi"] = r.ricci_codazzi.normalized;
    rec.details["verdicts_agree"] =
        (r.divergence.normalized <= tol) == (r.ricci_codazzi.normalized <= tol);
  } else if (spec.check == "weyl_closedness") {
    WeylClosednessResult r = weyl_form_closedness_residual(chart, fr.x);
    rec.residual = std::max(r.schouten_codazzi.normalized, r.weyl_divergence.normalized);
    rec.raw = std::max(r.schouten_codazzi.raw, r.weyl_divergence.raw);
    rec.pass = r.schouten_codazzi.normalized <= tol && r.weyl_divergence.normalized <= tol;
    rec.details["weyl_form"] = r.schouten_codazzi.normalized;
    rec.details["weyl_divergence"] = r.weyl_divergence.normalized;
    rec.details["verdicts_agree"] =
        (r.schouten_codazzi.normalized <= tol) == (r.weyl_divergence.normalized <= tol);
  } else if (spec.check == "cyclic_identity") {
    single(identity_residual(fr, spec.bindings.at("b")));
  } else if (spec.check == "four_term") {
    single(four_term_residual(fr, spec.bindings.at("b")));
  } else if (spec.check == "k_symmetries") {
    Tensor<double> k4 = build_K(fr, spec.bindings.at("b"));
    KSymmetryResiduals r = check_K_symmetries(k4);
    double worst = std::max({r.a1.normalized, r.a2.normalized, r.b.normalized,
                             r.c_first3.normalized, r.c_last3.normalized});
    double worst_raw = std::max({r.a1.raw, r.a2.raw, r.b.raw, r.c_first3.raw, r.c_last3.raw});
    rec.residual = worst;
    rec.raw = worst_raw;
    rec.pass = worst <= tol;
    rec.details["antisym_first_pair"] = r.a1.normalized;
    rec.details["antisym_last_pair"] = r.a2.normalized;
    rec.details["pair_interchange"] = r.b.normalized;
    rec.details["bianchi_first3"] = r.c_first3.normalized;
    rec.details["bianchi_last3"] = r.c_last3.normalized;
  } else if (spec.check == "invariance") {
    double ct = spec.cluster_tol > 0.0 ? spec.cluster_tol : 1e-6;
    EigenStructure eig = eigendecompose(fr, spec.bindings.at("b"), ct);
    InvarianceResult r = invariance_check(fr, eig);
    rec.residual = std::max(r.worst.normalized, r.degenerate.normalized);
    rec.raw = std::max(r.worst.raw, r.degenerate.raw);
    rec.pass = r.vacuous || rec.residual <= tol;
    rec.details["triples"] = r.triple_count;
    rec.details["degenerate_triples"] = r.degenerate_count;
    rec.details["vacuous"] = r.vacuous;
    rec.details["eigenvalues"] = eig.values;
    rec.details["clusters"] = eig.clusters;
    if (!r.vacuous) {
      rec.details["worst_witness"] = r.witness;
      rec.details["degenerate_residual"] = r.degenerate.normalized;
      // the three stacked contractions behind the verdict, at the witness
      ProofTrace pt = proof_trace(fr, eig, r.witness);
      rec.details["witness_rows"] =
          std::vector<double>{pt.row1.normalized, pt.row2.normalized, pt.row3.normalized};
      rec.details["witness_eigenvalues"] = std::vector<double>{pt.lambda, pt.mu, pt.nu};
    }
  } else {
    throw Error("unknown check '" + spec.check + "'");
  }
  return rec;
}

}  // namespace detail

inline VerificationReport run_checks(const Manifest& m, const RunOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();

  std::set<std::string> declared;
  for (const CheckSpec& c : m.checks) declared.insert(c.check);
  for (const std::string& name : opt.only)
    if (!declared.count(name))
      throw Error("--only selects check '" + name + "' which the manifest does not declare");

  VerificationReport rep;
  rep.manifest_name = m.name;
  rep.digest = m.digest;
  rep.schema = m.schema;

  std::vector<PointFrame> frames;
  frames.reserve(m.chart->points().size());
  for (const auto& [pname, x] : m.chart->points())
    frames.push_back(build_frame(*m.chart, x, pname));

  for (const CheckSpec& spec : m.checks) {
    if (!opt.only.empty() &&
        std::find(opt.only.begin(), opt.only.end(), spec.check) == opt.only.end())
      continue;
    double tol = detail::effective_tol(spec, m, opt);
    for (const PointFrame& fr : frames) rep.records.push_back(detail::run_one(*m.chart, fr, spec, tol));
  }

  rep.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace codazzi
