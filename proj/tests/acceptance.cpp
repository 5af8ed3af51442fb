// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Everything runs against the built-in catalog at the stated tolerances.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "codazzi/catalog.hpp"
#include "codazzi/runner.hpp"
#include "codazzi/structures.hpp"
#include "codazzi/theorem.hpp"

using namespace codazzi;

namespace {

int failures = 0;
std::vector<std::string> notes;

void report(int num, const char* name, bool pass, const std::string& detail = {}) {
  std::printf("[%2d/10] %s  %s%s%s\n", num, pass ? "PASS" : "FAIL", name,
              detail.empty() ? "" : "  -- ", detail.c_str());
  if (!pass) ++failures;
}

struct Catalog {
  std::vector<Manifest> manifests;
  Manifest& by_name(const std::string& name) {
    for (Manifest& m : manifests)
      if (m.name == name) return m;
    throw NotFoundError("no manifest " + name);
  }
};

double rand01(std::uint32_t& state) {
  state = state * 1664525u + 1013904223u;
  return (state >> 5) * (1.0 / 134217728.0);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  Catalog cat;
  for (const std::string& name : catalog_list()) cat.manifests.push_back(catalog_manifest(name));

  std::vector<std::vector<PointFrame>> frames(cat.manifests.size());
  for (std::size_t i = 0; i < cat.manifests.size(); ++i)
    for (const auto& [pname, x] : cat.manifests[i].chart->points())
      frames[i].push_back(build_frame(*cat.manifests[i].chart, x, pname));

  // 1. Engine self-tests on every catalog manifold at every sample point:
  //    metric compatibility, Riemann symmetries, first Bianchi, Weyl
  //    trace-freeness, contracted second Bianchi, residuals <= 1e-8.
  {
    bool pass = cat.manifests.size() >= 10;
    std::string detail;
    for (std::size_t i = 0; i < cat.manifests.size(); ++i) {
      const Manifest& m = cat.manifests[i];
      if (m.chart->points().size() < 5) {
        pass = false;
        detail = m.name + " has fewer than 5 points";
      }
      for (const PointFrame& fr : frames[i])
        for (const NamedResidual& nr : frame_selftest(*m.chart, fr, 1e-8))
          if (nr.residual.normalized > nr.tolerance) {
            pass = false;
            detail = m.name + "/" + fr.point_name + "/" + nr.name;
          }
    }
    report(1, "engine self-tests on all catalog manifolds", pass, detail);
  }

  // 2. Commutator identity for every (manifold, sym2 field) pair at every
  //    point, residual <= 1e-8. This is what pins the sign convention.
  {
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < cat.manifests.size(); ++i) {
      const Manifest& m = cat.manifests[i];
      std::vector<std::string> fields{"ricci"};
      for (const auto& [fname, f] : m.chart->declared_sym2()) fields.push_back(fname);
      for (const std::string& fname : fields)
        for (const auto& [pname, x] : m.chart->points()) {
          double r = commutator_residual(*m.chart, fname, x).normalized;
          if (r > 1e-8) {
            pass = false;
            detail = m.name + "/" + fname + "/" + pname;
          }
        }
    }
    report(2, "commutator identity pins the curvature convention", pass, detail);
  }

  // 3. Codazzi fixtures satisfy the cyclic identity: codazzi residual <= 1e-9
  //    implies identity residual <= 1e-7.
  const std::vector<std::pair<std::string, std::string>> codazzi_pairs = {
      {"s3_round", "ricci"}, {"s2xs2", "ricci"}, {"flat_r4", "bconst"}, {"warped4d", "b2g"}};
  {
    bool pass = true;
    std::string detail;
    for (const auto& [mname, fname] : codazzi_pairs) {
      std::size_t idx = 0;
      for (; idx < cat.manifests.size(); ++idx)
        if (cat.manifests[idx].name == mname) break;
      const Manifest& m = cat.manifests[idx];
      for (std::size_t p = 0; p < frames[idx].size(); ++p) {
        double cod = codazzi_residual(*m.chart, fname, frames[idx][p].x).normalized;
        double idr = identity_residual(frames[idx][p], fname).normalized;
        if (cod > 1e-9 || idr > 1e-7) {
          pass = false;
          detail = mname + "+" + fname + ": codazzi=" + detail::format_double(cod) +
                   " identity=" + detail::format_double(idr);
        }
      }
    }
    report(3, "Codazzi fixtures satisfy the cyclic identity", pass, detail);
  }

  // 4. Gauged fixture: gauged-Codazzi and closedness residuals <= 1e-9 and
  //    identity residual <= 1e-7; a non-closed gauge flips the verdict.
  {
    bool pass = true;
    std::string detail;
    std::size_t idx = 0;
    for (; idx < cat.manifests.size(); ++idx)
      if (cat.manifests[idx].name == "gauged_exp") break;
    const Manifest& m = cat.manifests[idx];
    for (std::size_t p = 0; p < frames[idx].size(); ++p) {
      const Vec& x = frames[idx][p].x;
      GaugedCodazziResult good = gauged_codazzi_residual(*m.chart, "bexp", "beta", x);
      double idr = identity_residual(frames[idx][p], "bexp").normalized;
      if (good.gauged.normalized > 1e-9 || good.closedness.normalized > 1e-9 || idr > 1e-7) {
        pass = false;
        detail = "positive fixture failed at " + frames[idx][p].point_name;
      }
      GaugedCodazziResult bad = gauged_codazzi_residual(*m.chart, "bexp", "beta_bad", x);
      if (bad.closedness.normalized <= 1e-9) {
        pass = false;
        detail = "non-closed gauge not detected at " + frames[idx][p].point_name;
      }
    }
    report(4, "gauged Codazzi fixture, with closedness verdict flip", pass, detail);
  }

  // 5. Generalized curvature: every criterion-3 fixture has all five K
  //    symmetry residuals <= 1e-7; on bump4d with a constant diagonal field
  //    the antisymmetries hold to 1e-10 while the first Bianchi of K fails.
  {
    bool pass = true;
    std::string detail;
    for (const auto& [mname, fname] : codazzi_pairs) {
      std::size_t idx = 0;
      for (; idx < cat.manifests.size(); ++idx)
        if (cat.manifests[idx].name == mname) break;
      for (const PointFrame& fr : frames[idx]) {
        KSymmetryResiduals r = check_K_symmetries(build_K(fr, fname));
        double worst = std::max({r.a1.normalized, r.a2.normalized, r.b.normalized,
                                 r.c_first3.normalized, r.c_last3.normalized});
        if (worst > 1e-7) {
          pass = false;
          detail = mname + "+" + fname + " worst=" + detail::format_double(worst);
        }
      }
    }
    std::size_t bidx = 0;
    for (; bidx < cat.manifests.size(); ++bidx)
      if (cat.manifests[bidx].name == "bump4d") break;
    for (const PointFrame& fr : frames[bidx]) {
      KSymmetryResiduals r = check_K_symmetries(build_K(fr, "bdiag"));
      if (r.a1.normalized > 1e-10 || r.a2.normalized > 1e-10) {
        pass = false;
        detail = "bump4d antisymmetries out of tolerance";
      }
      if (r.c_first3.normalized <= 1e-3) {
        pass = false;
        detail = "bump4d first-Bianchi violation not detected";
      }
    }
    report(5, "generalized curvature symmetries, incl. the negative fixture", pass, detail);
  }

  // 6. Invariance on the two-cluster product: every admissible triple
  //    contraction <= 1e-8, including the degenerate branch, with a
  //    non-vacuous triple count.
  {
    bool pass = true;
    std::string detail;
    std::size_t idx = 0;
    for (; idx < cat.manifests.size(); ++idx)
      if (cat.manifests[idx].name == "s2xs2") break;
    for (const PointFrame& fr : frames[idx]) {
      EigenStructure eig = eigendecompose(fr, "ricci");
      InvarianceResult r = invariance_check(fr, eig);
      if (eig.clusters.size() != 2 || r.triple_count <= 0 || r.degenerate_count <= 0 ||
          r.worst.normalized > 1e-8 || r.degenerate.normalized > 1e-8) {
        pass = false;
        detail = fr.point_name + ": triples=" + std::to_string(r.triple_count) +
                 " worst=" + detail::format_double(r.worst.normalized);
      }
    }
    report(6, "eigenplane invariance on the eigenvalue-cluster product", pass, detail);
  }

  // 7. The 3x3 eigenvalue system: cofactor determinant equals the factored
  //    form for 1000 random triples to 1e-10 relative; (1,2,3) gives 2.
  {
    bool pass = true;
    std::string detail;
    VandermondeSystem unit = vandermonde_system(1.0, 2.0, 3.0);
    if (std::fabs(unit.det_cofactor - 2.0) > 1e-12 || std::fabs(unit.det_factored - 2.0) > 1e-12) {
      pass = false;
      detail = "triple (1,2,3)";
    }
    std::uint32_t state = 123456789u;
    for (int i = 0; i < 1000; ++i) {
      double l = 20.0 * rand01(state) - 10.0;
      double m = 20.0 * rand01(state) - 10.0;
      double n = 20.0 * rand01(state) - 10.0;
      VandermondeSystem v = vandermonde_system(l, m, n);
      if (std::fabs(v.det_cofactor - v.det_factored) >
          1e-10 * std::max(1.0, std::fabs(v.det_factored))) {
        pass = false;
        detail = "random triple " + std::to_string(i);
      }
    }
    report(7, "eigenvalue-system determinant factorization", pass, detail);
  }

  // 8. Recurrence and weak symmetry fixtures at 1e-10; the harmonic-curvature
  //    equivalence agrees in verdict on every catalog manifold.
  {
    bool pass = true;
    std::string detail;
    std::size_t idx = 0;
    for (; idx < cat.manifests.size(); ++idx)
      if (cat.manifests[idx].name == "recurrence_flat") break;
    const Manifest& m = cat.manifests[idx];
    for (const auto& [pname, x] : m.chart->points()) {
      double rec = recurrent_form_residual(*m.chart, "brec", "beta", x).normalized;
      WeaklySymmetricResult ws =
          weakly_symmetric_residual(*m.chart, "brec", "beta", "zero", "zero", x);
      if (rec > 1e-10 || ws.decomposition.normalized > 1e-10 ||
          ws.derived_closedness.normalized > 1e-10) {
        pass = false;
        detail = "recurrence fixture at " + pname;
      }
    }
    for (std::size_t i = 0; i < cat.manifests.size(); ++i)
      for (const auto& [pname, x] : cat.manifests[i].chart->points()) {
        HarmonicCurvatureResult hc = harmonic_curvature_residual(*cat.manifests[i].chart, x);
        if ((hc.divergence.normalized <= 1e-8) != (hc.ricci_codazzi.normalized <= 1e-8)) {
          pass = false;
          detail = "harmonic equivalence disagrees on " + cat.manifests[i].name + "/" + pname;
        }
      }
    report(8, "recurrent and weakly-symmetric structures, harmonic equivalence", pass, detail);
  }

  // 9. Negative detection: bump4d fails Codazzi(ricci), harmonic curvature
  //    and Weyl-form closedness with residuals > 1e-3 at every point.
  {
    bool pass = true;
    std::string detail;
    std::size_t idx = 0;
    for (; idx < cat.manifests.size(); ++idx)
      if (cat.manifests[idx].name == "bump4d") break;
    const Manifest& m = cat.manifests[idx];
    for (const auto& [pname, x] : m.chart->points()) {
      double cod = codazzi_residual(*m.chart, "ricci", x).normalized;
      HarmonicCurvatureResult hc = harmonic_curvature_residual(*m.chart, x);
      WeylClosednessResult wc = weyl_form_closedness_residual(*m.chart, x);
      if (cod <= 1e-3 || hc.divergence.normalized <= 1e-3 ||
          wc.schouten_codazzi.normalized <= 1e-3 || wc.weyl_divergence.normalized <= 1e-3) {
        pass = false;
        detail = "a checker passed vacuously at " + pname;
      }
    }
    report(9, "negative fixture trips the structure checkers", pass, detail);
  }

  // 10. CLI layer: verify succeeds on every emitted catalog manifest and the
  //     record-format report is byte-identical across runs.
  {
    bool pass = true;
    std::string detail;
    const char* tmpdir = std::getenv("TMPDIR");
    std::string dir = tmpdir && *tmpdir ? tmpdir : "/tmp";
    for (const std::string& name : catalog_list()) {
      std::string path = dir + "/codazzi_acceptance_" + name + ".json";
      catalog_emit(name, path);
      Manifest m = load_manifest(path);
      VerificationReport rep1 = run_checks(m);
      VerificationReport rep2 = run_checks(m);
      if (rep1.exit_code() != 0) {
        pass = false;
        detail = name + " exits " + std::to_string(rep1.exit_code());
      }
      if (rep1.to_records() != rep2.to_records()) {
        pass = false;
        detail = name + " report not deterministic";
      }
      std::remove(path.c_str());
    }
    report(10, "emitted manifests verify cleanly and deterministically", pass, detail);
  }

  double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %d of 10 criteria failed (%.2f s)\n", failures == 0 ? "OK" : "FAILED",
              failures, elapsed);
  return failures == 0 ? 0 : 1;
}
