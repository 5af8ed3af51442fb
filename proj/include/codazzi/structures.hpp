#pragma once

#include <string>
#include <vector>

#include "codazzi/frame.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// Residual checkers for the differential structures: Codazzi, gauged Codazzi,
// recurrent tensor 1-forms, weakly-b-symmetric decompositions, harmonic
// curvature and closedness of the Weyl 1-form. Each returns scale-normalized
// residuals; verdicts are layered on top by the report layer.
// ---------------------------------------------------------------------------

namespace detail {

inline void require_symmetric(const Sym2Field& f, const std::string& name,
                              const std::string& check) {
  if (!f.symmetric)
    throw NonsymmetricFieldError("check '" + check + "' requires a symmetric (0,2) field, but '" +
                                 name + "' is not symmetric");
}

/// Core of the gauged Codazzi / recurrence residual:
///   max over (k,i,j) of | (nabla_k - beta_k) b_ij - (nabla_i - beta_i) b_kj |
inline Residual gauged_core(const Tensor<double>& db, const Vec& beta, const Mat& b) {
  const int n = b.n();
  double raw = 0.0, scale = 0.0;
  for (double v : db.flat()) scale = std::max(scale, std::fabs(v));
  for (double v : beta) scale = std::max(scale, std::fabs(v));
  scale = std::max(scale, b.max_abs());
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double lhs = db(k, i, j) - beta[k] * b(i, j);
        double rhs = db(i, k, j) - beta[i] * b(k, j);
        raw = std::max(raw, std::fabs(lhs - rhs));
      }
  return make_residual(raw, {scale});
}

inline Residual closedness_core(const Mat& dbeta, const Vec& beta) {
  const int n = dbeta.n();
  double raw = 0.0, scale = 0.0;
  for (double v : beta) scale = std::max(scale, std::fabs(v));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      scale = std::max(scale, std::fabs(dbeta(k, j)));
      raw = std::max(raw, std::fabs(dbeta(k, j) - dbeta(j, k)));
    }
  return make_residual(raw, {scale});
}

}  // namespace detail

struct GaugedCodazziResult {
  Residual gauged;      // eq. residual with the gauge term
  Residual closedness;  // nabla_k beta_j - nabla_j beta_k
};

/// Gauged Codazzi residual. Pass an empty beta name for the beta = 0 case;
/// codazzi_residual below is exactly that call, so the specialization is
/// structural, not a separate code path.
inline GaugedCodazziResult gauged_codazzi_residual(const ChartManifold& chart,
                                                   const std::string& b_name,
                                                   const std::string& beta_name, const Vec& x) {
  const Sym2Field& f = chart.sym2(b_name);
  detail::require_symmetric(f, b_name, "gauged_codazzi");

  Evaluator ev(x);
  const int n = chart.dimension();
  Tensor<double> db = detail::evaluate_tensor(f.grad, ev);
  Mat b = detail::evaluate_mat(f.comps, ev);

  GaugedCodazziResult out;
  if (beta_name.empty()) {
    Vec zero(static_cast<std::size_t>(n), 0.0);
    out.gauged = detail::gauged_core(db, zero, b);
    out.closedness = Residual{0.0, 0.0};
    return out;
  }
  const CovectorField& bf = chart.covector(beta_name);
  Vec beta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) beta[static_cast<std::size_t>(i)] = ev.eval(bf.comps[i]);
  Mat dbeta = detail::evaluate_mat(bf.grad, ev);
  out.gauged = detail::gauged_core(db, beta, b);
  out.closedness = detail::closedness_core(dbeta, beta);
  return out;
}

/// Codazzi residual: max |nabla_j b_kl - nabla_k b_jl|, scale-normalized.
inline Residual codazzi_residual(const ChartManifold& chart, const std::string& b_name,
                                 const Vec& x) {
  return gauged_codazzi_residual(chart, b_name, {}, x).gauged;
}

/// Recurrence residual of the tensor-valued 1-form B_j = b_kj dx^k:
///   (nabla_i - beta_i) b_kl = (nabla_k - beta_k) b_il.
/// Identical computation to the gauged Codazzi residual, but b may be
/// nonsymmetric and the gauge field is NOT required to be closed here; the
/// closedness side condition belongs to the theorem hypothesis, not to the
/// definition of recurrence.
inline Residual recurrent_form_residual(const ChartManifold& chart, const std::string& b_name,
                                        const std::string& beta_name, const Vec& x) {
  const Sym2Field& f = chart.sym2(b_name);
  Evaluator ev(x);
  const int n = chart.dimension();
  Tensor<double> db = detail::evaluate_tensor(f.grad, ev);
  Mat b = detail::evaluate_mat(f.comps, ev);
  Vec beta(static_cast<std::size_t>(n), 0.0);
  if (!beta_name.empty()) {
    const CovectorField& bf = chart.covector(beta_name);
    for (int i = 0; i < n; ++i) beta[static_cast<std::size_t>(i)] = ev.eval(bf.comps[i]);
  }
  return detail::gauged_core(db, beta, b);
}

struct WeaklySymmetricResult {
  Residual decomposition;        // nabla_i b_kl = A_i b_kl + B_k b_il + D_l b_ik
  Vec derived_beta;              // beta = A - B at the point
  Residual derived_closedness;   // closedness of the derived gauge field
};

inline WeaklySymmetricResult weakly_symmetric_residual(const ChartManifold& chart,
                                                       const std::string& b_name,
                                                       const std::string& a_name,
                                                       const std::string& bb_name,
                                                       const std::string& d_name, const Vec& x) {
  const Sym2Field& f = chart.sym2(b_name);
  detail::require_symmetric(f, b_name, "weakly_symmetric");
  const CovectorField& fa = chart.covector(a_name);
  const CovectorField& fb = chart.covector(bb_name);
  const CovectorField& fd = chart.covector(d_name);

  Evaluator ev(x);
  const int n = chart.dimension();
  Tensor<double> db = detail::evaluate_tensor(f.grad, ev);
  Mat b = detail::evaluate_mat(f.comps, ev);
  Vec a(static_cast<std::size_t>(n)), bb(static_cast<std::size_t>(n)),
      d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i)] = ev.eval(fa.comps[i]);
    bb[static_cast<std::size_t>(i)] = ev.eval(fb.comps[i]);
    d[static_cast<std::size_t>(i)] = ev.eval(fd.comps[i]);
  }

  double raw = 0.0, scale = b.max_abs();
  for (double v : db.flat()) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < n; ++i)
    scale = std::max({scale, std::fabs(a[static_cast<std::size_t>(i)]),
                      std::fabs(bb[static_cast<std::size_t>(i)]),
                      std::fabs(d[static_cast<std::size_t>(i)])});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double lhs = db(i, k, l);
        double rhs = a[static_cast<std::size_t>(i)] * b(k, l) +
                     bb[static_cast<std::size_t>(k)] * b(i, l) +
                     d[static_cast<std::size_t>(l)] * b(i, k);
        raw = std::max(raw, std::fabs(lhs - rhs));
      }

  WeaklySymmetricResult out;
  out.decomposition = make_residual(raw, {scale});
  out.derived_beta.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.derived_beta[static_cast<std::size_t>(i)] =
        a[static_cast<std::size_t>(i)] - bb[static_cast<std::size_t>(i)];

  Mat da = detail::evaluate_mat(fa.grad, ev);
  Mat dbB = detail::evaluate_mat(fb.grad, ev);
  Mat dbeta(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dbeta(i, j) = da(i, j) - dbB(i, j);
  out.derived_closedness = detail::closedness_core(dbeta, out.derived_beta);
  return out;
}

struct HarmonicCurvatureResult {
  Residual divergence;     // max |nabla_m R_jkl^m|
  Residual ricci_codazzi;  // Codazzi residual of the Ricci tensor
};

/// Harmonic Riemann curvature. The two residuals stand in an if-and-only-if
/// relation, so their verdicts must agree; both are reported.
inline HarmonicCurvatureResult harmonic_curvature_residual(const ChartManifold& chart,
                                                           const Vec& x) {
  HarmonicCurvatureResult out;
  Evaluator ev(x);
  Tensor<double> div = detail::evaluate_tensor(chart.div_riem_sym(), ev);
  Tensor<double> r13 = detail::evaluate_tensor(chart.riem13_sym(), ev);
  double raw = 0.0, scale = 0.0;
  for (double v : div.flat()) raw = std::max(raw, std::fabs(v));
  for (double v : r13.flat()) scale = std::max(scale, std::fabs(v));
  out.divergence = make_residual(raw, {scale});
  out.ricci_codazzi = codazzi_residual(chart, "ricci", x);
  return out;
}

struct WeylClosednessResult {
  Residual schouten_codazzi;  // Codazzi-type residual of R_kj - R/(2(n-1)) g_kj
  Residual weyl_divergence;   // max |nabla_m C_jkl^m|
};

/// Closedness of the Weyl 1-form, cross-reported with the divergence of the
/// conformal tensor. Requires n >= 4: in dimension 3 the divergence side is
/// identically zero while the form need not be closed, so the check refuses
/// to guess.
inline WeylClosednessResult weyl_form_closedness_residual(const ChartManifold& chart,
                                                          const Vec& x) {
  if (chart.dimension() < 4)
    throw DimensionError("weyl_closedness requires dimension >= 4");
  WeylClosednessResult out;
  Evaluator ev(x);
  const int n = chart.dimension();

  Tensor<double> ds = detail::evaluate_tensor(chart.dschouten_sym(), ev);
  double raw = 0.0, scale = 0.0;
  for (double v : ds.flat()) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        raw = std::max(raw, std::fabs(ds(i, k, j) - ds(k, i, j)));
  out.schouten_codazzi = make_residual(raw, {scale});

  Tensor<double> divc = detail::evaluate_tensor(chart.div_weyl_sym(), ev);
  Tensor<double> c13 = detail::evaluate_tensor(chart.weyl13_sym(), ev);
  double raw2 = 0.0, scale2 = 0.0;
  for (double v : divc.flat()) raw2 = std::max(raw2, std::fabs(v));
  for (double v : c13.flat()) scale2 = std::max(scale2, std::fabs(v));
  out.weyl_divergence = make_residual(raw2, {scale2});
  return out;
}

}  // namespace codazzi
