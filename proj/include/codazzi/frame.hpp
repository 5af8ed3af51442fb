#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "codazzi/chart.hpp"
#include "codazzi/residual.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// PointFrame: every tensor of the pipeline evaluated at one sample point.
// Construction is a pure function of (chart, point); frames for different
// points can be built concurrently.
// ---------------------------------------------------------------------------

struct FieldValues {
  Mat b;               // b_ij
  Mat bmix;            // b_i^j = b_im g^mj, row index down
  Tensor<double> db;   // db(i,k,l) = nabla_i b_kl
  bool symmetric = true;
};

struct CovectorValues {
  Vec beta;
  Mat dbeta;  // dbeta(i,j) = nabla_i beta_j
};

struct PointFrame {
  const ChartManifold* chart = nullptr;
  std::string point_name;
  Vec x;

  Mat g, ginv;
  Tensor<double> gamma;    // Gamma^k_ij at (k,i,j)
  Tensor<double> riem13;   // R_jkl^m
  Tensor<double> riem04;   // R_ijkl
  Mat ricci;
  double scalar = 0.0;
  Tensor<double> weyl04, weyl13;  // empty when n == 2

  std::map<std::string, FieldValues> fields;      // declared fields
  std::map<std::string, CovectorValues> covectors;

  int n() const { return g.n(); }

  const FieldValues& field(const std::string& name) const {
    auto it = fields.find(name);
    if (it == fields.end()) throw UnknownFieldError("unknown (0,2) field '" + name + "'");
    return it->second;
  }
};

namespace detail {

inline Tensor<double> evaluate_tensor(const Tensor<Expr>& t, Evaluator& ev) {
  Tensor<double> out(t.n(), t.rank());
  for (std::size_t i = 0; i < t.flat().size(); ++i) out.flat()[i] = ev.eval(t.flat()[i]);
  return out;
}

inline Mat evaluate_mat(const Tensor<Expr>& t, Evaluator& ev) {
  Mat out(t.n());
  for (int i = 0; i < t.n(); ++i)
    for (int j = 0; j < t.n(); ++j) out(i, j) = ev.eval(t(i, j));
  return out;
}

inline void check_invertible(const Mat& g) {
  EigenSym es = eigen_symmetric(g);
  if (es.values.front() <= 0.0 || es.values.front() / es.values.back() < 1e-10)
    throw SingularMetricError("metric is singular at this point (conditioning below 1e-10)");
}

}  // namespace detail

inline FieldValues evaluate_field(const ChartManifold& chart, const Sym2Field& f,
                                  const Mat& ginv, Evaluator& ev) {
  FieldValues out;
  out.symmetric = f.symmetric;
  out.b = detail::evaluate_mat(f.comps, ev);
  out.db = detail::evaluate_tensor(f.grad, ev);
  int n = chart.dimension();
  out.bmix = Mat(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += out.b(i, m) * ginv(m, j);
      out.bmix(i, j) = s;
    }
  return out;
}

/// Evaluate the full frame at a point. `x` must be inside the chart domain;
/// the metric is re-checked for invertibility here.
inline PointFrame build_frame(const ChartManifold& chart, const Vec& x,
                              std::string point_name = {}) {
  PointFrame fr;
  fr.chart = &chart;
  fr.point_name = std::move(point_name);
  fr.x = x;

  Evaluator ev(fr.x);
  fr.g = detail::evaluate_mat(chart.metric(), ev);
  detail::check_invertible(fr.g);
  fr.ginv = detail::evaluate_mat(chart.ginv_sym(), ev);
  fr.gamma = detail::evaluate_tensor(chart.gamma_sym(), ev);
  fr.riem13 = detail::evaluate_tensor(chart.riem13_sym(), ev);
  fr.riem04 = detail::evaluate_tensor(chart.riem04_sym(), ev);
  fr.ricci = detail::evaluate_mat(chart.ricci_sym(), ev);
  fr.scalar = ev.eval(chart.scalar_sym());
  if (chart.dimension() >= 3) {
    fr.weyl04 = detail::evaluate_tensor(chart.weyl04_sym(), ev);
    fr.weyl13 = detail::evaluate_tensor(chart.weyl13_sym(), ev);
  }

  for (const auto& [name, f] : chart.declared_sym2())
    fr.fields[name] = evaluate_field(chart, f, fr.ginv, ev);
  for (const std::string auto_name : {"ricci", "schouten"})
    if (!fr.fields.count(auto_name))
      fr.fields[auto_name] = evaluate_field(chart, chart.sym2(auto_name), fr.ginv, ev);

  for (const auto& [name, f] : chart.declared_covectors()) {
    CovectorValues cv;
    cv.beta.resize(chart.dimension());
    for (int i = 0; i < chart.dimension(); ++i) cv.beta[i] = ev.eval(f.comps[i]);
    cv.dbeta = detail::evaluate_mat(f.grad, ev);
    fr.covectors[name] = std::move(cv);
  }
  return fr;
}

// ---------------------------------------------------------------------------
// Pointwise geometry operations. Thin wrappers over the symbolic cache.
// ---------------------------------------------------------------------------

inline Tensor<double> christoffel(const ChartManifold& chart, const Vec& x) {
  Evaluator ev(x);
  Mat g = detail::evaluate_mat(chart.metric(), ev);
  detail::check_invertible(g);
  return detail::evaluate_tensor(chart.gamma_sym(), ev);
}

inline std::pair<Tensor<double>, Tensor<double>> riemann(const ChartManifold& chart,
                                                         const Vec& x) {
  Evaluator ev(x);
  Mat g = detail::evaluate_mat(chart.metric(), ev);
  detail::check_invertible(g);
  return {detail::evaluate_tensor(chart.riem13_sym(), ev),
          detail::evaluate_tensor(chart.riem04_sym(), ev)};
}

inline std::pair<Mat, double> ricci_and_scalar(const ChartManifold& chart, const Vec& x) {
  Evaluator ev(x);
  return {detail::evaluate_mat(chart.ricci_sym(), ev), ev.eval(chart.scalar_sym())};
}

inline Tensor<double> weyl(const ChartManifold& chart, const Vec& x) {
  if (chart.dimension() < 3)
    throw DimensionError("the conformal curvature tensor needs dimension >= 3");
  Evaluator ev(x);
  return detail::evaluate_tensor(chart.weyl13_sym(), ev);
}

inline Tensor<double> covariant_derivative_02(const ChartManifold& chart,
                                              const std::string& field, const Vec& x) {
  Evaluator ev(x);
  return detail::evaluate_tensor(chart.sym2(field).grad, ev);
}

inline Mat covariant_derivative_covector(const ChartManifold& chart, const std::string& field,
                                         const Vec& x) {
  Evaluator ev(x);
  return detail::evaluate_mat(chart.covector(field).grad, ev);
}

struct RiemannDivergence {
  Tensor<double> div;              // nabla_m R_jkl^m
  Residual second_bianchi;         // | div - (nabla_k Ric_jl - nabla_j Ric_kl) |
};

/// Divergence of the curvature plus the contracted-second-Bianchi residual,
/// which must vanish on every metric (it is an identity, so it doubles as the
/// engine's strongest self-test: it exercises third derivatives of g).
inline RiemannDivergence riemann_divergence(const ChartManifold& chart, const Vec& x) {
  Evaluator ev(x);
  RiemannDivergence out;
  out.div = detail::evaluate_tensor(chart.div_riem_sym(), ev);
  Tensor<double> dric = detail::evaluate_tensor(chart.dricci_sym(), ev);

  int n = chart.dimension();
  double raw = 0.0, scale = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        double lhs = out.div(j, k, l);
        double rhs = dric(k, j, l) - dric(j, k, l);
        raw = std::max(raw, std::fabs(lhs - rhs));
        scale = std::max({scale, std::fabs(lhs), std::fabs(dric(k, j, l))});
      }
  out.second_bianchi = make_residual(raw, {scale});
  return out;
}

// ---------------------------------------------------------------------------
// Frame self-tests: the PointFrame invariants as named residuals.
// ---------------------------------------------------------------------------

struct NamedResidual {
  std::string name;
  Residual residual;
  double tolerance;
};

inline std::vector<NamedResidual> frame_selftest(const ChartManifold& chart,
                                                 const PointFrame& fr,
                                                 double tol = kDefaultTolerance) {
  const int n = fr.n();
  std::vector<NamedResidual> out;

  {  // g^ij g_jk = delta^i_k, to 1e-12 relative
    double raw = 0.0;
    Mat prod = matmul(fr.ginv, fr.g);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) raw = std::max(raw, std::fabs(prod(i, k) - (i == k ? 1.0 : 0.0)));
    out.push_back({"metric_inverse", make_residual(raw, {1.0}), 1e-12});
  }

  double gamma_scale = 0.0;
  for (double v : fr.gamma.flat()) gamma_scale = std::max(gamma_scale, std::fabs(v));

  {  // Gamma^k_ij = Gamma^k_ji
    double raw = 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          raw = std::max(raw, std::fabs(fr.gamma(k, i, j) - fr.gamma(k, j, i)));
    out.push_back({"christoffel_symmetry", make_residual(raw, {gamma_scale}), tol});
  }

  {  // Riemann symmetries and first Bianchi identity
    double scale = 0.0;
    for (double v : fr.riem04.flat()) scale = std::max(scale, std::fabs(v));
    double a1 = 0.0, a2 = 0.0, pair = 0.0, bianchi = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double r = fr.riem04(i, j, k, l);
            a1 = std::max(a1, std::fabs(r + fr.riem04(j, i, k, l)));
            a2 = std::max(a2, std::fabs(r + fr.riem04(i, j, l, k)));
            pair = std::max(pair, std::fabs(r - fr.riem04(k, l, i, j)));
            bianchi = std::max(
                bianchi, std::fabs(r + fr.riem04(j, k, i, l) + fr.riem04(k, i, j, l)));
          }
    out.push_back({"riemann_antisym_first_pair", make_residual(a1, {scale}), tol});
    out.push_back({"riemann_antisym_last_pair", make_residual(a2, {scale}), tol});
    out.push_back({"riemann_pair_symmetry", make_residual(pair, {scale}), tol});
    out.push_back({"riemann_first_bianchi", make_residual(bianchi, {scale}), tol});
  }

  {  // metric compatibility nabla g = 0
    Evaluator ev(fr.x);
    Tensor<double> dg = detail::evaluate_tensor(chart.metric_grad_sym(), ev);
    double raw = 0.0;
    for (double v : dg.flat()) raw = std::max(raw, std::fabs(v));
    out.push_back({"metric_compatibility", make_residual(raw, {fr.g.max_abs(), gamma_scale}), tol});
  }

  if (n >= 3) {  // every single trace of the conformal tensor vanishes
    double scale = 0.0;
    for (double v : fr.weyl04.flat()) scale = std::max(scale, std::fabs(v));
    double raw = 0.0;
    // Contract each of the six slot pairs of C_ijkl with g^-1.
    for (int sa = 0; sa < 4; ++sa)
      for (int sb = sa + 1; sb < 4; ++sb) {
        int free_a = -1, free_b = -1;
        for (int s = 0; s < 4; ++s)
          if (s != sa && s != sb) (free_a < 0 ? free_a : free_b) = s;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            double sum = 0.0;
            for (int p = 0; p < n; ++p)
              for (int q = 0; q < n; ++q) {
                int idx[4];
                idx[sa] = p;
                idx[sb] = q;
                idx[free_a] = a;
                idx[free_b] = b;
                sum += fr.ginv(p, q) * fr.weyl04(idx[0], idx[1], idx[2], idx[3]);
              }
            raw = std::max(raw, std::fabs(sum));
          }
      }
    out.push_back({"weyl_trace_free", make_residual(raw, {scale, fr.ginv.max_abs()}), tol});
  }

  {  // contracted second Bianchi identity
    RiemannDivergence rd = riemann_divergence(chart, fr.x);
    out.push_back({"second_bianchi_contracted", rd.second_bianchi, tol});
  }

  return out;
}

/// Residual of [nabla_i, nabla_j] b_kl = R_ijk^m b_ml + R_ijl^m b_km for one
/// declared (0,2) field. The left side is the antisymmetrized second covariant
/// derivative of b, computed symbolically; this is what pins the curvature
/// sign convention.
inline Residual commutator_residual(const ChartManifold& chart, const std::string& field,
                                    const Vec& x) {
  const Sym2Field& f = chart.sym2(field);
  Evaluator ev(x);
  Tensor<double> ddb = detail::evaluate_tensor(f.grad2, ev);
  Tensor<double> r13 = detail::evaluate_tensor(chart.riem13_sym(), ev);
  Mat b = detail::evaluate_mat(f.comps, ev);

  const int n = chart.dimension();
  double raw = 0.0, scale = 0.0;
  for (double v : ddb.flat()) scale = std::max(scale, std::fabs(v));
  for (double v : r13.flat()) scale = std::max(scale, std::fabs(v));
  scale = std::max(scale, b.max_abs());

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double lhs = ddb(i, j, k, l) - ddb(j, i, k, l);
          double rhs = 0.0;
          for (int m = 0; m < n; ++m)
            rhs += r13(i, j, k, m) * b(m, l) + r13(i, j, l, m) * b(k, m);
          raw = std::max(raw, std::fabs(lhs - rhs));
        }
  return make_residual(raw, {scale});
}

}  // namespace codazzi
