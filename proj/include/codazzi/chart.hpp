#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "codazzi/errors.hpp"
#include "codazzi/expr.hpp"
#include "codazzi/linalg.hpp"
#include "codazzi/tensor.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// Symbolic tensor calculus on a coordinate chart.
//
// The whole curvature pipeline is symbolic: the metric is given as closed-form
// expressions, Christoffel symbols and the curvature tensor are materialized
// as Expr arrays, and covariant derivatives differentiate those arrays
// exactly. Numbers only appear when a tensor is evaluated at a sample point,
// so third-derivative quantities (div R, div C, [grad,grad]b) carry no
// finite-difference noise.
//
// Index conventions (see docs/conventions.md, printed by `codazzi conventions`):
//   Gamma^k_ij          gamma(k,i,j)
//   R_jkl^m             riem13(j,k,l,m)   curvature with the last index up
//   R_ijkl              riem04(i,j,k,l) = riem13(i,j,k,m) g(m,l)
//   Ricci_kl            = -riem13(m,k,l,m) summed over m
//   grad_i T_(...)      cov. derivative adds the new index FIRST
// ---------------------------------------------------------------------------

struct Sym2Field {
  Tensor<Expr> comps;   // b_kl
  bool symmetric = true;
  Tensor<Expr> grad;    // grad(i,k,l)    = nabla_i b_kl
  Tensor<Expr> grad2;   // grad2(i,j,k,l) = nabla_i nabla_j b_kl
};

struct CovectorField {
  std::vector<Expr> comps;  // beta_j
  Tensor<Expr> grad;        // grad(i,j) = nabla_i beta_j
};

namespace sym {

/// Determinant of an Expr matrix by minor expansion (chart-sized matrices).
inline Expr determinant(const Tensor<Expr>& m, std::vector<int> rows, std::vector<int> cols) {
  if (rows.size() == 1) return m(rows[0], cols[0]);
  Expr det = Expr::constant(0.0);
  std::vector<int> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const Expr& pivot = m(rows[0], cols[c]);
    if (pivot.is_zero()) continue;
    std::vector<int> sub_cols;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (k != c) sub_cols.push_back(cols[k]);
    Expr minor = determinant(m, sub_rows, sub_cols);
    Expr term = pivot * minor;
    det = (c % 2 == 0) ? det + term : det - term;
  }
  return det;
}

inline Expr determinant(const Tensor<Expr>& m) {
  std::vector<int> all(m.n());
  for (int i = 0; i < m.n(); ++i) all[i] = i;
  return determinant(m, all, all);
}

/// Inverse via the adjugate. Exact as an expression; never simplified.
inline Tensor<Expr> inverse(const Tensor<Expr>& m) {
  int n = m.n();
  Expr det = determinant(m);
  Tensor<Expr> inv(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int r = 0; r < n; ++r)
        if (r != j) rows.push_back(r);
      for (int c = 0; c < n; ++c)
        if (c != i) cols.push_back(c);
      Expr minor = (n == 1) ? Expr::constant(1.0) : determinant(m, rows, cols);
      Expr cof = ((i + j) % 2 == 0) ? minor : -minor;
      inv(i, j) = cof / det;
    }
  return inv;
}

/// Covariant derivative of an all-covariant tensor; the derivative index is
/// prepended: out(i, a1..ar) = nabla_i T_(a1..ar).
inline Tensor<Expr> cov_deriv_down(const Tensor<Expr>& t, const Tensor<Expr>& gamma) {
  int n = t.n();
  int r = t.rank();
  Tensor<Expr> out(n, r + 1);
  std::vector<int> idx(static_cast<std::size_t>(r), 0);
  auto next = [&](std::vector<int>& v) {
    for (int s = r - 1; s >= 0; --s) {
      if (++v[s] < n) return true;
      v[s] = 0;
    }
    return false;
  };
  auto get = [&](const Tensor<Expr>& src, const std::vector<int>& v) -> const Expr& {
    switch (r) {
      case 1: return src(v[0]);
      case 2: return src(v[0], v[1]);
      case 3: return src(v[0], v[1], v[2]);
      default: return src(v[0], v[1], v[2], v[3]);
    }
  };
  auto put = [&](Tensor<Expr>& dst, int i, const std::vector<int>& v, Expr e) {
    switch (r) {
      case 1: dst(i, v[0]) = std::move(e); break;
      case 2: dst(i, v[0], v[1]) = std::move(e); break;
      case 3: dst(i, v[0], v[1], v[2]) = std::move(e); break;
      default: dst(i, v[0], v[1], v[2], v[3]) = std::move(e); break;
    }
  };

  do {
    for (int i = 0; i < n; ++i) {
      Expr e = differentiate(get(t, idx), i);
      for (int slot = 0; slot < r; ++slot) {
        std::vector<int> m_idx = idx;
        for (int m = 0; m < n; ++m) {
          m_idx[slot] = m;
          e = e - gamma(m, i, idx[slot]) * get(t, m_idx);
        }
      }
      put(out, i, idx, e);
    }
  } while (next(idx));
  return out;
}

}  // namespace sym

// ---------------------------------------------------------------------------

class ChartManifold {
 public:
  ChartManifold(std::string name, std::vector<std::string> coords, Tensor<Expr> metric)
      : name_(std::move(name)), coords_(std::move(coords)), g_(std::move(metric)) {
    n_ = static_cast<int>(coords_.size());
    if (n_ < 2) throw DimensionError("chart dimension must be at least 2");
    if (g_.n() != n_ || g_.rank() != 2)
      throw DimensionError("metric must be an n x n array of expressions");
    // Upper triangle is authoritative.
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) g_(j, i) = g_(i, j);
  }

  void add_sym2_field(const std::string& name, Tensor<Expr> comps, bool symmetric = true) {
    require_open();
    if (comps.n() != n_ || comps.rank() != 2)
      throw DimensionError("field '" + name + "' must be an n x n array");
    Sym2Field f;
    if (symmetric)
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) comps(j, i) = comps(i, j);
    f.comps = std::move(comps);
    f.symmetric = symmetric;
    sym2_[name] = std::move(f);
  }

  void add_covector_field(const std::string& name, std::vector<Expr> comps) {
    require_open();
    if (static_cast<int>(comps.size()) != n_)
      throw DimensionError("covector '" + name + "' must have n components");
    CovectorField f;
    f.comps = std::move(comps);
    covectors_[name] = std::move(f);
  }

  void add_point(const std::string& name, Vec x) {
    require_open();
    if (static_cast<int>(x.size()) != n_)
      throw DimensionError("point '" + name + "' must have n coordinates");
    points_.emplace_back(name, std::move(x));
  }

  /// Builds the symbolic pipeline and validates every sample point. The chart
  /// is immutable afterwards, so it is safe to share across threads.
  void finalize() {
    require_open();
    build_symbolic();
    for (const auto& [pname, x] : points_) validate_point(pname, x);
    finalized_ = true;
  }

  // -- basic accessors ------------------------------------------------------

  const std::string& name() const { return name_; }
  int dimension() const { return n_; }
  const std::vector<std::string>& coordinates() const { return coords_; }
  const Tensor<Expr>& metric() const { return g_; }
  const std::vector<std::pair<std::string, Vec>>& points() const { return points_; }
  bool finalized() const { return finalized_; }

  bool has_sym2(const std::string& name) const {
    return sym2_.count(name) > 0 || auto_sym2_.count(name) > 0;
  }
  bool has_covector(const std::string& name) const { return covectors_.count(name) > 0; }

  /// Named (0,2) field. The names "ricci" and "schouten" resolve to the
  /// engine-computed tensors unless the user declared fields with those names.
  const Sym2Field& sym2(const std::string& name) const {
    if (auto it = sym2_.find(name); it != sym2_.end()) return it->second;
    if (auto it = auto_sym2_.find(name); it != auto_sym2_.end()) return it->second;
    throw UnknownFieldError("unknown (0,2) field '" + name + "'");
  }

  const CovectorField& covector(const std::string& name) const {
    auto it = covectors_.find(name);
    if (it == covectors_.end()) throw UnknownFieldError("unknown covector field '" + name + "'");
    return it->second;
  }

  const std::map<std::string, Sym2Field>& declared_sym2() const { return sym2_; }
  const std::map<std::string, CovectorField>& declared_covectors() const { return covectors_; }

  // -- symbolic pipeline accessors ------------------------------------------

  const Tensor<Expr>& ginv_sym() const { return ginv_; }
  const Tensor<Expr>& gamma_sym() const { return gamma_; }
  const Tensor<Expr>& riem13_sym() const { return riem13_; }
  const Tensor<Expr>& riem04_sym() const { return riem04_; }
  const Tensor<Expr>& ricci_sym() const { return ricci_; }
  const Expr& scalar_sym() const { return scalar_; }
  const Tensor<Expr>& schouten_sym() const { return schouten_; }
  const Tensor<Expr>& weyl04_sym() const { return weyl04_; }    // empty for n == 2
  const Tensor<Expr>& weyl13_sym() const { return weyl13_; }    // empty for n == 2
  const Tensor<Expr>& metric_grad_sym() const { return dg_; }
  const Tensor<Expr>& div_riem_sym() const { return div_riem_; }
  const Tensor<Expr>& div_weyl_sym() const { return div_weyl_; }  // empty for n == 2

  /// Rejects points where the evaluated metric is singular or nearly so.
  void validate_point(const std::string& pname, const Vec& x) const {
    Mat g = evaluate_matrix(g_, x);
    EigenSym es = eigen_symmetric(g);
    double min_eig = es.values.front();
    double max_eig = es.values.back();
    double det = 1.0;
    for (double v : es.values) det *= v;
    if (min_eig <= 0.0)
      throw SingularPointError("point '" + pname + "' rejected: metric is not positive definite");
    if (det <= 1e-6)
      throw SingularPointError("point '" + pname +
                               "' rejected: metric determinant " + detail::format_double(det) +
                               " is within 1e-6 of singular");
    if (min_eig / max_eig < 1e-10)
      throw SingularPointError("point '" + pname + "' rejected: metric conditioning below 1e-10");
  }

  Mat evaluate_matrix(const Tensor<Expr>& t, const Vec& x) const {
    Evaluator ev(x);
    Mat out(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(i, j) = ev.eval(t(i, j));
    return out;
  }

 private:
  void require_open() const {
    if (finalized_) throw Error("chart '" + name_ + "' is finalized and immutable");
  }

  void build_symbolic() {
    const int n = n_;
    ginv_ = sym::inverse(g_);

    // Christoffel symbols of the Levi-Civita connection.
    gamma_ = Tensor<Expr>(n, 3);
    Tensor<Expr> dg_partial(n, 3);  // dg_partial(i,j,k) = d_i g_jk
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) dg_partial(i, j, k) = differentiate(g_(j, k), i);
    const Expr half = Expr::constant(0.5);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          Expr sum = Expr::constant(0.0);
          for (int m = 0; m < n; ++m)
            sum = sum + ginv_(k, m) *
                            (dg_partial(i, j, m) + dg_partial(j, i, m) - dg_partial(m, i, j));
          gamma_(k, i, j) = half * sum;
          gamma_(k, j, i) = gamma_(k, i, j);
        }

    // Curvature, pinned so that [nabla_i, nabla_j] b_kl
    //   = riem13(i,j,k,m) b_ml + riem13(i,j,l,m) b_km
    // and Ricci_kl = -riem13(m,k,l,m) is positive on round spheres:
    //   R_jkl^m = d_k Gamma^m_jl - d_j Gamma^m_kl
    //           + Gamma^p_jl Gamma^m_kp - Gamma^p_kl Gamma^m_jp
    riem13_ = Tensor<Expr>(n, 4);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;  // antisymmetric pair, diagonal is zero
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            Expr e = differentiate(gamma_(m, j, l), k) - differentiate(gamma_(m, k, l), j);
            for (int p = 0; p < n; ++p)
              e = e + gamma_(p, j, l) * gamma_(m, k, p) - gamma_(p, k, l) * gamma_(m, j, p);
            riem13_(j, k, l, m) = e;
          }
      }

    riem04_ = Tensor<Expr>(n, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            Expr e = Expr::constant(0.0);
            for (int m = 0; m < n; ++m) e = e + riem13_(i, j, k, m) * g_(m, l);
            riem04_(i, j, k, l) = e;
          }

    ricci_ = Tensor<Expr>(n, 2);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        Expr e = Expr::constant(0.0);
        for (int m = 0; m < n; ++m) e = e - riem13_(m, k, l, m);
        ricci_(k, l) = e;
      }

    scalar_ = Expr::constant(0.0);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) scalar_ = scalar_ + ginv_(k, l) * ricci_(k, l);

    schouten_ = Tensor<Expr>(n, 2);
    {
      Expr factor = scalar_ / Expr::constant(2.0 * (n - 1));
      for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) schouten_(k, j) = ricci_(k, j) - factor * g_(k, j);
    }

    if (n >= 3) {
      weyl04_ = Tensor<Expr>(n, 4);
      Expr c1 = Expr::constant(1.0 / (n - 2));
      Expr c2 = scalar_ / Expr::constant(static_cast<double>(n - 1) * (n - 2));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              Expr e = riem04_(i, j, k, l) -
                       c1 * (g_(i, k) * ricci_(j, l) - g_(i, l) * ricci_(j, k) +
                             g_(j, l) * ricci_(i, k) - g_(j, k) * ricci_(i, l)) +
                       c2 * (g_(i, k) * g_(j, l) - g_(i, l) * g_(j, k));
              weyl04_(i, j, k, l) = e;
            }
      weyl13_ = raise_last(weyl04_);
      div_weyl_ = divergence_last_up(weyl13_);
    }

    dg_ = sym::cov_deriv_down(g_, gamma_);
    dricci_ = sym::cov_deriv_down(ricci_, gamma_);
    dschouten_ = sym::cov_deriv_down(schouten_, gamma_);
    div_riem_ = divergence_last_up(riem13_);

    for (auto& [fname, field] : sym2_) attach_derivatives(field);
    for (auto& [fname, field] : covectors_) {
      field.grad = sym::cov_deriv_down(vector_as_tensor(field.comps), gamma_);
    }

    Sym2Field ric_field;
    ric_field.comps = ricci_;
    attach_derivatives(ric_field);
    auto_sym2_["ricci"] = std::move(ric_field);

    Sym2Field schouten_field;
    schouten_field.comps = schouten_;
    attach_derivatives(schouten_field);
    auto_sym2_["schouten"] = std::move(schouten_field);
  }

  void attach_derivatives(Sym2Field& f) {
    f.grad = sym::cov_deriv_down(f.comps, gamma_);
    f.grad2 = sym::cov_deriv_down(f.grad, gamma_);
  }

  Tensor<Expr> vector_as_tensor(const std::vector<Expr>& v) const {
    Tensor<Expr> t(n_, 1);
    for (int i = 0; i < n_; ++i) t(i) = v[i];
    return t;
  }

  Tensor<Expr> raise_last(const Tensor<Expr>& t04) const {
    const int n = n_;
    Tensor<Expr> out(n, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) {
            Expr e = Expr::constant(0.0);
            for (int s = 0; s < n; ++s) e = e + t04(i, j, k, s) * ginv_(s, m);
            out(i, j, k, m) = e;
          }
    return out;
  }

  /// Divergence of a (1,3) tensor T_jkl^m over its contravariant index:
  /// out(j,k,l) = nabla_m T_jkl^m.
  Tensor<Expr> divergence_last_up(const Tensor<Expr>& t13) const {
    const int n = n_;
    Tensor<Expr> out(n, 3);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Expr e = Expr::constant(0.0);
          for (int m = 0; m < n; ++m) {
            e = e + differentiate(t13(j, k, l, m), m);
            for (int p = 0; p < n; ++p) {
              e = e + gamma_(m, m, p) * t13(j, k, l, p);
              e = e - gamma_(p, m, j) * t13(p, k, l, m) - gamma_(p, m, k) * t13(j, p, l, m) -
                  gamma_(p, m, l) * t13(j, k, p, m);
            }
          }
          out(j, k, l) = e;
        }
    return out;
  }

 public:
  const Tensor<Expr>& dricci_sym() const { return dricci_; }
  const Tensor<Expr>& dschouten_sym() const { return dschouten_; }

 private:
  std::string name_;
  std::vector<std::string> coords_;
  int n_;
  Tensor<Expr> g_;
  std::map<std::string, Sym2Field> sym2_;
  std::map<std::string, Sym2Field> auto_sym2_;
  std::map<std::string, CovectorField> covectors_;
  std::vector<std::pair<std::string, Vec>> points_;
  bool finalized_ = false;

  Tensor<Expr> ginv_, gamma_, riem13_, riem04_, ricci_, schouten_;
  Tensor<Expr> weyl04_, weyl13_, dg_, dricci_, dschouten_, div_riem_, div_weyl_;
  Expr scalar_;
};

}  // namespace codazzi
