#pragma once

#include <array>
#include <string>
#include <vector>

#include "codazzi/frame.hpp"

namespace codazzi {

// ---------------------------------------------------------------------------
// The curvature-restriction theorem: the cyclic algebraic identity, the
// generalized curvature tensor K built from a (0,2) field, its symmetry
// checks, eigen-decomposition of b_i^j with respect to g, and the invariance
// of eigenplane wedges under the curvature operator, verified in contraction
// form. Everything here is pointwise algebra on a PointFrame.
// ---------------------------------------------------------------------------

/// Cyclic identity residual:
///   max over (i,j,k,l) of | b_im R_jkl^m + b_jm R_kil^m + b_km R_ijl^m |.
/// Purely algebraic: reads only b and the curvature, never nabla b.
inline Residual identity_residual(const PointFrame& fr, const std::string& b_name) {
  const FieldValues& f = fr.field(b_name);
  if (!f.symmetric)
    throw NonsymmetricFieldError("identity_residual requires a symmetric field");
  const int n = fr.n();
  double raw = 0.0, scale = f.b.max_abs();
  for (double v : fr.riem13.flat()) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += f.b(i, m) * fr.riem13(j, k, l, m) + f.b(j, m) * fr.riem13(k, i, l, m) +
                 f.b(k, m) * fr.riem13(i, j, l, m);
          raw = std::max(raw, std::fabs(s));
        }
  return make_residual(raw, {scale});
}

/// Four-term companion identity:
///   max | R_kij^m b_ml + R_jli^m b_mk + R_ljk^m b_mi + R_ikl^m b_mj |.
inline Residual four_term_residual(const PointFrame& fr, const std::string& b_name) {
  const FieldValues& f = fr.field(b_name);
  const int n = fr.n();
  double raw = 0.0, scale = f.b.max_abs();
  for (double v : fr.riem13.flat()) scale = std::max(scale, std::fabs(v));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += fr.riem13(k, i, j, m) * f.b(m, l) + fr.riem13(j, l, i, m) * f.b(m, k) +
                 fr.riem13(l, j, k, m) * f.b(m, i) + fr.riem13(i, k, l, m) * f.b(m, j);
          raw = std::max(raw, std::fabs(s));
        }
  return make_residual(raw, {scale});
}

/// K_ijkl = R_ijrs b_k^r b_l^s.
inline Tensor<double> build_K(const PointFrame& fr, const std::string& b_name) {
  const FieldValues& f = fr.field(b_name);
  const int n = fr.n();
  Tensor<double> k4(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int r = 0; r < n; ++r) {
            if (f.bmix(k, r) == 0.0) continue;
            for (int t = 0; t < n; ++t)
              s += fr.riem04(i, j, r, t) * f.bmix(k, r) * f.bmix(l, t);
          }
          k4(i, j, k, l) = s;
        }
    }
  return k4;
}

/// The five symmetry residuals of a candidate generalized curvature tensor.
/// a1/a2 are the pair antisymmetries, b the pair interchange, c_first3 and
/// c_last3 the two cyclic (first Bianchi type) identities.
struct KSymmetryResiduals {
  Residual a1, a2, b, c_first3, c_last3;
};

inline KSymmetryResiduals check_K_symmetries(const Tensor<double>& k4) {
  const int n = k4.n();
  double scale = 0.0;
  for (double v : k4.flat()) scale = std::max(scale, std::fabs(v));
  double a1 = 0.0, a2 = 0.0, b = 0.0, c1 = 0.0, c3 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = k4(i, j, k, l);
          a1 = std::max(a1, std::fabs(v + k4(j, i, k, l)));
          a2 = std::max(a2, std::fabs(v + k4(i, j, l, k)));
          b = std::max(b, std::fabs(v - k4(k, l, i, j)));
          c1 = std::max(c1, std::fabs(v + k4(j, k, i, l) + k4(k, i, j, l)));
          c3 = std::max(c3, std::fabs(v + k4(i, k, l, j) + k4(i, l, j, k)));
        }
  KSymmetryResiduals out;
  out.a1 = make_residual(a1, {scale});
  out.a2 = make_residual(a2, {scale});
  out.b = make_residual(b, {scale});
  out.c_first3 = make_residual(c1, {scale});
  out.c_last3 = make_residual(c3, {scale});
  return out;
}

// ---------------------------------------------------------------------------
// Eigenstructure of b_i^j with respect to g.
// ---------------------------------------------------------------------------

struct EigenStructure {
  Vec values;                              // ascending
  Mat vectors;                             // column k: g-orthonormal eigenvector
  std::vector<std::vector<int>> clusters;  // eigenvalue-multiplicity clusters
  std::vector<int> cluster_of;             // eigenvector index -> cluster id
  double cluster_tol = 0.0;
  double threshold = 0.0;                  // absolute gap threshold actually used
};

/// Solve b v = lambda g v as a symmetric-definite pencil so that real
/// eigenvalues and g-orthogonality are structural. Eigenvalues whose gap is
/// below the threshold are clustered; a gap between one half and twice the
/// threshold is ambiguous and raises ClusterAmbiguityError so the caller
/// picks a saner cluster_tol instead of receiving a fragile partition.
inline EigenStructure eigendecompose(const PointFrame& fr, const std::string& b_name,
                                     double cluster_tol = 1e-6) {
  const FieldValues& f = fr.field(b_name);
  if (!f.symmetric)
    throw NonsymmetricFieldError("eigendecompose requires a symmetric field");

  EigenSym es = eigen_generalized(f.b, fr.g);
  EigenStructure out;
  out.values = es.values;
  out.vectors = es.vectors;
  out.cluster_tol = cluster_tol;

  double max_abs = 0.0;
  for (double v : out.values) max_abs = std::max(max_abs, std::fabs(v));
  double thr = cluster_tol * (1.0 + max_abs);
  out.threshold = thr;

  const int n = static_cast<int>(out.values.size());
  out.cluster_of.assign(static_cast<std::size_t>(n), 0);
  out.clusters.push_back({0});
  for (int i = 1; i < n; ++i) {
    double gap = out.values[static_cast<std::size_t>(i)] -
                 out.values[static_cast<std::size_t>(i - 1)];
    if (gap > 0.5 * thr && gap <= 2.0 * thr)
      throw ClusterAmbiguityError(
          "eigenvalue gap " + detail::format_double(gap) + " straddles the cluster threshold " +
          detail::format_double(thr) + " within a factor of 2; adjust cluster_tol");
    if (gap > thr) {
      out.clusters.push_back({});
      out.cluster_of[static_cast<std::size_t>(i)] = static_cast<int>(out.clusters.size()) - 1;
    } else {
      out.cluster_of[static_cast<std::size_t>(i)] = static_cast<int>(out.clusters.size()) - 1;
    }
    out.clusters.back().push_back(i);
  }
  return out;
}

/// EigenStructure invariants as residuals: the eigenpair equation and
/// g-orthonormality of the basis.
struct EigenSelfTest {
  Residual eigenpair;   // b_i^j v^i - lambda v^j
  Residual gram;        // v_a^T g v_b - delta_ab
};

inline EigenSelfTest eigen_selftest(const PointFrame& fr, const std::string& b_name,
                                    const EigenStructure& eig) {
  const FieldValues& f = fr.field(b_name);
  const int n = fr.n();
  EigenSelfTest out;
  double raw = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += eig.vectors(i, a) * f.bmix(i, j);
      raw = std::max(raw, std::fabs(s - eig.values[static_cast<std::size_t>(a)] *
                                            eig.vectors(j, a)));
    }
  }
  double scale = f.bmix.max_abs();
  for (double v : eig.values) scale = std::max(scale, std::fabs(v));
  out.eigenpair = make_residual(raw, {scale});

  double graw = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += eig.vectors(i, a) * fr.g(i, j) * eig.vectors(j, b);
      graw = std::max(graw, std::fabs(s - (a == b ? 1.0 : 0.0)));
    }
  out.gram = make_residual(graw, {1.0});
  return out;
}

// ---------------------------------------------------------------------------
// Invariance of V_lambda ^ V_mu under the curvature operator, in the
// contraction form X^i Y^j Z^k R_ijkl = 0 for eigenvectors X, Y, Z whose
// eigenvalue clusters satisfy cl(X) != cl(Z) and cl(Y) != cl(Z).
// ---------------------------------------------------------------------------

struct InvarianceResult {
  Residual worst;                 // max over admissible triples
  std::array<int, 3> witness{-1, -1, -1};  // eigenvector indices of the worst triple
  int triple_count = 0;
  bool vacuous = false;           // no admissible triple (e.g. b = c g)
  Residual degenerate;            // lambda = mu branch, R_lkij X^i Y^j Z^k form
  int degenerate_count = 0;
};

inline InvarianceResult invariance_check(const PointFrame& fr, const EigenStructure& eig) {
  const int n = fr.n();
  double rscale = 0.0;
  for (double v : fr.riem04.flat()) rscale = std::max(rscale, std::fabs(v));
  double vscale = eig.vectors.max_abs();

  InvarianceResult out;
  double worst_raw = -1.0, degen_raw = 0.0;

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (eig.cluster_of[static_cast<std::size_t>(a)] ==
                eig.cluster_of[static_cast<std::size_t>(c)] ||
            eig.cluster_of[static_cast<std::size_t>(b)] ==
                eig.cluster_of[static_cast<std::size_t>(c)])
          continue;
        ++out.triple_count;
        double triple_max = 0.0;
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                s += fr.riem04(i, j, k, l) * eig.vectors(i, a) * eig.vectors(j, b) *
                     eig.vectors(k, c);
          triple_max = std::max(triple_max, std::fabs(s));
        }
        if (triple_max > worst_raw) {
          worst_raw = triple_max;
          out.witness = {a, b, c};
        }
        // Degenerate branch: X and Y from the same eigenspace.
        if (eig.cluster_of[static_cast<std::size_t>(a)] ==
            eig.cluster_of[static_cast<std::size_t>(b)]) {
          ++out.degenerate_count;
          for (int l = 0; l < n; ++l) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                  s += fr.riem04(l, k, i, j) * eig.vectors(i, a) * eig.vectors(j, b) *
                       eig.vectors(k, c);
            degen_raw = std::max(degen_raw, std::fabs(s));
          }
        }
      }

  if (out.triple_count == 0) {
    out.vacuous = true;
    out.worst = Residual{0.0, 0.0};
    out.degenerate = Residual{0.0, 0.0};
    return out;
  }
  out.worst = make_residual(worst_raw, {rscale, vscale});
  out.degenerate = make_residual(degen_raw, {rscale, vscale});
  return out;
}

// ---------------------------------------------------------------------------
// The 3x3 eigenvalue system from the invariance proof.
// ---------------------------------------------------------------------------

struct VandermondeSystem {
  std::array<std::array<double, 3>, 3> matrix;
  double det_cofactor;  // cofactor expansion along the first row
  double det_factored;  // (lambda - mu)(lambda - nu)(nu - mu)
};

inline VandermondeSystem vandermonde_system(double lambda, double mu, double nu) {
  VandermondeSystem out;
  out.matrix = {{{1.0, 1.0, 1.0},
                 {lambda, mu, nu},
                 {mu * nu, lambda * nu, lambda * mu}}};
  const auto& m = out.matrix;
  out.det_cofactor = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  out.det_factored = (lambda - mu) * (lambda - nu) * (nu - mu);
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostic trace of the proof: the three stacked contractions whose matrix
// is the Vandermonde-like system above. Row 1 needs only the Riemann
// symmetries, row 2 is the cyclic identity contracted with the eigenvectors,
// row 3 is the last-three-index Bianchi identity of K.
// ---------------------------------------------------------------------------

struct ProofTrace {
  Residual row1, row2, row3;
  double lambda, mu, nu;
};

inline ProofTrace proof_trace(const PointFrame& fr, const EigenStructure& eig,
                              const std::array<int, 3>& triple) {
  const int n = fr.n();
  double lambda = eig.values[static_cast<std::size_t>(triple[0])];
  double mu = eig.values[static_cast<std::size_t>(triple[1])];
  double nu = eig.values[static_cast<std::size_t>(triple[2])];

  double rscale = 0.0;
  for (double v : fr.riem04.flat()) rscale = std::max(rscale, std::fabs(v));
  double scale = std::max({rscale, std::fabs(lambda), std::fabs(mu), std::fabs(nu),
                           eig.vectors.max_abs()});

  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  for (int l = 0; l < n; ++l) {
    double v1 = 0.0, v2 = 0.0, v3 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double w = eig.vectors(i, triple[0]) * eig.vectors(j, triple[1]) *
                     eig.vectors(k, triple[2]);
          v1 += fr.riem04(l, i, j, k) * w;
          v2 += fr.riem04(l, j, k, i) * w;
          v3 += fr.riem04(l, k, i, j) * w;
        }
    r1 = std::max(r1, std::fabs(v1 + v2 + v3));
    r2 = std::max(r2, std::fabs(lambda * v1 + mu * v2 + nu * v3));
    r3 = std::max(r3, std::fabs(mu * nu * v1 + lambda * nu * v2 + lambda * mu * v3));
  }

  ProofTrace out;
  out.lambda = lambda;
  out.mu = mu;
  out.nu = nu;
  out.row1 = make_residual(r1, {scale});
  out.row2 = make_residual(r2, {scale});
  out.row3 = make_residual(r3, {scale});
  return out;
}

}  // namespace codazzi
