#pragma once

namespace codazzi {

/// The pinned sign-and-index convention sheet, printed by `codazzi
/// conventions` and identified in every report. docs/conventions.md carries
/// the long-form derivation.
inline const char* conventions_text() {
  return R"(codazzi-conventions-1

Coordinates and metric
  g_ij          metric components, symmetric, positive definite on the chart;
                the upper triangle of the input is authoritative.
  g^ij          inverse metric.

Connection
  Gamma^k_ij = 1/2 g^km (d_i g_jm + d_j g_im - d_m g_ij)

Curvature (the sign choice of this project)
  R_jkl^m = d_k Gamma^m_jl - d_j Gamma^m_kl
          + Gamma^p_jl Gamma^m_kp - Gamma^p_kl Gamma^m_jp

  This choice is pinned by two requirements:
    (1) the commutator identity holds with these exact signs:
          [nabla_i, nabla_j] b_kl = R_ijk^m b_ml + R_ijl^m b_km
    (2) Ricci_kl = -R_mkl^m gives scalar curvature +2 on the unit 2-sphere.
  Only the combination of a curvature formula and a Ricci contraction is
  fixed by (1)+(2); the formula above is this project's choice and is locked
  by the sphere fixture in the test suite.

Derived tensors
  R_ijkl    = R_ijk^m g_ml                       (all indices down)
  Ricci_kl  = -R_mkl^m = g^ms R_mksl             (positive on round spheres)
  R         = g^kl Ricci_kl
  S_kj      = Ricci_kj - R/(2(n-1)) g_kj         (the Weyl 1-form tensor)
  C_ijkl    = R_ijkl
            - (g_ik Ricci_jl - g_il Ricci_jk + g_jl Ricci_ik - g_jk Ricci_il)/(n-2)
            + R (g_ik g_jl - g_il g_jk) / ((n-1)(n-2))
  C_jkl^m   = C_jkls g^sm
  The conformal tensor is validated by total trace-freeness rather than by
  trusting the transcription above.

Identities used as engine self-tests (hold on every chart)
  R_ijkl = -R_jikl = -R_ijlk,  R_ijkl = R_klij
  R_ijkl + R_jkil + R_kijl = 0                   (first Bianchi)
  nabla_i g_jk = 0                               (metric compatibility)
  nabla_m R_jkl^m = nabla_k Ricci_jl - nabla_j Ricci_kl
                                                 (contracted second Bianchi)

Covariant derivatives
  The derivative index is written (and stored) first:
  nabla_i b_kl = d_i b_kl - Gamma^m_ik b_ml - Gamma^m_il b_km.
  Second derivatives are covariant derivatives of the (0,3) field nabla b,
  never repeated partials.

Residual normalization
  Every identity is reported as a scale-normalized residual:
    max-abs violation / (1 + max-abs of the identity's input components).
  Default tolerance 1e-8, overridable per check, per manifest, by --tol and
  by the CODAZZI_TOL environment variable.
)";
}

}  // namespace codazzi
