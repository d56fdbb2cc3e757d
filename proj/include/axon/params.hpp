#pragma once

#include "axon/types.hpp"

namespace axon {

/// Raw biological parameters of the tubulin/axon model, SI units throughout.
struct BioParams {
  Scalar D = 1e-11;        ///< diffusivity, m^2/s
  Scalar a = 1e-8;         ///< advection velocity toward the cone, m/s
  Scalar g = 5e-7;         ///< degradation rate, 1/s
  Scalar r_g = 1.783e-5;   ///< growth-rate constant, m^4/(mol s)
  Scalar rt_g = 0.053;     ///< lumped growth rate, 1/s (units by dimensional analysis)
  Scalar l_c = 4e-6;       ///< growth-cone length, m
  Scalar c_inf = 0.0119;   ///< equilibrium cone concentration, mol/m^3
  Scalar l_s = 1.2e-5;     ///< target axon length, m

  void validate() const;
};

/// Every closed-form constant derived from BioParams: the spatial eigenvalues
/// and profile coefficients of the equilibrium, the reduced rates, and the
/// small matrices of the reference-error dynamics.
struct DerivedConstants {
  Scalar lambda_plus = 0, lambda_minus = 0;  // roots of D*lam^2 - a*lam - g = 0, 1/m
  Scalar K_plus = 0, K_minus = 0;            // profile coefficients, sum to 1
  Scalar q_s_star = 0;                       // steady soma input, mol/m^3
  Scalar a1_tilde = 0;                       // 1/s
  Scalar a2_tilde = 0;                       // mol/m^5
  Scalar a3_tilde = 0;                       // 1/m^2
  Scalar beta = 0;                           // D/l_c, m/s
  Scalar kappa = 0;                          // r_g/l_c, m^3/(mol s)
  Mat2 A = Mat2::Zero();                     // nonlinear-system matrix
  Mat2 A1 = Mat2::Zero();                    // design (linearized-form) matrix
  Vec2 B = Vec2::Zero();                     // input matrix, [-beta, 0]
  Vec2 H = Vec2::Zero();                     // boundary output vector
};

DerivedConstants derive_constants(const BioParams& p);

/// Equilibrium concentration profile c_eq(x) for the target length.
/// Evaluation outside [0, l_s] is allowed; *extrapolated is set if given.
Scalar equilibrium_concentration(const DerivedConstants& dc, const BioParams& p, Scalar x,
                                 bool* extrapolated = nullptr);
Scalar equilibrium_concentration_dx(const DerivedConstants& dc, const BioParams& p, Scalar x);
Scalar equilibrium_concentration_dxx(const DerivedConstants& dc, const BioParams& p, Scalar x);

/// Nonlinear remainder terms of the reference-error dynamics at state X = [z1, z2].
struct NonlinearTerms {
  Scalar f1;       ///< profile remainder in the cone balance
  Scalar h_tilde;  ///< boundary remainder in z2
  Scalar f;        ///< ODE remainder, -kappa z1^2 + beta f1(z2)
  Scalar h;        ///< boundary value, z1 + h_tilde(z2)
  Scalar h_star;   ///< second-order boundary remainder, h - H^T X
};

/// Throws Overflow when |lambda_plus * z2| exceeds the validity guard (50).
NonlinearTerms nonlinear_terms(const Vec2& X, const DerivedConstants& dc, const BioParams& p);

/// Feedback-gain admissibility: k1 > a1_tilde/beta and k2 > a3_tilde/beta.
bool gain_admissible(Scalar k1, Scalar k2, const DerivedConstants& dc);

}  // namespace axon
