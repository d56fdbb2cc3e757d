#include "axon/params.hpp"

#include <cmath>

namespace axon {

void BioParams::validate() const {
  if (!(D > 0)) fail(ErrorKind::InvalidParams, "D must be positive");
  if (!(l_c > 0)) fail(ErrorKind::InvalidParams, "l_c must be positive");
  if (!(c_inf > 0)) fail(ErrorKind::InvalidParams, "c_inf must be positive");
  if (!(r_g > 0)) fail(ErrorKind::InvalidParams, "r_g must be positive");
  if (!(l_s > 0)) fail(ErrorKind::InvalidParams, "l_s must be positive");
  if (!(g >= 0)) fail(ErrorKind::InvalidParams, "g must be nonnegative");
  if (!(a >= 0)) fail(ErrorKind::InvalidParams, "a must be nonnegative");
  if (!std::isfinite(rt_g)) fail(ErrorKind::InvalidParams, "rt_g must be finite");
}

DerivedConstants derive_constants(const BioParams& p) {
  p.validate();
  DerivedConstants dc;
  const Scalar disc = std::sqrt(p.a * p.a + 4.0 * p.D * p.g);
  dc.lambda_plus = (p.a + disc) / (2.0 * p.D);
  dc.lambda_minus = (p.a - disc) / (2.0 * p.D);
  dc.K_plus = 0.5 + (p.a - 2.0 * p.g * p.l_c) / (2.0 * disc);
  dc.K_minus = 0.5 - (p.a - 2.0 * p.g * p.l_c) / (2.0 * disc);
  dc.q_s_star = -p.c_inf * (dc.K_plus * std::exp(-dc.lambda_plus * p.l_s) +
                            dc.K_minus * std::exp(-dc.lambda_minus * p.l_s));
  dc.beta = p.D / p.l_c;
  dc.kappa = p.r_g / p.l_c;
  dc.a1_tilde = (p.a - p.r_g * p.c_inf) / p.l_c - p.g - p.rt_g;
  dc.a2_tilde = p.c_inf * (dc.lambda_plus * dc.lambda_plus * dc.K_plus +
                           dc.lambda_minus * dc.lambda_minus * dc.K_minus);
  dc.a3_tilde = (p.a * p.a + p.D * p.g - p.a * p.g * p.l_c) / (p.D * p.D);
  dc.A << dc.a1_tilde, -dc.beta * dc.a2_tilde, p.r_g, 0.0;
  dc.A1 << dc.a1_tilde, dc.a3_tilde, p.r_g, 0.0;
  dc.B << -dc.beta, 0.0;
  dc.H << 1.0, -(p.a - p.g * p.l_c) * p.c_inf / p.D;
  return dc;
}

Scalar equilibrium_concentration(const DerivedConstants& dc, const BioParams& p, Scalar x,
                                 bool* extrapolated) {
  if (extrapolated) *extrapolated = (x < 0.0 || x > p.l_s);
  return p.c_inf * (dc.K_plus * std::exp(dc.lambda_plus * (x - p.l_s)) +
                    dc.K_minus * std::exp(dc.lambda_minus * (x - p.l_s)));
}

Scalar equilibrium_concentration_dx(const DerivedConstants& dc, const BioParams& p, Scalar x) {
  return p.c_inf * (dc.K_plus * dc.lambda_plus * std::exp(dc.lambda_plus * (x - p.l_s)) +
                    dc.K_minus * dc.lambda_minus * std::exp(dc.lambda_minus * (x - p.l_s)));
}

Scalar equilibrium_concentration_dxx(const DerivedConstants& dc, const BioParams& p, Scalar x) {
  const Scalar lp = dc.lambda_plus, lm = dc.lambda_minus;
  return p.c_inf * (dc.K_plus * lp * lp * std::exp(lp * (x - p.l_s)) +
                    dc.K_minus * lm * lm * std::exp(lm * (x - p.l_s)));
}

NonlinearTerms nonlinear_terms(const Vec2& X, const DerivedConstants& dc, const BioParams& p) {
  if (!X.allFinite()) fail(ErrorKind::NonFinite, "nonlinear_terms: state is not finite");
  const Scalar z1 = X(0), z2 = X(1);
  if (std::abs(dc.lambda_plus * z2) > 50.0)
    fail(ErrorKind::Overflow, "nonlinear_terms: |lambda_plus*z2| exceeds validity guard");
  const Scalar ep = std::exp(dc.lambda_plus * z2);
  const Scalar em = std::exp(dc.lambda_minus * z2);
  NonlinearTerms t{};
  t.f1 = -p.c_inf * (dc.K_plus * dc.lambda_plus * ep + dc.K_minus * dc.lambda_minus * em) +
         dc.a2_tilde * z2 + p.c_inf * (p.a - p.g * p.l_c) / p.D;
  t.h_tilde = p.c_inf * (1.0 - dc.K_plus * ep - dc.K_minus * em);
  t.f = -dc.kappa * z1 * z1 + dc.beta * t.f1;
  t.h = z1 + t.h_tilde;
  t.h_star = t.h - dc.H.dot(X);
  return t;
}

bool gain_admissible(Scalar k1, Scalar k2, const DerivedConstants& dc) {
  return k1 > dc.a1_tilde / dc.beta && k2 > dc.a3_tilde / dc.beta;
}

}  // namespace axon
