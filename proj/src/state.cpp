#include "axon/state.hpp"

namespace axon {

PlantState PlantState::uniform(int N, Scalar c0, Scalar l0) {
  if (N < 2) fail(ErrorKind::InvalidParams, "grid needs at least 2 segments");
  if (!(l0 > 0)) fail(ErrorKind::DomainCollapse, "initial length must be positive");
  PlantState s;
  s.xi = VecX::LinSpaced(N + 1, 0.0, 1.0);
  s.c = VecX::Constant(N + 1, c0);
  s.c_c = c0;
  s.l = l0;
  return s;
}

ErrorState to_error_state(const PlantState& s, const DerivedConstants& dc, const BioParams& p) {
  if (!(s.l > 0)) fail(ErrorKind::DomainCollapse, "to_error_state: l must be positive");
  ErrorState e;
  const int n = static_cast<int>(s.c.size());
  e.u.resize(n);
  for (int i = 0; i < n; ++i)
    e.u(i) = s.c(i) - equilibrium_concentration(dc, p, s.xi(i) * s.l);
  e.X << s.c_c - p.c_inf, s.l - p.l_s;
  return e;
}

PlantState from_error_state(const ErrorState& e, const DerivedConstants& dc, const BioParams& p,
                            Scalar l, Scalar t) {
  const int n = static_cast<int>(e.u.size());
  if (n < 3) fail(ErrorKind::GridMismatch, "from_error_state: grid too small");
  if (!(l > 0)) fail(ErrorKind::DomainCollapse, "from_error_state: l must be positive");
  PlantState s;
  s.t = t;
  s.xi = VecX::LinSpaced(n, 0.0, 1.0);
  s.c.resize(n);
  for (int i = 0; i < n; ++i)
    s.c(i) = e.u(i) + equilibrium_concentration(dc, p, s.xi(i) * l);
  s.c_c = e.X(0) + p.c_inf;
  s.l = l;
  return s;
}

Scalar boundary_identity_residual(const ErrorState& e, const DerivedConstants& dc,
                                  const BioParams& p) {
  const NonlinearTerms t = nonlinear_terms(e.X, dc, p);
  return e.u(e.u.size() - 1) - t.h;
}

}  // namespace axon
