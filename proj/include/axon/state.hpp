#pragma once

#include "axon/params.hpp"
#include "axon/types.hpp"

namespace axon {

/// Moving-domain plant state on a front-fixed grid: xi in [0,1] uniform,
/// physical position x = xi * l. Invariant: c(N) == c_c.
struct PlantState {
  Scalar t = 0.0;   ///< time, s
  VecX xi;          ///< N+1 normalized coordinates
  VecX c;           ///< concentration samples at x = xi*l, mol/m^3
  Scalar c_c = 0.0;  ///< cone concentration, mol/m^3
  Scalar l = 0.0;   ///< axon length, m

  int segments() const { return static_cast<int>(xi.size()) - 1; }

  /// Uniform initial profile c0 on a fresh grid of N segments.
  static PlantState uniform(int N, Scalar c0, Scalar l0);
};

/// Reference-error coordinates: u = c - c_eq on the same grid, X = [z1, z2].
struct ErrorState {
  VecX u;
  Vec2 X = Vec2::Zero();
};

ErrorState to_error_state(const PlantState& s, const DerivedConstants& dc, const BioParams& p);

/// Exact inverse of to_error_state; l must match X(1) + l_s.
PlantState from_error_state(const ErrorState& e, const DerivedConstants& dc, const BioParams& p,
                            Scalar l, Scalar t = 0.0);

/// Residual of the boundary identity u(l) = h(X); zero up to rounding.
Scalar boundary_identity_residual(const ErrorState& e, const DerivedConstants& dc,
                                  const BioParams& p);

}  // namespace axon
