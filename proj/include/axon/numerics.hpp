#pragma once

#include <functional>

#include "axon/types.hpp"

namespace axon {

/// Composite trapezoid weights for N+1 uniform nodes with spacing dx.
VecX trapezoid_weights(int nodes, Scalar dx);

inline Scalar trapezoid(const VecX& f, Scalar dx) {
  const int n = static_cast<int>(f.size());
  if (n < 2) return 0.0;
  return dx * (f.sum() - 0.5 * (f(0) + f(n - 1)));
}

/// Thomas algorithm for a tridiagonal system. lo(0) and up(n-1) are ignored.
/// Throws LinearSolveFailure on a vanishing pivot.
VecX solve_tridiagonal(const VecX& lo, const VecX& diag, const VecX& up, const VecX& rhs);

/// Adaptive Simpson quadrature to a relative tolerance.
Scalar adaptive_simpson(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b,
                        Scalar rel_tol, int max_depth = 40);

/// exp(M) for a 4x4 via scaling-and-squaring (Pade order 13).
Mat4 expm(const Mat4& m);

/// Two-point quintic Hermite on [0,h] from endpoint values and first/second
/// derivatives; returns the value and first derivative at offset s in [0,h].
/// Exact at the endpoints.
void quintic_hermite(Scalar h, Scalar ya, Scalar da, Scalar dda, Scalar yb, Scalar db,
                     Scalar ddb, Scalar s, Scalar* value, Scalar* deriv);

/// L2 norm squared of a sampled profile: trapezoid of f^2 with spacing dx.
inline Scalar l2_norm_sq(const VecX& f, Scalar dx) {
  const int n = static_cast<int>(f.size());
  if (n < 2) return 0.0;
  Scalar s = 0.0;
  for (int i = 0; i < n; ++i) {
    const Scalar w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    s += w * f(i) * f(i);
  }
  return s * dx;
}

/// Node-wise first derivative, second order: central interior, one-sided ends.
VecX gradient(const VecX& f, Scalar dx);

}  // namespace axon
