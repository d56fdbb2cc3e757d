#pragma once

#include "axon/trigger.hpp"

namespace axon {

struct LyapunovDiagnostics {
  Mat2 P = Mat2::Identity();
  Mat2 Q = Mat2::Identity();
  Scalar d1 = 1.0;
  Scalar d2 = 1.0;
};

struct LyapunovValues {
  Scalar V1 = 0, V2 = 0, V3 = 0, V = 0;
};

/// Solves (A1+BK^T)^T P + P (A1+BK^T) = -Q with Q = I in closed form,
/// picks d1 at its lower bound and d2 at half its upper bound. Throws on
/// non-Hurwitz gains.
LyapunovDiagnostics lyapunov_setup(const DerivedConstants& dc, const GainConfig& gc,
                                   const AlphaConstants& ac, const EtmConfig& etm,
                                   const BioParams& p, Scalar l_bar);

/// Residual norm of the Lyapunov equation for the built P.
Scalar lyapunov_residual(const LyapunovDiagnostics& d, const DerivedConstants& dc,
                         const GainConfig& gc);

/// V1 = ||w||^2/2, V2 = ||w_x||^2/2 (one-sided ends), V3 = X^T P X,
/// V = d1 V1 + V2 + d2 V3 - m.
LyapunovValues lyapunov_eval(const VecX& w, Scalar l, const Vec2& X, Scalar m,
                             const LyapunovDiagnostics& d);

}  // namespace axon
