#include "axon/lyapunov.hpp"

#include <cmath>

#include "axon/numerics.hpp"

namespace axon {

namespace {

Mat2 closed_loop_matrix(const DerivedConstants& dc, const GainConfig& gc) {
  return dc.A1 + dc.B * gc.K().transpose();
}

Mat2 solve_lyapunov_2x2(const Mat2& A, const Mat2& Q) {
  // A^T P + P A = -Q with P = [[p11,p12],[p12,p22]]; 3x3 linear system.
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  M << 2.0 * A(0, 0), 2.0 * A(1, 0), 0.0,
       A(0, 1), A(0, 0) + A(1, 1), A(1, 0),
       0.0, 2.0 * A(0, 1), 2.0 * A(1, 1);
  rhs << -Q(0, 0), -Q(0, 1), -Q(1, 1);
  const Eigen::Vector3d p = M.fullPivLu().solve(rhs);
  Mat2 P;
  P << p(0), p(1), p(1), p(2);
  return P;
}

}  // namespace

LyapunovDiagnostics lyapunov_setup(const DerivedConstants& dc, const GainConfig& gc,
                                   const AlphaConstants& ac, const EtmConfig& etm,
                                   const BioParams& p, Scalar l_bar) {
  const Mat2 Acl = closed_loop_matrix(dc, gc);
  const auto eig = Acl.eigenvalues();
  if (!(eig(0).real() < 0 && eig(1).real() < 0))
    fail(ErrorKind::GainConditionViolated, "closed-loop matrix is not Hurwitz");
  LyapunovDiagnostics d;
  d.Q = Mat2::Identity();
  d.P = solve_lyapunov_2x2(Acl, d.Q);
  if (!(d.P(0, 0) > 0 && d.P.determinant() > 0))
    fail(ErrorKind::LinearSolveFailure, "Lyapunov solution is not positive definite");
  d.d1 = d1_lower_bound(ac, etm.beta[3], p, l_bar);
  const Scalar lam_min_q = 1.0;  // Q = I
  const Scalar btp = (d.P * dc.B).squaredNorm();
  d.d2 = 0.5 * p.D * lam_min_q / (64.0 * btp);
  return d;
}

Scalar lyapunov_residual(const LyapunovDiagnostics& d, const DerivedConstants& dc,
                         const GainConfig& gc) {
  const Mat2 Acl = closed_loop_matrix(dc, gc);
  const Mat2 R = Acl.transpose() * d.P + d.P * Acl + d.Q;
  return R.cwiseAbs().maxCoeff();
}

LyapunovValues lyapunov_eval(const VecX& w, Scalar l, const Vec2& X, Scalar m,
                             const LyapunovDiagnostics& d) {
  const int N = static_cast<int>(w.size()) - 1;
  const Scalar dx = l / N;
  LyapunovValues v;
  v.V1 = 0.5 * l2_norm_sq(w, dx);
  v.V2 = 0.5 * l2_norm_sq(gradient(w, dx), dx);
  v.V3 = X.dot(d.P * X);
  v.V = d.d1 * v.V1 + v.V2 + d.d2 * v.V3 - m;
  return v;
}

}  // namespace axon
