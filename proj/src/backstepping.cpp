#include "axon/backstepping.hpp"

#include <cmath>

#include "axon/numerics.hpp"

namespace axon {

void KernelModel::phi_direct(Scalar s, Vec2* phi_out, Vec2* dphi, Vec2* ddphi) const {
  const RowVec4 scaled(phi0_row(0), phi0_row(1), phi0_row(2) * balance_, phi0_row(3) * balance_);
  const RowVec4 v_bal = scaled * expm(Mat4(n1_balanced_ * s));
  const RowVec4 v(v_bal(0), v_bal(1), v_bal(2) / balance_, v_bal(3) / balance_);
  if (phi_out) *phi_out = Vec2(v(0), v(1));
  if (dphi) *dphi = Vec2(v(2), v(3));
  if (ddphi) {
    const RowVec4 vp = v * N1;
    *ddphi = Vec2(vp(2), vp(3));
  }
}

std::pair<Vec2, Vec2> KernelModel::phi(Scalar s) const {
  const Scalar tol = 1e-12 * l_bar;
  if (s > tol || s < -l_bar - tol)
    fail(ErrorKind::RangeError, "phi: argument outside [-l_bar, 0]");
  s = std::min(std::max(s, -l_bar), 0.0);
  int k = static_cast<int>((s + l_bar) / ds_);
  if (k >= zero_index_) k = zero_index_ - 1;
  const Scalar off = s - table_s(k);
  Vec2 value, deriv;
  const auto row_a = table_.row(k);
  const auto row_b = table_.row(k + 1);
  for (int c = 0; c < 2; ++c) {
    Scalar v, d;
    quintic_hermite(ds_, row_a(c), row_a(2 + c), row_a(4 + c), row_b(c), row_b(2 + c),
                    row_b(4 + c), off, &v, &d);
    value(c) = v;
    deriv(c) = d;
  }
  return {value, deriv};
}

Vec2 KernelModel::phi_second(Scalar s) const {
  const auto [value, deriv] = phi(s);
  const RowVec4 v(value(0), value(1), deriv(0), deriv(1));
  const RowVec4 vp = v * N1;
  return Vec2(vp(2), vp(3));
}

KernelModel build_kernel_model(const DerivedConstants& dc, const BioParams& p,
                               const GainConfig& gc, Scalar l_bar, int grid_segments,
                               int density) {
  if (!gain_admissible(gc.k1, gc.k2, dc))
    fail(ErrorKind::GainConditionViolated,
         "gains violate k1 > a1_tilde/beta and k2 > a3_tilde/beta");
  if (!(l_bar > 0)) fail(ErrorKind::InvalidParams, "l_bar must be positive");
  if (grid_segments < 4 || density < 1)
    fail(ErrorKind::InvalidParams, "kernel table resolution too small");

  KernelModel km;
  km.dc = dc;
  km.bio = p;
  km.gains = gc;
  km.l_bar = l_bar;

  const Mat2 BHt = dc.B * dc.H.transpose();
  const Mat2 M0 = (p.g * Mat2::Identity() + dc.A1 + (p.a / p.D) * BHt) / p.D;
  const Mat2 M1 = (p.a * Mat2::Identity() - BHt) / p.D;
  km.N1.block<2, 2>(2, 0) = Mat2::Identity();
  km.N1.block<2, 2>(0, 2) = M0;
  km.N1.block<2, 2>(2, 2) = M1;

  const Scalar htb = dc.H.dot(dc.B);
  const Vec2 dphi0 = gc.K() - (htb / p.D) * dc.H;
  km.phi0_row << dc.H(0), dc.H(1), dphi0(0), dphi0(1);

  // Diagonal similarity diag(1,1,s0,s0) tames the entry spread before expm.
  const Scalar m0_norm = M0.cwiseAbs().colwise().sum().maxCoeff();
  km.balance_ = m0_norm > 0 ? 1.0 / std::sqrt(m0_norm) : 1.0;
  km.n1_balanced_ = km.N1;
  km.n1_balanced_.block<2, 2>(0, 2) = M0 * km.balance_;
  km.n1_balanced_.block<2, 2>(2, 0) = Mat2::Identity() / km.balance_;

  const int side = density * grid_segments;
  km.zero_index_ = side;
  km.ds_ = l_bar / side;
  km.table_.resize(2 * side + 1, 6);
  for (int k = 0; k <= 2 * side; ++k) {
    Vec2 v, dv, ddv;
    km.phi_direct(km.table_s(k), &v, &dv, &ddv);
    km.table_.row(k) << v(0), v(1), dv(0), dv(1), ddv(0), ddv(1);
  }
  if (!km.table_.allFinite())
    fail(ErrorKind::MatrixExponentialFailure, "kernel table contains non-finite entries");
  return km;
}

Scalar kernel_k(const KernelModel& km, Scalar x, Scalar y) {
  if (x > y) fail(ErrorKind::RangeError, "kernel_k requires x <= y");
  const auto [v, dv] = km.phi(x - y);
  (void)dv;
  return -(1.0 / km.bio.D) * v.dot(km.dc.B);
}

void TransformWorkspace::prepare(const KernelModel& km, Scalar l_now, int segments) {
  const int n = segments + 1;
  if (kbar.size() != n) {
    kbar.resize(n);
    phi1.resize(n);
    phi2.resize(n);
  }
  l = l_now;
  const Scalar h = 1.0 / segments;
  const Scalar scale = -(1.0 / km.bio.D);
  for (int d = 0; d < n; ++d) {
    const auto [v, dv] = km.phi(-d * h * l_now);
    (void)dv;
    phi1(d) = v(0);
    phi2(d) = v(1);
    kbar(d) = scale * (v(0) * km.dc.B(0) + v(1) * km.dc.B(1));
  }
}

Scalar continuous_control(const KernelModel& km, const ErrorState& e, Scalar l,
                          TransformWorkspace& ws) {
  const int N = static_cast<int>(e.u.size()) - 1;
  if (N < 2) fail(ErrorKind::GridMismatch, "continuous_control: grid too small");
  if (l > km.l_bar) fail(ErrorKind::RangeError, "continuous_control: l exceeds l_bar");
  ws.prepare(km, l, N);
  const Scalar dx = l / N;
  Scalar integral = 0.0;
  for (int j = 0; j <= N; ++j) {
    const Scalar w = (j == 0 || j == N) ? 0.5 : 1.0;
    integral += w * ws.kbar(j) * e.u(j);
  }
  integral *= dx;
  return integral + ws.phi1(N) * e.X(0) + ws.phi2(N) * e.X(1);
}

Scalar sampled_control(const KernelModel& km, const ErrorState& e, Scalar l,
                       TransformWorkspace& ws) {
  return continuous_control(km, e, l, ws);
}

VecX forward_transform(const KernelModel& km, const ErrorState& e, Scalar l,
                       TransformWorkspace& ws) {
  const int N = static_cast<int>(e.u.size()) - 1;
  if (N < 2) fail(ErrorKind::GridMismatch, "forward_transform: grid too small");
  if (l > km.l_bar) fail(ErrorKind::RangeError, "forward_transform: l exceeds l_bar");
  if (ws.l != l || ws.kbar.size() != N + 1) ws.prepare(km, l, N);
  const Scalar dx = l / N;
  VecX w(N + 1);
  for (int i = 0; i < N; ++i) {
    Scalar integral = 0.5 * ws.kbar(0) * e.u(i);
    for (int j = i + 1; j < N; ++j) integral += ws.kbar(j - i) * e.u(j);
    integral += 0.5 * ws.kbar(N - i) * e.u(N);
    w(i) = e.u(i) - dx * integral - (ws.phi1(N - i) * e.X(0) + ws.phi2(N - i) * e.X(1));
  }
  w(N) = e.u(N) - (ws.phi1(0) * e.X(0) + ws.phi2(0) * e.X(1));
  return w;
}

VecX inverse_transform(const KernelModel& km, const VecX& w, const Vec2& X, Scalar l,
                       TransformWorkspace& ws) {
  const int N = static_cast<int>(w.size()) - 1;
  if (N < 2) fail(ErrorKind::GridMismatch, "inverse_transform: grid too small");
  if (l > km.l_bar) fail(ErrorKind::RangeError, "inverse_transform: l exceeds l_bar");
  if (ws.l != l || ws.kbar.size() != N + 1) ws.prepare(km, l, N);
  const Scalar dx = l / N;
  VecX u(N + 1);
  u(N) = w(N) + ws.phi1(0) * X(0) + ws.phi2(0) * X(1);
  for (int i = N - 1; i >= 0; --i) {
    Scalar tail = 0.5 * ws.kbar(N - i) * u(N);
    for (int j = i + 1; j < N; ++j) tail += ws.kbar(j - i) * u(j);
    const Scalar rhs = w(i) + ws.phi1(N - i) * X(0) + ws.phi2(N - i) * X(1) + dx * tail;
    const Scalar den = 1.0 - 0.5 * dx * ws.kbar(0);
    if (!(std::abs(den) > 1e-12))
      fail(ErrorKind::LinearSolveFailure, "inverse_transform: degenerate diagonal");
    u(i) = rhs / den;
  }
  return u;
}

Scalar moving_boundary_term(const KernelModel& km, Scalar x, Scalar l, const Vec2& X) {
  if (x < 0 || x > l) fail(ErrorKind::RangeError, "moving_boundary_term: x outside [0, l]");
  const auto [v, dv] = km.phi(x - l);
  const Scalar k_xl = -(1.0 / km.bio.D) * v.dot(km.dc.B);
  return (dv - k_xl * km.dc.H).dot(X);
}

}  // namespace axon
