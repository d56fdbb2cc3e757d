#include "axon/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace axon {

VecX trapezoid_weights(int nodes, Scalar dx) {
  VecX w = VecX::Constant(nodes, dx);
  if (nodes >= 1) {
    w(0) *= 0.5;
    w(nodes - 1) *= 0.5;
  }
  return w;
}

VecX solve_tridiagonal(const VecX& lo, const VecX& diag, const VecX& up, const VecX& rhs) {
  const int n = static_cast<int>(diag.size());
  VecX cp(n), dp(n), x(n);
  if (diag(0) == 0.0) fail(ErrorKind::LinearSolveFailure, "tridiagonal pivot is zero at row 0");
  cp(0) = up(0) / diag(0);
  dp(0) = rhs(0) / diag(0);
  for (int i = 1; i < n; ++i) {
    const Scalar den = diag(i) - lo(i) * cp(i - 1);
    if (den == 0.0 || !std::isfinite(den))
      fail(ErrorKind::LinearSolveFailure, "tridiagonal pivot vanished at row " + std::to_string(i));
    cp(i) = up(i) / den;
    dp(i) = (rhs(i) - lo(i) * dp(i - 1)) / den;
  }
  x(n - 1) = dp(n - 1);
  for (int i = n - 2; i >= 0; --i) x(i) = dp(i) - cp(i) * x(i + 1);
  return x;
}

namespace {

Scalar simpson(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar fa, Scalar b, Scalar fb,
               Scalar fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Scalar simpson_rec(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar fa, Scalar b,
                   Scalar fb, Scalar fm, Scalar whole, Scalar tol, int depth) {
  const Scalar m = 0.5 * (a + b);
  const Scalar fl = f(0.5 * (a + m));
  const Scalar fr = f(0.5 * (m + b));
  const Scalar left = simpson(f, a, fa, m, fm, fl);
  const Scalar right = simpson(f, m, fm, b, fb, fr);
  const Scalar delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, m, fm, fl, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, fr, right, 0.5 * tol, depth - 1);
}

}  // namespace

Scalar adaptive_simpson(const std::function<Scalar(Scalar)>& f, Scalar a, Scalar b,
                        Scalar rel_tol, int max_depth) {
  const Scalar fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const Scalar whole = simpson(f, a, fa, b, fb, fm);
  const Scalar tol = rel_tol * std::max(std::abs(whole), Scalar(1e-300));
  return simpson_rec(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

Mat4 expm(const Mat4& m) {
  Mat4 e = m.exp();
  if (!e.allFinite()) fail(ErrorKind::MatrixExponentialFailure, "matrix exponential is not finite");
  return e;
}

void quintic_hermite(Scalar h, Scalar ya, Scalar da, Scalar dda, Scalar yb, Scalar db,
                     Scalar ddb, Scalar s, Scalar* value, Scalar* deriv) {
  const Scalar t = s / h;
  const Scalar t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  // value basis
  const Scalar H0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const Scalar H1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const Scalar H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const Scalar H3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const Scalar H4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const Scalar H5 = 0.5 * t3 - t4 + 0.5 * t5;
  // d/dt of the basis
  const Scalar D0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
  const Scalar D1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
  const Scalar D2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
  const Scalar D3 = 30.0 * t2 - 60.0 * t3 + 30.0 * t4;
  const Scalar D4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
  const Scalar D5 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;
  if (value)
    *value = H0 * ya + H1 * h * da + H2 * h * h * dda + H3 * yb + H4 * h * db + H5 * h * h * ddb;
  if (deriv)
    *deriv =
        (D0 * ya + D1 * h * da + D2 * h * h * dda + D3 * yb + D4 * h * db + D5 * h * h * ddb) / h;
}

VecX gradient(const VecX& f, Scalar dx) {
  const int n = static_cast<int>(f.size());
  VecX g(n);
  if (n < 3) fail(ErrorKind::GridMismatch, "gradient needs at least 3 nodes");
  for (int i = 1; i < n - 1; ++i) g(i) = (f(i + 1) - f(i - 1)) / (2.0 * dx);
  g(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * dx);
  g(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * dx);
  return g;
}

}  // namespace axon
