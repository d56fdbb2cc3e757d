#pragma once

#include <utility>

#include "axon/state.hpp"

namespace axon {

struct GainConfig {
  Scalar k1 = -0.001;
  Scalar k2 = 4e13;

  Vec2 K() const { return Vec2(k1, k2); }
};

/// Gain-kernel data: the 4x4 companion matrix of the kernel ODE, its initial
/// row, and a dense table of (phi, phi', phi'') over s in [-l_bar, +l_bar].
/// The positive side only feeds diagnostic constants; control evaluation is
/// restricted to [-l_bar, 0]. Immutable after construction.
class KernelModel {
 public:
  DerivedConstants dc;
  BioParams bio;
  GainConfig gains;
  Scalar l_bar = 0;
  Mat4 N1 = Mat4::Zero();
  RowVec4 phi0_row = RowVec4::Zero();

  /// phi(s) and phi'(s), quintic-Hermite interpolated, exact at table nodes.
  /// s must lie in [-l_bar, 0].
  std::pair<Vec2, Vec2> phi(Scalar s) const;
  Vec2 phi_second(Scalar s) const;

  /// Direct evaluation through the matrix exponential, any s. Used to build
  /// the table and by the diagnostic constants (positive arguments).
  void phi_direct(Scalar s, Vec2* phi, Vec2* dphi, Vec2* ddphi) const;

  Scalar table_step() const { return ds_; }
  int table_nodes() const { return static_cast<int>(table_.rows()); }
  /// Raw table row k: s = -l_bar + k*ds, columns (phi, phi', phi'') x 2.
  Eigen::Matrix<Scalar, 1, 6> table_row(int k) const { return table_.row(k); }
  Scalar table_s(int k) const { return -l_bar + k * ds_; }
  int zero_node() const { return zero_index_; }

 private:
  friend KernelModel build_kernel_model(const DerivedConstants&, const BioParams&,
                                        const GainConfig&, Scalar, int, int);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 6> table_;
  Scalar ds_ = 0;
  int zero_index_ = 0;
  Mat4 n1_balanced_ = Mat4::Zero();
  Scalar balance_ = 1.0;
};

/// Builds the kernel model. The kernel ODE in row form is
///   D phi''(s)^T = phi(s)^T (g I + A1 + (a/D) B H^T) + phi'(s)^T (a I - B H^T)
/// with phi(0)^T = H^T and phi'(0)^T = K^T - (1/D) H^T B H^T; its companion
/// form is exponentiated with a diagonal balancing similarity. The table is
/// sampled at `density` nodes per PDE cell of a grid with `grid_segments`.
KernelModel build_kernel_model(const DerivedConstants& dc, const BioParams& p,
                               const GainConfig& gc, Scalar l_bar, int grid_segments = 128,
                               int density = 4);

/// k(x, y) = -(1/D) phi(x - y)^T B on the Volterra region x <= y.
Scalar kernel_k(const KernelModel& km, Scalar x, Scalar y);

/// Per-run scratch: kernel samples indexed by lag on the current physical grid.
struct TransformWorkspace {
  Scalar l = -1.0;
  VecX kbar;    ///< kbar(d) = k at lag d*h*l, d = 0..N
  VecX phi1;    ///< phi_1 at -d*h*l
  VecX phi2;    ///< phi_2 at -d*h*l
  void prepare(const KernelModel& km, Scalar l_now, int segments);
};

/// U = int_0^l k(0,y) u(y) dy + phi(-l)^T X via trapezoid on the state grid.
Scalar continuous_control(const KernelModel& km, const ErrorState& e, Scalar l,
                          TransformWorkspace& ws);

/// Identical integrand frozen at the event instant; the caller holds the value.
Scalar sampled_control(const KernelModel& km, const ErrorState& e, Scalar l,
                       TransformWorkspace& ws);

/// w(x) = u(x) - int_x^l k(x,y) u(y) dy - phi(x-l)^T X, one correlation pass
/// over the difference-indexed kernel table.
VecX forward_transform(const KernelModel& km, const ErrorState& e, Scalar l,
                       TransformWorkspace& ws);

/// Solves u(x) - int_x^l k(x,y) u(y) dy = w(x) + phi(x-l)^T X by
/// back-substitution from x = l; exact inverse of the discrete forward map.
VecX inverse_transform(const KernelModel& km, const VecX& w, const Vec2& X, Scalar l,
                       TransformWorkspace& ws);

/// Moving-boundary forcing term (phi'(x-l)^T - k(x,l) H^T) X.
Scalar moving_boundary_term(const KernelModel& km, Scalar x, Scalar l, const Vec2& X);

}  // namespace axon
