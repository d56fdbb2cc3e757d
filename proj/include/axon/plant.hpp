#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "axon/state.hpp"

namespace axon {

struct SolverConfig {
  int N = 128;          ///< interior segment count (grid has N+1 nodes)
  Scalar dt = 0.05;     ///< time step, s
  Scalar theta = 0.5;   ///< implicitness weight in [0.5, 1]
  Scalar t_end = 600.0; ///< horizon, s

  void validate() const;
};

struct StepDiagnostics {
  Scalar max_c = 0;     ///< max |c| after the step
  Scalar l_dot = 0;     ///< boundary speed r_g (c_c - c_inf) at step start, m/s
  Scalar cfl_like = 0;  ///< advection Courant number max|adv| dt / dxi
};

/// Source term S(x, t) injected into the profile equation (manufactured runs).
using SourceFn = std::function<Scalar(Scalar, Scalar)>;

/// One theta-step of the front-fixed profile equation
///   v_t = (D/l^2) v_xixi + (xi l_dot / l - a/l) v_xi - g v + S
/// with Dirichlet values bc0 at xi=0 and bc1 at xi=1 imposed at the new level.
/// Advection is upwinded where the cell Peclet number exceeds 2. Geometry
/// (l_mid, ldot_mid) is frozen for the step.
VecX advance_profile(const VecX& v, const BioParams& p, Scalar l_mid, Scalar ldot_mid,
                     Scalar bc0, Scalar bc1, Scalar dt, Scalar theta, Scalar t,
                     const SourceFn* source = nullptr);

/// Second-order one-sided flux c_x at the moving end, scaled by 1/l.
Scalar boundary_gradient(const PlantState& s);

/// Advances the coupled plant (profile + cone ODEs) one step with soma input
/// q_s held over the step: c(0) = -q_s. The cone pair is integrated by an
/// explicit trapezoidal predictor-corrector; the PDE sees midpoint geometry.
std::pair<PlantState, StepDiagnostics> plant_step(const PlantState& s, Scalar q_s,
                                                  const SolverConfig& cfg, const BioParams& p);

struct ConvergenceReport {
  std::vector<Scalar> resolution;  ///< N or dt per case
  std::vector<Scalar> error;       ///< max-norm error vs the manufactured solution
  std::vector<Scalar> order;       ///< observed order between consecutive cases
};

/// Manufactured solution on the frozen domain [0, l_s]:
///   c_m(x,t) = c_inf (1 + 0.1 sin(pi x / l_s) e^{-t}).
Scalar manufactured_solution(const BioParams& p, Scalar x, Scalar t);
Scalar manufactured_source(const BioParams& p, Scalar x, Scalar t);

ConvergenceReport spatial_convergence_study(const BioParams& p, const std::vector<int>& grids,
                                            Scalar dt, Scalar t_end, Scalar theta = 0.5);
ConvergenceReport temporal_convergence_study(const BioParams& p, int N,
                                             const std::vector<Scalar>& dts, Scalar t_end,
                                             Scalar theta);

}  // namespace axon
