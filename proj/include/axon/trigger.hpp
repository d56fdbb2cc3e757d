#pragma once

#include <array>
#include <vector>

#include "axon/backstepping.hpp"

namespace axon {

struct EtmConfig {
  Scalar gamma = 1e4;
  Scalar eta = 100.0;
  Scalar rho = 4e22;
  Scalar sigma = 0.5;
  Scalar m0 = -0.5;
  std::array<Scalar, 5> beta{1.634e22, 5.229e12, 6.569e-14, 2.614e13, 2.94e-12};

  void validate() const;
};

/// Literal published trigger parameter set bundled with the paper-fig2 preset.
EtmConfig paper_fig2_etm();

/// Deviation-growth constants assembled from the kernel model, with every
/// length-dependent factor taken at its supremum over (0, l_bar].
struct AlphaConstants {
  std::array<Scalar, 5> alpha{};
  Scalar rho1 = 0;
  Scalar k_n = 0, k_m = 0;
  Scalar zeta_norm = 0;     ///< int_0^l_bar zeta(y)^2 dy
  Scalar qq_int = 0;        ///< int int q(x,y)^2 dy dx at l = l_bar
  Scalar qx0_int = 0;       ///< int q_x(0,y)^2 dy at l = l_bar
  Vec2 phibar_int = Vec2::Zero();  ///< int phibar(x-l)^T dx at l = l_bar
};

AlphaConstants alpha_constants(const KernelModel& km, const DerivedConstants& dc,
                               const BioParams& p, Scalar l_bar);

/// Theorem-style defaults: beta_i = alpha_i / (gamma (1-sigma)), gamma at
/// twice its lower bound 16(alpha3+alpha5)/(D(1-sigma)), rho from d1.
EtmConfig etm_defaults(const AlphaConstants& ac, Scalar sigma, Scalar eta,
                       const DerivedConstants& dc, const BioParams& p, Scalar d1);

/// Lemma-style lower bound for the Lyapunov weight d1 (needs beta4).
Scalar d1_lower_bound(const AlphaConstants& ac, Scalar beta4, const BioParams& p, Scalar l_bar);

/// Full derived chain gamma -> beta -> d1 -> rho.
struct DerivedEtm {
  EtmConfig config;
  Scalar d1 = 0;
};
DerivedEtm etm_derive(const AlphaConstants& ac, Scalar sigma, Scalar eta,
                      const DerivedConstants& dc, const BioParams& p, Scalar l_bar);

struct TriggerSignals {
  Scalar U_cont = 0;
  Vec2 X = Vec2::Zero();
  Scalar w0x = 0;      ///< w_x(0, t)
  Scalar wlx = 0;      ///< w_x(l(t), t)
  Scalar w_norm2 = 0;  ///< ||w||^2
};

struct TriggerEvent {
  int index = 0;
  Scalar t_j = 0;
  Scalar U_tj = 0;
  Scalar gap = 0;  ///< t_j - t_{j-1}; 0 for the initial event
};

struct EtmState {
  Scalar m = 0;
  Scalar d = 0;
  Scalar U_held = 0;
  Scalar t_last_event = 0;
  std::vector<TriggerEvent> events;
  // trapezoid memory of the m-equation sources at the previous step boundary
  Scalar prev_pump = 0;
  Scalar prev_sink = 0;

  /// The initial instant is an event: the input is sampled and d = 0.
  static EtmState init(const EtmConfig& cfg, const TriggerSignals& s0, Scalar t0 = 0.0);
};

/// Advances m one step (exponential-trapezoid in the sources), updates d,
/// evaluates the trigger at the grid instant t_next, and on firing holds the
/// new input and resets d. Returns whether an event fired. m < 0 is preserved:
/// if the rho d^2 pump would push m through zero within the step, the step is
/// treated as an event and the pump contribution is dropped (the continuous
/// mechanism would have reset d before m could reach zero).
bool etm_step(EtmState& st, const EtmConfig& cfg, const TriggerSignals& sig, Scalar dt,
              Scalar t_next);

struct DwellReport {
  Scalar tau = 0;             ///< minimum dwell time over the psi excursion
  Scalar a1 = 0, a2 = 0, a3 = 0;
  Scalar psi_lo = 0, psi_hi = 1.0;
  Scalar tau_literal = 0;     ///< same integrand over [0, l_bar] (logged reading)
};

DwellReport dwell_time(const EtmConfig& cfg, const AlphaConstants& ac, Scalar l_bar);

struct ZenoReport {
  long event_count = 0;
  Scalar min_gap = 0;
  Scalar mean_gap = 0;
  bool zeno_free = true;   ///< finite count and min gap >= dt
  long violations = 0;     ///< gaps below dt
  Scalar tau = 0;
};

/// Scans an event log (index 0 = initial sample, excluded from gap stats).
ZenoReport zeno_report(const std::vector<TriggerEvent>& events, Scalar dt, Scalar tau);

}  // namespace axon
