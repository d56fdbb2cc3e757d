#pragma once

#include <optional>
#include <string>
#include <vector>

#include "axon/lyapunov.hpp"
#include "axon/plant.hpp"

namespace axon {

enum class ControllerMode { Continuous, EventTriggered, PeriodicZoh };

enum class EtmSource { Preset, Derived };

struct ScenarioConfig {
  BioParams bio;
  SolverConfig solver;
  GainConfig gains;
  EtmConfig etm = paper_fig2_etm();
  EtmSource etm_source = EtmSource::Preset;
  ControllerMode mode = ControllerMode::EventTriggered;
  Scalar horizon = 600.0;
  Scalar l_bar = 2.4e-5;            ///< assumption cap, > l_s
  Scalar v_bar = 0.0;               ///< 0 means the default D/(16(D+1))
  long event_cap = 1000000;
  Scalar l0 = 1e-6;
  Scalar c0 = 2.0 * 0.0119;         ///< uniform initial concentration
  Scalar init_scale = 1.0;          ///< scales the initial error toward equilibrium
  Scalar zoh_period = 1.0;          ///< sampling period of the periodic baseline
  Scalar snapshot_dt = 1.0;         ///< profile snapshot cadence
  int table_density = 4;            ///< kernel-table nodes per PDE cell

  void validate() const;
  Scalar v_bar_effective() const;
  static ScenarioConfig paper_fig2();
};

struct RunRow {
  Scalar t = 0, l = 0, c_c = 0, U_applied = 0, d = 0, m = 0;
  Scalar norm_u = 0, norm_w = 0, norm_wx = 0;
  Scalar V1 = 0, V2 = 0, V3 = 0, V = 0;
  int event_flag = 0;
};

enum class RunStatus { Completed, NonFinite, DomainCollapse, EventCapExceeded };

const char* to_string(RunStatus s);

struct RunRecord {
  std::vector<RunRow> rows;
  std::vector<TriggerEvent> events;
  std::vector<std::pair<Scalar, VecX>> snapshots;
  RunStatus status = RunStatus::Completed;
  std::string status_detail;
  Scalar t_final = 0;
  long v_bar_violations = 0;
  Scalar final_l = 0;
  Scalar time_to_95 = std::numeric_limits<Scalar>::quiet_NaN();
  // frozen context for audit/serialization
  DerivedConstants dc;
  LyapunovDiagnostics lyap;
  EtmConfig etm_in_effect;
  ScenarioConfig config;
};

RunRecord run_scenario(const ScenarioConfig& cfg);

struct CompareResult {
  RunRecord continuous;
  RunRecord event_triggered;
  Scalar rel_final_diff = 0;
};

CompareResult compare_modes(const ScenarioConfig& cfg);

struct SweepRow {
  std::string param;
  Scalar value = 0;
  RunStatus status = RunStatus::Completed;
  long events = 0;
  Scalar min_gap = 0;
  Scalar time_to_95 = 0;
  Scalar final_err = 0;
};

/// param is one of eta, sigma, gamma, N, dt. A sigma sweep rescales the
/// active beta_i by (1 - sigma_active)/(1 - sigma), the Theorem-1 selection
/// with alpha_i and gamma held.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const std::string& param,
                                const std::vector<Scalar>& values,
                                std::vector<RunRecord>* records = nullptr);

}  // namespace axon
