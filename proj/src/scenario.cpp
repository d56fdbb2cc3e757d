#include "axon/scenario.hpp"

#include <cmath>

#include "axon/numerics.hpp"

namespace axon {

void ScenarioConfig::validate() const {
  bio.validate();
  solver.validate();
  etm.validate();
  if (!(l_bar > bio.l_s)) fail(ErrorKind::InvalidParams, "l_bar must exceed l_s");
  if (event_cap < 1) fail(ErrorKind::InvalidParams, "event cap must be >= 1");
  if (!(horizon > 0)) fail(ErrorKind::InvalidParams, "horizon must be positive");
  if (!(l0 > 0)) fail(ErrorKind::InvalidParams, "l0 must be positive");
  if (!(init_scale > 0 && init_scale <= 1.0))
    fail(ErrorKind::InvalidParams, "init_scale must lie in (0, 1]");
  if (!(zoh_period > 0)) fail(ErrorKind::InvalidParams, "zoh_period must be positive");
  if (!(snapshot_dt > 0)) fail(ErrorKind::InvalidParams, "snapshot cadence must be positive");
  if (table_density < 1) fail(ErrorKind::InvalidParams, "table density must be >= 1");
}

Scalar ScenarioConfig::v_bar_effective() const {
  return v_bar > 0 ? v_bar : bio.D / (16.0 * (bio.D + 1.0));
}

ScenarioConfig ScenarioConfig::paper_fig2() { return ScenarioConfig{}; }

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return "completed";
    case RunStatus::NonFinite: return "NonFinite";
    case RunStatus::DomainCollapse: return "DomainCollapse";
    case RunStatus::EventCapExceeded: return "EventCapExceeded";
  }
  return "unknown";
}

namespace {

struct SignalProbe {
  VecX w;
  Scalar w0x = 0, wlx = 0, w_norm2 = 0, wx_norm2 = 0, u_norm = 0;
};

SignalProbe probe_signals(const KernelModel& km, const ErrorState& e, Scalar l, Scalar u0,
                          TransformWorkspace& ws) {
  ErrorState shifted = e;
  shifted.u(0) = u0;  // boundary value actually applied
  SignalProbe p;
  p.w = forward_transform(km, shifted, l, ws);
  const int N = static_cast<int>(p.w.size()) - 1;
  const Scalar dx = l / N;
  const VecX wx = gradient(p.w, dx);
  p.w0x = wx(0);
  p.wlx = wx(N);
  p.w_norm2 = l2_norm_sq(p.w, dx);
  p.wx_norm2 = l2_norm_sq(wx, dx);
  p.u_norm = std::sqrt(l2_norm_sq(shifted.u, dx));
  return p;
}

}  // namespace

RunRecord run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  RunRecord rec;
  rec.config = cfg;
  const BioParams& p = cfg.bio;
  const DerivedConstants dc = derive_constants(p);
  rec.dc = dc;
  const KernelModel km =
      build_kernel_model(dc, p, cfg.gains, cfg.l_bar, cfg.solver.N, cfg.table_density);

  EtmConfig etm = cfg.etm;
  AlphaConstants ac;
  if (cfg.etm_source == EtmSource::Derived) {
    ac = alpha_constants(km, dc, p, cfg.l_bar);
    const DerivedEtm derived = etm_derive(ac, cfg.etm.sigma, cfg.etm.eta, dc, p, cfg.l_bar);
    etm = derived.config;
    etm.m0 = cfg.etm.m0;
  }
  rec.etm_in_effect = etm;
  {
    // Lyapunov weights want alpha_4/alpha_5 regardless of the etm source.
    if (cfg.etm_source != EtmSource::Derived) ac = alpha_constants(km, dc, p, cfg.l_bar);
    rec.lyap = lyapunov_setup(dc, cfg.gains, ac, etm, p, cfg.l_bar);
  }

  // Initial data: the configured uniform offset, scaled toward equilibrium.
  const int N = cfg.solver.N;
  PlantState state;
  state.xi = VecX::LinSpaced(N + 1, 0.0, 1.0);
  state.l = p.l_s + cfg.init_scale * (cfg.l0 - p.l_s);
  state.c.resize(N + 1);
  for (int i = 0; i <= N; ++i) {
    const Scalar ceq = equilibrium_concentration(dc, p, state.xi(i) * state.l);
    state.c(i) = ceq + cfg.init_scale * (cfg.c0 - ceq);
  }
  state.c_c = state.c(N);

  TransformWorkspace ws;
  ErrorState err = to_error_state(state, dc, p);
  Scalar U_cont = continuous_control(km, err, state.l, ws);

  const bool etc_mode = cfg.mode == ControllerMode::EventTriggered;
  const bool zoh_mode = cfg.mode == ControllerMode::PeriodicZoh;
  Scalar U_applied = U_cont;
  Scalar next_zoh = cfg.zoh_period;

  SignalProbe sp = probe_signals(km, err, state.l, U_applied, ws);
  TriggerSignals sig{U_cont, err.X, sp.w0x, sp.wlx, sp.w_norm2};
  EtmState etm_state = EtmState::init(etm, sig, 0.0);

  auto push_row = [&](Scalar t, int event_flag) {
    RunRow row;
    row.t = t;
    row.l = state.l;
    row.c_c = state.c_c;
    row.U_applied = U_applied;
    row.d = etc_mode ? etm_state.d : 0.0;
    row.m = etc_mode ? etm_state.m : 0.0;
    row.norm_u = sp.u_norm;
    row.norm_w = std::sqrt(sp.w_norm2);
    row.norm_wx = std::sqrt(sp.wx_norm2);
    const LyapunovValues lv =
        lyapunov_eval(sp.w, state.l, err.X, etc_mode ? etm_state.m : etm.m0, rec.lyap);
    row.V1 = lv.V1;
    row.V2 = lv.V2;
    row.V3 = lv.V3;
    row.V = lv.V;
    row.event_flag = event_flag;
    rec.rows.push_back(row);
  };
  auto push_snapshot = [&](Scalar t) { rec.snapshots.emplace_back(t, state.c); };

  push_row(0.0, 1);
  push_snapshot(0.0);
  Scalar next_snapshot = cfg.snapshot_dt;

  const int steps = static_cast<int>(std::round(cfg.horizon / cfg.solver.dt));
  const Scalar v_cap = cfg.v_bar_effective();
  rec.status = RunStatus::Completed;
  Scalar t = 0.0;
  for (int n = 0; n < steps; ++n) {
    if (zoh_mode && t >= next_zoh - 1e-12 * cfg.solver.dt) {
      U_applied = U_cont;
      next_zoh += cfg.zoh_period;
    } else if (!etc_mode && !zoh_mode) {
      U_applied = U_cont;
    }
    const Scalar q_s = dc.q_s_star - U_applied;
    StepDiagnostics diag;
    try {
      auto [next, d] = plant_step(state, q_s, cfg.solver, p);
      state = std::move(next);
      diag = d;
    } catch (const SimulationError& e) {
      rec.status = e.kind() == ErrorKind::DomainCollapse ? RunStatus::DomainCollapse
                                                         : RunStatus::NonFinite;
      rec.status_detail = e.what();
      break;
    }
    t = state.t;
    if (std::abs(diag.l_dot) > v_cap) ++rec.v_bar_violations;
    if (state.l > cfg.l_bar) {
      rec.status = RunStatus::DomainCollapse;
      rec.status_detail = "l left the admissible domain (0, l_bar]";
      break;
    }

    err = to_error_state(state, dc, p);
    U_cont = continuous_control(km, err, state.l, ws);
    int event_flag = 0;
    if (etc_mode) {
      sp = probe_signals(km, err, state.l, etm_state.U_held, ws);
      sig = TriggerSignals{U_cont, err.X, sp.w0x, sp.wlx, sp.w_norm2};
      const bool fired = etm_step(etm_state, etm, sig, cfg.solver.dt, t);
      event_flag = fired ? 1 : 0;
      U_applied = etm_state.U_held;
      if (static_cast<long>(etm_state.events.size()) > cfg.event_cap) {
        rec.status = RunStatus::EventCapExceeded;
        rec.status_detail = "event cap exceeded";
        push_row(t, event_flag);
        break;
      }
    } else {
      sp = probe_signals(km, err, state.l, zoh_mode ? U_applied : U_cont, ws);
    }
    push_row(t, event_flag);
    if (t >= next_snapshot - 1e-12 * cfg.solver.dt) {
      push_snapshot(t);
      next_snapshot += cfg.snapshot_dt;
    }
  }

  rec.t_final = rec.rows.back().t;
  rec.final_l = rec.rows.back().l;
  rec.events = etm_state.events;
  if (!etc_mode) rec.events.clear();
  for (const RunRow& row : rec.rows) {
    if (row.l >= 0.95 * p.l_s) {
      rec.time_to_95 = row.t;
      break;
    }
  }
  return rec;
}

CompareResult compare_modes(const ScenarioConfig& cfg) {
  CompareResult out;
  ScenarioConfig c = cfg;
  c.mode = ControllerMode::Continuous;
  out.continuous = run_scenario(c);
  c.mode = ControllerMode::EventTriggered;
  out.event_triggered = run_scenario(c);
  const Scalar denom = std::max(std::abs(out.continuous.final_l), Scalar(1e-300));
  out.rel_final_diff = std::abs(out.continuous.final_l - out.event_triggered.final_l) / denom;
  return out;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const std::string& param,
                                const std::vector<Scalar>& values,
                                std::vector<RunRecord>* records) {
  std::vector<SweepRow> rows;
  for (Scalar v : values) {
    ScenarioConfig variant = cfg;
    if (param == "eta") {
      variant.etm.eta = v;
    } else if (param == "gamma") {
      variant.etm.gamma = v;
    } else if (param == "sigma") {
      if (!(v > 0 && v < 1)) fail(ErrorKind::InvalidParams, "swept sigma must lie in (0,1)");
      const Scalar scale = (1.0 - cfg.etm.sigma) / (1.0 - v);
      for (auto& b : variant.etm.beta) b *= scale;
      variant.etm.sigma = v;
    } else if (param == "N") {
      variant.solver.N = static_cast<int>(std::lround(v));
    } else if (param == "dt") {
      variant.solver.dt = v;
    } else {
      fail(ErrorKind::ConfigError, "unknown sweep parameter '" + param + "'");
    }
    RunRecord rec = run_scenario(variant);
    SweepRow row;
    row.param = param;
    row.value = v;
    row.status = rec.status;
    row.events = static_cast<long>(rec.events.size());
    const ZenoReport z = zeno_report(rec.events, variant.solver.dt, 0.0);
    row.min_gap = z.min_gap;
    row.time_to_95 = rec.time_to_95;
    row.final_err = std::abs(rec.final_l - cfg.bio.l_s) / cfg.bio.l_s;
    rows.push_back(row);
    if (records) records->push_back(std::move(rec));
  }
  return rows;
}

}  // namespace axon
