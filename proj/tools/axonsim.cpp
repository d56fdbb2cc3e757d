// Command-line front end: closed-loop growth simulation, mode comparison,
// parameter sweeps, derived-constant inspection, and a quick self-check.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "axon/config.hpp"
#include "axon/csv_io.hpp"
#include "axon/numerics.hpp"

using namespace axon;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitZeno = 3;

int status_exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Completed: return kExitOk;
    case RunStatus::EventCapExceeded: return kExitZeno;
    default: return kExitNumeric;
  }
}

void print_kv(const char* name, Scalar v) { std::printf("%-22s = %.17g\n", name, v); }

int cmd_constants(const ScenarioConfig& cfg) {
  const DerivedConstants dc = derive_constants(cfg.bio);
  print_kv("lambda_plus", dc.lambda_plus);
  print_kv("lambda_minus", dc.lambda_minus);
  print_kv("K_plus", dc.K_plus);
  print_kv("K_minus", dc.K_minus);
  print_kv("q_s_star", dc.q_s_star);
  print_kv("beta", dc.beta);
  print_kv("kappa", dc.kappa);
  print_kv("a1_tilde", dc.a1_tilde);
  print_kv("a2_tilde", dc.a2_tilde);
  print_kv("a3_tilde", dc.a3_tilde);
  print_kv("H1", dc.H(0));
  print_kv("H2", dc.H(1));
  std::printf("%-22s = %s\n", "gains_admissible",
              gain_admissible(cfg.gains.k1, cfg.gains.k2, dc) ? "true" : "false");

  const KernelModel km =
      build_kernel_model(dc, cfg.bio, cfg.gains, cfg.l_bar, cfg.solver.N, cfg.table_density);
  print_kv("k_diag", kernel_k(km, 0.0, 0.0));
  const AlphaConstants ac = alpha_constants(km, dc, cfg.bio, cfg.l_bar);
  for (int i = 0; i < 5; ++i)
    print_kv(("alpha" + std::to_string(i + 1)).c_str(), ac.alpha[i]);
  print_kv("rho1", ac.rho1);
  print_kv("k_n", ac.k_n);
  print_kv("k_m", ac.k_m);
  print_kv("zeta_norm", ac.zeta_norm);

  EtmConfig etm = cfg.etm;
  if (cfg.etm_source == EtmSource::Derived)
    etm = etm_derive(ac, cfg.etm.sigma, cfg.etm.eta, dc, cfg.bio, cfg.l_bar).config;
  for (int i = 0; i < 5; ++i)
    print_kv(("beta" + std::to_string(i + 1)).c_str(), etm.beta[i]);
  print_kv("gamma", etm.gamma);
  print_kv("eta", etm.eta);
  print_kv("rho", etm.rho);
  print_kv("sigma", etm.sigma);
  print_kv("m0", etm.m0);

  const DwellReport dr = dwell_time(etm, ac, cfg.l_bar);
  print_kv("dwell_a1", dr.a1);
  print_kv("dwell_a2", dr.a2);
  print_kv("dwell_a3", dr.a3);
  print_kv("dwell_tau", dr.tau);
  print_kv("dwell_tau_literal", dr.tau_literal);

  const LyapunovDiagnostics ld = lyapunov_setup(dc, cfg.gains, ac, etm, cfg.bio, cfg.l_bar);
  print_kv("P11", ld.P(0, 0));
  print_kv("P12", ld.P(0, 1));
  print_kv("P22", ld.P(1, 1));
  print_kv("lyap_residual", lyapunov_residual(ld, dc, cfg.gains));
  print_kv("d1", ld.d1);
  print_kv("d2", ld.d2);
  return kExitOk;
}

int cmd_check(const ScenarioConfig& cfg) {
  int failures = 0;
  auto report = [&failures](const char* name, bool ok, Scalar value) {
    std::printf("[%s] %-38s %.3e\n", ok ? "PASS" : "FAIL", name, value);
    if (!ok) ++failures;
  };
  const BioParams& p = cfg.bio;
  const DerivedConstants dc = derive_constants(p);

  report("root product lambda+*lambda- = -g/D",
         std::abs(dc.lambda_plus * dc.lambda_minus + p.g / p.D) <= 1e-9 * (p.g / p.D),
         dc.lambda_plus * dc.lambda_minus);
  report("profile coefficients sum to 1", std::abs(dc.K_plus + dc.K_minus - 1.0) < 1e-14,
         dc.K_plus + dc.K_minus);
  {
    Scalar res = 0;
    for (int i = 0; i <= 32; ++i) {
      const Scalar x = p.l_s * i / 32.0;
      const Scalar r = p.D * equilibrium_concentration_dxx(dc, p, x) -
                       p.a * equilibrium_concentration_dx(dc, p, x) -
                       p.g * equilibrium_concentration(dc, p, x);
      res = std::max(res, std::abs(r) / (p.g * p.c_inf));
    }
    report("equilibrium profile is stationary", res <= 1e-10, res);
  }
  report("gain admissibility", gain_admissible(cfg.gains.k1, cfg.gains.k2, dc), 1.0);

  const KernelModel km =
      build_kernel_model(dc, p, cfg.gains, cfg.l_bar, cfg.solver.N, cfg.table_density);
  {
    const auto [phi0, dphi0] = km.phi(0.0);
    report("phi(0) = H", (phi0 - dc.H).norm() <= 1e-12 * dc.H.norm(), (phi0 - dc.H).norm());
    const Scalar kd = kernel_k(km, 0.5 * p.l_s, 0.5 * p.l_s);
    report("k(x,x) = 1/l_c", std::abs(kd - 1.0 / p.l_c) <= 1e-12 / p.l_c, kd);
    (void)dphi0;
  }
  {
    // kernel ODE residual at off-node points
    Scalar worst = 0;
    for (int i = 1; i <= 64; ++i) {
      const Scalar s = -km.l_bar * (i - 0.5) / 64.0;
      const auto [v, dv] = km.phi(s);
      const Vec2 ddv = km.phi_second(s);
      const Eigen::RowVector2d r = p.D * ddv.transpose() - p.a * dv.transpose() -
                                   p.g * v.transpose() - v.transpose() * dc.A1 +
                                   (dv.dot(dc.B) - (p.a / p.D) * v.dot(dc.B)) * dc.H.transpose();
      const Scalar scale = std::max({(p.D * ddv).norm(), (v.transpose() * dc.A1).norm(), 1e-300});
      worst = std::max(worst, r.norm() / scale);
    }
    report("kernel ODE residual <= 1e-8", worst <= 1e-8, worst);
  }
  {
    // transform round trip on a smooth profile
    const int N = 64;
    ErrorState e;
    e.u.resize(N + 1);
    for (int i = 0; i <= N; ++i) e.u(i) = 1e-3 * std::sin(M_PI * i / N) + 2e-4;
    e.X << 1e-3, -2e-6;
    TransformWorkspace ws;
    const VecX w = forward_transform(km, e, p.l_s, ws);
    const VecX u2 = inverse_transform(km, w, e.X, p.l_s, ws);
    const Scalar err = (u2 - e.u).cwiseAbs().maxCoeff() / e.u.cwiseAbs().maxCoeff();
    report("transform round trip <= 1e-10", err <= 1e-10, err);
  }
  {
    const AlphaConstants ac = alpha_constants(km, dc, p, cfg.l_bar);
    const DwellReport dr = dwell_time(cfg.etm, ac, cfg.l_bar);
    report("dwell time positive", dr.tau > 0 && dr.a1 > 0 && dr.a2 > 0 && dr.a3 > 0, dr.tau);
    const LyapunovDiagnostics ld = lyapunov_setup(dc, cfg.gains, ac, cfg.etm, p, cfg.l_bar);
    const Scalar res = lyapunov_residual(ld, dc, cfg.gains);
    report("Lyapunov equation residual <= 1e-10", res <= 1e-10, res);
  }
  std::printf("%s (%d failure%s)\n", failures == 0 ? "CHECK PASSED" : "CHECK FAILED", failures,
              failures == 1 ? "" : "s");
  return failures == 0 ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-loop axon growth simulator with event-triggered boundary control"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mode_str, preset, param;
  std::vector<Scalar> values;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "config file (key = value sections)");
    sub->add_option("--preset", preset, "named preset (paper-fig2)");
  };

  CLI::App* sim = app.add_subcommand("simulate", "run one closed-loop scenario");
  add_config(sim);
  sim->add_option("--mode", mode_str, "continuous|etc|zoh");
  sim->add_option("--out", out_dir, "output directory")->required();

  CLI::App* cmp = app.add_subcommand("compare", "run continuous and etc on the same scenario");
  add_config(cmp);
  cmp->add_option("--out", out_dir, "output directory")->required();

  CLI::App* swp = app.add_subcommand("sweep", "sweep one parameter");
  add_config(swp);
  swp->add_option("--param", param, "eta|sigma|gamma|N|dt")->required();
  swp->add_option("--values", values, "comma-separated values")->required()->delimiter(',');
  swp->add_option("--out", out_dir, "output directory")->required();

  CLI::App* con = app.add_subcommand("constants", "print derived constants and trigger data");
  add_config(con);

  CLI::App* chk = app.add_subcommand("check", "run the fast invariant suite");
  add_config(chk);

  CLI11_PARSE(app, argc, argv);

  try {
    ScenarioConfig cfg = load_config(config_path, preset);
    if (sim->parsed()) {
      if (!mode_str.empty()) {
        if (mode_str == "continuous") cfg.mode = ControllerMode::Continuous;
        else if (mode_str == "etc") cfg.mode = ControllerMode::EventTriggered;
        else if (mode_str == "zoh") cfg.mode = ControllerMode::PeriodicZoh;
        else fail(ErrorKind::ConfigError, "mode must be continuous|etc|zoh");
      }
      const RunRecord rec = run_scenario(cfg);
      write_outputs(rec, out_dir);
      std::printf("status=%s t_final=%.6g final_l=%.6g events=%zu out=%s\n",
                  to_string(rec.status), rec.t_final, rec.final_l, rec.events.size(),
                  out_dir.c_str());
      return status_exit_code(rec.status);
    }
    if (cmp->parsed()) {
      const CompareResult r = compare_modes(cfg);
      write_outputs(r.continuous, out_dir + "/continuous");
      write_outputs(r.event_triggered, out_dir + "/etc");
      std::printf("continuous: status=%s final_l=%.6g\n", to_string(r.continuous.status),
                  r.continuous.final_l);
      std::printf("etc:        status=%s final_l=%.6g events=%zu\n",
                  to_string(r.event_triggered.status), r.event_triggered.final_l,
                  r.event_triggered.events.size());
      std::printf("relative final-length difference: %.6g\n", r.rel_final_diff);
      const int c1 = status_exit_code(r.continuous.status);
      const int c2 = status_exit_code(r.event_triggered.status);
      return std::max(c1, c2);
    }
    if (swp->parsed()) {
      std::vector<RunRecord> records;
      const std::vector<SweepRow> rows = run_sweep(cfg, param, values, &records);
      std::filesystem::create_directories(out_dir);
      {
        std::ofstream f(out_dir + "/sweep.csv", std::ios::binary);
        f << sweep_csv_text(rows);
      }
      for (size_t i = 0; i < records.size(); ++i) {
        char leaf[64];
        std::snprintf(leaf, sizeof(leaf), "%s_%g", param.c_str(), rows[i].value);
        write_outputs(records[i], out_dir + "/" + leaf);
      }
      for (const SweepRow& r : rows)
        std::printf("%s=%-12g status=%-16s events=%-8ld min_gap=%-12g t95=%-12g err=%g\n",
                    r.param.c_str(), r.value, to_string(r.status), r.events, r.min_gap,
                    r.time_to_95, r.final_err);
      int code = kExitOk;
      for (const SweepRow& r : rows) code = std::max(code, status_exit_code(r.status));
      return code;
    }
    if (con->parsed()) return cmd_constants(cfg);
    if (chk->parsed()) return cmd_check(cfg);
  } catch (const SimulationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::InvalidParams ||
        e.kind() == ErrorKind::IoError)
      return kExitConfig;
    if (e.kind() == ErrorKind::EventCapExceeded) return kExitZeno;
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitOk;
}
