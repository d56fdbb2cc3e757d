#include "axon/csv_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "axon/config.hpp"

namespace axon {

namespace {

std::string sci(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for '" + path + "'");
}

}  // namespace

std::string run_csv_text(const RunRecord& run) {
  std::string out =
      "t,l,c_c,U_applied,d,m,norm_u,norm_w,norm_wx,V1,V2,V3,V,event_flag\n";
  for (const RunRow& r : run.rows) {
    out += sci(r.t) + "," + sci(r.l) + "," + sci(r.c_c) + "," + sci(r.U_applied) + "," +
           sci(r.d) + "," + sci(r.m) + "," + sci(r.norm_u) + "," + sci(r.norm_w) + "," +
           sci(r.norm_wx) + "," + sci(r.V1) + "," + sci(r.V2) + "," + sci(r.V3) + "," +
           sci(r.V) + "," + std::to_string(r.event_flag) + "\n";
  }
  return out;
}

std::string events_csv_text(const RunRecord& run) {
  std::string out = "index,t_j,U_tj,gap\n";
  for (const TriggerEvent& e : run.events)
    out += std::to_string(e.index) + "," + sci(e.t_j) + "," + sci(e.U_tj) + "," + sci(e.gap) +
           "\n";
  return out;
}

std::string summary_json_text(const RunRecord& run) {
  nlohmann::ordered_json j;
  j["status"] = to_string(run.status);
  j["status_detail"] = run.status_detail;
  j["t_final"] = run.t_final;
  j["final_l"] = run.final_l;
  j["time_to_95"] = run.time_to_95;
  j["rows"] = run.rows.size();
  j["v_bar_violations"] = run.v_bar_violations;

  const ZenoReport z = zeno_report(run.events, run.config.solver.dt, 0.0);
  j["events"] = {{"count", z.event_count},
                 {"min_gap", z.min_gap},
                 {"mean_gap", z.mean_gap},
                 {"zeno_free", z.zeno_free},
                 {"violations", z.violations}};

  const DerivedConstants& dc = run.dc;
  j["derived_constants"] = {
      {"lambda_plus", dc.lambda_plus}, {"lambda_minus", dc.lambda_minus},
      {"K_plus", dc.K_plus},           {"K_minus", dc.K_minus},
      {"q_s_star", dc.q_s_star},       {"a1_tilde", dc.a1_tilde},
      {"a2_tilde", dc.a2_tilde},       {"a3_tilde", dc.a3_tilde},
      {"beta", dc.beta},               {"kappa", dc.kappa},
      {"H", {dc.H(0), dc.H(1)}},       {"B", {dc.B(0), dc.B(1)}}};

  const EtmConfig& e = run.etm_in_effect;
  j["etm_in_effect"] = {{"gamma", e.gamma}, {"eta", e.eta},     {"rho", e.rho},
                        {"sigma", e.sigma}, {"m0", e.m0},       {"beta1", e.beta[0]},
                        {"beta2", e.beta[1]}, {"beta3", e.beta[2]}, {"beta4", e.beta[3]},
                        {"beta5", e.beta[4]}};

  j["lyapunov"] = {{"P", {run.lyap.P(0, 0), run.lyap.P(0, 1), run.lyap.P(1, 1)}},
                   {"d1", run.lyap.d1},
                   {"d2", run.lyap.d2},
                   {"residual", lyapunov_residual(run.lyap, run.dc, run.config.gains)}};
  j["config_text"] = serialize_config(run.config);
  return j.dump(2) + "\n";
}

std::string sweep_csv_text(const std::vector<SweepRow>& rows) {
  std::string out = "param,value,status,events,min_gap,time_to_95,final_err\n";
  for (const SweepRow& r : rows)
    out += r.param + "," + sci(r.value) + "," + to_string(r.status) + "," +
           std::to_string(r.events) + "," + sci(r.min_gap) + "," + sci(r.time_to_95) + "," +
           sci(r.final_err) + "\n";
  return out;
}

OutputBundle write_outputs(const RunRecord& run, const std::string& dir) {
  std::filesystem::create_directories(dir);
  OutputBundle b;
  b.run_csv = run_csv_text(run);
  b.events_csv = events_csv_text(run);
  b.summary_json = summary_json_text(run);
  b.config_echo = serialize_config(run.config);
  write_file(dir + "/run.csv", b.run_csv);
  write_file(dir + "/events.csv", b.events_csv);
  write_file(dir + "/summary.json", b.summary_json);
  write_file(dir + "/config_echo.cfg", b.config_echo);
  return b;
}

}  // namespace axon
