#include "axon/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace axon {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_fail(int line, const std::string& msg) {
  fail(ErrorKind::ConfigError, "line " + std::to_string(line) + ": " + msg);
}

Scalar parse_number(const std::string& value, int line) {
  const char* start = value.c_str();
  char* end = nullptr;
  const double x = std::strtod(start, &end);
  if (end == start) config_fail(line, "expected a number, got '" + value + "'");
  std::string suffix = trim(std::string(end));
  if (suffix.empty()) return x;
  if (suffix == "um") return x * 1e-6;
  if (suffix == "min") return x * 60.0;
  config_fail(line, "unknown unit suffix '" + suffix + "'");
}

struct KeyRef {
  enum class Type { Number, Int, Long, Mode, EtmSource, Preset } type = Type::Number;
  Scalar* num = nullptr;
  int* integer = nullptr;
  long* wide = nullptr;
};

}  // namespace

const char* to_string(ControllerMode m) {
  switch (m) {
    case ControllerMode::Continuous: return "continuous";
    case ControllerMode::EventTriggered: return "etc";
    case ControllerMode::PeriodicZoh: return "zoh";
  }
  return "unknown";
}

void apply_preset(ScenarioConfig& cfg, const std::string& name) {
  if (name == "paper-fig2") {
    cfg = ScenarioConfig::paper_fig2();
    return;
  }
  fail(ErrorKind::ConfigError, "unknown preset '" + name + "'");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::map<std::string, std::map<std::string, KeyRef>> schema;
  auto num = [](Scalar* p) { KeyRef r; r.type = KeyRef::Type::Number; r.num = p; return r; };
  auto integer = [](int* p) { KeyRef r; r.type = KeyRef::Type::Int; r.integer = p; return r; };
  auto wide = [](long* p) { KeyRef r; r.type = KeyRef::Type::Long; r.wide = p; return r; };
  schema["bio"] = {{"D", num(&cfg.bio.D)},       {"a", num(&cfg.bio.a)},
                   {"g", num(&cfg.bio.g)},       {"r_g", num(&cfg.bio.r_g)},
                   {"rt_g", num(&cfg.bio.rt_g)}, {"l_c", num(&cfg.bio.l_c)},
                   {"c_inf", num(&cfg.bio.c_inf)}, {"l_s", num(&cfg.bio.l_s)}};
  schema["solver"] = {{"N", integer(&cfg.solver.N)},
                      {"dt", num(&cfg.solver.dt)},
                      {"theta", num(&cfg.solver.theta)}};
  schema["gains"] = {{"k1", num(&cfg.gains.k1)}, {"k2", num(&cfg.gains.k2)}};
  schema["etm"] = {{"gamma", num(&cfg.etm.gamma)},   {"eta", num(&cfg.etm.eta)},
                   {"rho", num(&cfg.etm.rho)},       {"sigma", num(&cfg.etm.sigma)},
                   {"m0", num(&cfg.etm.m0)},         {"beta1", num(&cfg.etm.beta[0])},
                   {"beta2", num(&cfg.etm.beta[1])}, {"beta3", num(&cfg.etm.beta[2])},
                   {"beta4", num(&cfg.etm.beta[3])}, {"beta5", num(&cfg.etm.beta[4])}};
  KeyRef mode_ref;
  mode_ref.type = KeyRef::Type::Mode;
  KeyRef source_ref;
  source_ref.type = KeyRef::Type::EtmSource;
  KeyRef preset_ref;
  preset_ref.type = KeyRef::Type::Preset;
  schema["etm"]["source"] = source_ref;
  schema["run"] = {{"horizon", num(&cfg.horizon)},
                   {"l_bar", num(&cfg.l_bar)},
                   {"v_bar", num(&cfg.v_bar)},
                   {"event_cap", wide(&cfg.event_cap)},
                   {"l0", num(&cfg.l0)},
                   {"c0", num(&cfg.c0)},
                   {"init_scale", num(&cfg.init_scale)},
                   {"zoh_period", num(&cfg.zoh_period)},
                   {"snapshot_dt", num(&cfg.snapshot_dt)},
                   {"table_density", integer(&cfg.table_density)}};
  schema["run"]["mode"] = mode_ref;
  schema["run"]["preset"] = preset_ref;

  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  std::map<std::string, int> key_lines;
  // first pass: a preset line resets the whole config before other keys apply
  {
    std::istringstream scan(text);
    std::string l2, sec2;
    int ln = 0;
    while (std::getline(scan, l2)) {
      ++ln;
      std::string s = trim(l2);
      if (s.empty() || s[0] == '#' || s[0] == ';') continue;
      if (s.front() == '[') {
        sec2 = trim(s.substr(1, s.find(']') - 1));
        continue;
      }
      const size_t eq = s.find('=');
      if (eq == std::string::npos) continue;
      if (sec2 == "run" && trim(s.substr(0, eq)) == "preset") apply_preset(cfg, trim(s.substr(eq + 1)));
    }
  }
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      const size_t close = s.find(']');
      if (close == std::string::npos) config_fail(line, "unterminated section header");
      section = trim(s.substr(1, close - 1));
      if (!schema.count(section)) config_fail(line, "unknown section [" + section + "]");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos) config_fail(line, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) config_fail(line, "key '" + key + "' outside any section");
    auto it = schema[section].find(key);
    if (it == schema[section].end())
      config_fail(line, "unknown key '" + key + "' in section [" + section + "]");
    key_lines[section + "." + key] = line;
    const KeyRef& ref = it->second;
    switch (ref.type) {
      case KeyRef::Type::Number: *ref.num = parse_number(value, line); break;
      case KeyRef::Type::Int: *ref.integer = static_cast<int>(parse_number(value, line)); break;
      case KeyRef::Type::Long: *ref.wide = static_cast<long>(parse_number(value, line)); break;
      case KeyRef::Type::Mode:
        if (value == "continuous") cfg.mode = ControllerMode::Continuous;
        else if (value == "etc") cfg.mode = ControllerMode::EventTriggered;
        else if (value == "zoh") cfg.mode = ControllerMode::PeriodicZoh;
        else config_fail(line, "mode must be continuous|etc|zoh");
        break;
      case KeyRef::Type::EtmSource:
        if (value == "preset") cfg.etm_source = EtmSource::Preset;
        else if (value == "derived") cfg.etm_source = EtmSource::Derived;
        else config_fail(line, "etm source must be preset|derived");
        break;
      case KeyRef::Type::Preset:
        break;  // handled in the first pass
    }
  }
  try {
    cfg.validate();
  } catch (const SimulationError& e) {
    throw SimulationError(ErrorKind::ConfigError,
                          std::string("config invariant violated: ") + e.what());
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path, const std::string& preset) {
  ScenarioConfig cfg;
  if (!preset.empty()) apply_preset(cfg, preset);
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::IoError, "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!preset.empty()) text = "[run]\npreset = " + preset + "\n" + text;
    cfg = parse_config(text);
  }
  return cfg;
}

namespace {

std::string fmt(Scalar v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string serialize_config(const ScenarioConfig& cfg) {
  std::ostringstream out;
  out << "[bio]\n";
  out << "D = " << fmt(cfg.bio.D) << "\n";
  out << "a = " << fmt(cfg.bio.a) << "\n";
  out << "g = " << fmt(cfg.bio.g) << "\n";
  out << "r_g = " << fmt(cfg.bio.r_g) << "\n";
  out << "rt_g = " << fmt(cfg.bio.rt_g) << "\n";
  out << "l_c = " << fmt(cfg.bio.l_c) << "\n";
  out << "c_inf = " << fmt(cfg.bio.c_inf) << "\n";
  out << "l_s = " << fmt(cfg.bio.l_s) << "\n";
  out << "[solver]\n";
  out << "N = " << cfg.solver.N << "\n";
  out << "dt = " << fmt(cfg.solver.dt) << "\n";
  out << "theta = " << fmt(cfg.solver.theta) << "\n";
  out << "[gains]\n";
  out << "k1 = " << fmt(cfg.gains.k1) << "\n";
  out << "k2 = " << fmt(cfg.gains.k2) << "\n";
  out << "[etm]\n";
  out << "gamma = " << fmt(cfg.etm.gamma) << "\n";
  out << "eta = " << fmt(cfg.etm.eta) << "\n";
  out << "rho = " << fmt(cfg.etm.rho) << "\n";
  out << "sigma = " << fmt(cfg.etm.sigma) << "\n";
  out << "m0 = " << fmt(cfg.etm.m0) << "\n";
  for (int i = 0; i < 5; ++i)
    out << "beta" << (i + 1) << " = " << fmt(cfg.etm.beta[i]) << "\n";
  out << "source = " << (cfg.etm_source == EtmSource::Preset ? "preset" : "derived") << "\n";
  out << "[run]\n";
  out << "mode = " << to_string(cfg.mode) << "\n";
  out << "horizon = " << fmt(cfg.horizon) << "\n";
  out << "l_bar = " << fmt(cfg.l_bar) << "\n";
  out << "v_bar = " << fmt(cfg.v_bar) << "\n";
  out << "event_cap = " << cfg.event_cap << "\n";
  out << "l0 = " << fmt(cfg.l0) << "\n";
  out << "c0 = " << fmt(cfg.c0) << "\n";
  out << "init_scale = " << fmt(cfg.init_scale) << "\n";
  out << "zoh_period = " << fmt(cfg.zoh_period) << "\n";
  out << "snapshot_dt = " << fmt(cfg.snapshot_dt) << "\n";
  out << "table_density = " << cfg.table_density << "\n";
  return out.str();
}

}  // namespace axon
