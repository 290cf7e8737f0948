#include "optosqueeze/config.hpp"

#include <cmath>
#include <complex>
#include <set>
#include <string>

#include "optosqueeze/analytics.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"

namespace osq {

namespace {

[[noreturn]] void cfg_fail(const std::string& what) {
  throw Error(ErrorCode::config_error, what);
}

[[noreturn]] void cfg_fail(int line, const std::string& what) {
  cfg_fail("line " + std::to_string(line) + ": " + what);
}

double hz(const toml::Value& v) { return two_pi * v.as_number(); }

ScenarioKind parse_kind(const toml::Value& v) {
  const std::string& s = v.as_string();
  if (s == "fig3a_input_sweep") return ScenarioKind::fig3a_input_sweep;
  if (s == "fig3b_detuning_sweep") return ScenarioKind::fig3b_detuning_sweep;
  if (s == "fig3c_bandwidth_sweep") return ScenarioKind::fig3c_bandwidth_sweep;
  if (s == "fig3d_temperature_sweep")
    return ScenarioKind::fig3d_temperature_sweep;
  if (s == "squashing") return ScenarioKind::squashing;
  if (s == "custom") return ScenarioKind::custom;
  cfg_fail(v.line, "unknown scenario kind '" + s + "'");
}

Method parse_method(const std::string& s, int line) {
  if (s == "analytic_rsl") return Method::analytic_rsl;
  if (s == "analytic_white") return Method::analytic_white;
  if (s == "analytic_finite_bw") return Method::analytic_finite_bw;
  if (s == "exact") return Method::exact;
  cfg_fail(line, "unknown method '" + s + "'");
}

void check_known(const toml::Table& t, const std::string& section,
                 const std::set<std::string>& known) {
  for (const auto& [key, value] : t.entries)
    if (!known.count(key))
      cfg_fail(value.line,
               "unknown key '" + key + "' in [" + section + "]");
}

// Published operating points. fig3a-d share one cold high-Q platform; the
// squashing study runs a heavier, warmer, weakly coupled one.
Scenario preset(ScenarioKind kind) {
  Scenario sc;
  sc.kind = kind;
  if (kind == ScenarioKind::custom) return sc;

  SystemParams sys;
  sys.omega_m0 = two_pi * 1e6;
  sys.mass = 1e-12;
  sys.quality_factor = 1e7;
  sys.kappa = two_pi * 380e3;
  sys.temperature = 0.1;
  sys.drive = DriveCoupling{two_pi * 110e3};
  sys.detuning_policy = DetuningPolicy::sideband();
  sys.squeeze_detuning = 0.0;

  sc.system = sys;
  sc.squeezing = nm_to_opo(6.0, two_pi * 20e6);

  switch (kind) {
    case ScenarioKind::fig3a_input_sweep:
      sc.axis = {"input_db", 0.0, 10.0, 21, AxisSpacing::linear};
      sc.methods = {Method::analytic_rsl, Method::analytic_white,
                    Method::exact};
      break;
    case ScenarioKind::fig3b_detuning_sweep:
      // Span filled after overrides from the resolved cooling rate.
      sc.axis = {"delta", 0.0, 0.0, 21, AxisSpacing::linear};
      sc.methods = {Method::exact};
      break;
    case ScenarioKind::fig3c_bandwidth_sweep:
      sc.axis = {"bandwidth_bx", 1e4, 1e9, 25, AxisSpacing::log};
      sc.methods = {Method::analytic_white, Method::analytic_finite_bw,
                    Method::exact};
      break;
    case ScenarioKind::fig3d_temperature_sweep:
      sc.axis = {"temperature", 1e-3, 10.0, 21, AxisSpacing::log};
      sc.methods = {Method::analytic_rsl, Method::analytic_white,
                    Method::exact};
      break;
    case ScenarioKind::squashing:
      sc.system.mass = 1e-11;
      sc.system.kappa = two_pi * 125e3;
      sc.system.temperature = 4.0;
      sc.system.drive = DriveCoupling{two_pi * 21e3};
      sc.system.quality_factor.reset();
      sc.system.gamma_m = two_pi * 0.1;
      sc.axis = {"input_db", 0.0, 6.0, 2, AxisSpacing::linear};
      sc.methods = {Method::analytic_rsl, Method::exact};
      break;
    case ScenarioKind::custom:
      break;
  }
  return sc;
}

void apply_system(const toml::Table& t, SystemParams& p) {
  static const std::set<std::string> known = {
      "omega_m0",     "mass",        "quality_factor", "gamma_m",
      "kappa",        "temperature", "coupling",       "power",
      "cavity_length", "reflectivity", "omega_c",      "detuning",
      "squeeze_detuning"};
  check_known(t, "system", known);

  if (const auto* v = t.find("omega_m0")) p.omega_m0 = hz(*v);
  if (const auto* v = t.find("mass")) p.mass = v->as_number();
  if (const auto* v = t.find("kappa")) p.kappa = hz(*v);
  if (const auto* v = t.find("temperature")) p.temperature = v->as_number();
  if (const auto* v = t.find("squeeze_detuning")) p.squeeze_detuning = hz(*v);
  if (const auto* v = t.find("omega_c")) p.omega_c = hz(*v);

  const auto* q = t.find("quality_factor");
  const auto* gm = t.find("gamma_m");
  if (q && gm)
    cfg_fail(gm->line, "give quality_factor or gamma_m in [system], not both");
  if (q) {
    p.quality_factor = q->as_number();
    p.gamma_m.reset();
  }
  if (gm) {
    p.gamma_m = hz(*gm);
    p.quality_factor.reset();
  }

  const auto* coupling = t.find("coupling");
  bool power_form =
      t.has("power") || t.has("cavity_length") || t.has("reflectivity");
  if (coupling && power_form)
    cfg_fail(coupling->line,
             "give coupling or the power chain in [system], not both");
  if (coupling) p.drive = DriveCoupling{hz(*coupling)};
  if (power_form) {
    for (const char* key : {"power", "cavity_length", "reflectivity"})
      if (!t.has(key))
        cfg_fail(std::string("the power drive needs '") + key +
                 "' in [system]");
    p.drive = DrivePower{t.find("power")->as_number(),
                         t.find("cavity_length")->as_number(),
                         t.find("reflectivity")->as_number()};
  }

  if (const auto* v = t.find("detuning")) {
    if (std::holds_alternative<std::string>(v->data)) {
      if (v->as_string() != "sideband-cooling")
        cfg_fail(v->line,
                 "detuning must be \"sideband-cooling\" or a number (Hz)");
      p.detuning_policy = DetuningPolicy::sideband();
    } else {
      p.detuning_policy = DetuningPolicy::fixed_at(hz(*v));
    }
  }
}

void apply_squeezing(const toml::Table& t, SqueezingSpec& s) {
  static const std::set<std::string> known = {
      "gamma_o", "epsilon", "epsilon_phase", "db", "bandwidth_bx",
      "N",       "M_abs",   "M_phase",       "b_x", "b_y"};
  check_known(t, "squeezing", known);

  bool pump = t.has("gamma_o") || t.has("epsilon") || t.has("epsilon_phase");
  bool level = t.has("db") || t.has("bandwidth_bx");
  bool raw = t.has("N") || t.has("M_abs") || t.has("M_phase") ||
             t.has("b_x") || t.has("b_y");
  if (int(pump) + int(level) + int(raw) > 1)
    cfg_fail("[squeezing] mixes source parameterizations; use one of "
             "{gamma_o, epsilon}, {db, bandwidth_bx}, {N, M_abs, b_x, b_y}");
  if (!pump && !level && !raw) return;

  if (pump) {
    const auto* go = t.find("gamma_o");
    if (!go) cfg_fail("the pump form needs 'gamma_o' in [squeezing]");
    double mag = t.has("epsilon") ? hz(*t.find("epsilon")) : 0.0;
    double ph =
        t.has("epsilon_phase") ? t.find("epsilon_phase")->as_number() : 0.0;
    if (mag < 0.0) cfg_fail(go->line, "epsilon must be >= 0");
    s = opo_to_nm(hz(*go), std::polar(mag, ph));
    return;
  }
  if (level) {
    for (const char* key : {"db", "bandwidth_bx"})
      if (!t.has(key))
        cfg_fail(std::string("the level form needs '") + key +
                 "' in [squeezing]");
    s = nm_to_opo(t.find("db")->as_number(), hz(*t.find("bandwidth_bx")));
    return;
  }
  for (const char* key : {"N", "b_x", "b_y"})
    if (!t.has(key))
      cfg_fail(std::string("the raw correlator form needs '") + key +
               "' in [squeezing]");
  double m_abs = t.has("M_abs") ? t.find("M_abs")->as_number() : 0.0;
  double m_phase = t.has("M_phase") ? t.find("M_phase")->as_number() : 0.0;
  if (m_abs < 0.0) cfg_fail(t.find("M_abs")->line, "M_abs must be >= 0");
  SqueezingSpec raw_spec;
  raw_spec.N = t.find("N")->as_number();
  raw_spec.M = std::polar(m_abs, m_phase);
  raw_spec.b_x = hz(*t.find("b_x"));
  raw_spec.b_y = hz(*t.find("b_y"));
  raw_spec.opo.reset();
  raw_spec.validate();
  s = raw_spec;
}

void apply_scenario(const toml::Table& t, Scenario& sc, bool& from_set,
                    bool& to_set) {
  static const std::set<std::string> known = {"kind",   "axis",    "from",
                                              "to",     "points",  "spacing",
                                              "methods"};
  check_known(t, "scenario", known);

  if (const auto* v = t.find("axis")) sc.axis.name = v->as_string();
  if (const auto* v = t.find("from")) {
    sc.axis.from = v->as_number();
    from_set = true;
  }
  if (const auto* v = t.find("to")) {
    sc.axis.to = v->as_number();
    to_set = true;
  }
  if (const auto* v = t.find("points")) {
    double p = v->as_number();
    if (!(p >= 1.0) || p != std::floor(p) || p > 1e6)
      cfg_fail(v->line, "points must be an integer >= 1");
    sc.axis.points = int(p);
  }
  if (const auto* v = t.find("spacing")) {
    const std::string& s = v->as_string();
    if (s == "linear")
      sc.axis.spacing = AxisSpacing::linear;
    else if (s == "log")
      sc.axis.spacing = AxisSpacing::log;
    else
      cfg_fail(v->line, "spacing must be \"linear\" or \"log\"");
  }
  if (const auto* v = t.find("methods")) {
    auto names = v->as_string_array();
    if (names.empty()) cfg_fail(v->line, "methods must not be empty");
    sc.methods.clear();
    for (const auto& name : names) {
      Method m = parse_method(name, v->line);
      for (Method seen : sc.methods)
        if (seen == m) cfg_fail(v->line, "duplicate method '" + name + "'");
      sc.methods.push_back(m);
    }
  }
}

}  // namespace

Scenario scenario_from_document(const toml::Document& doc) {
  if (!doc.root.entries.empty()) {
    const auto& [key, value] = *doc.root.entries.begin();
    cfg_fail(value.line, "top-level key '" + key +
                             "' outside any section; use [system], "
                             "[squeezing] or [scenario]");
  }
  for (const auto& [name, table] : doc.sections)
    if (name != "system" && name != "squeezing" && name != "scenario")
      cfg_fail("unknown section [" + name + "]");

  const toml::Table* scn = doc.section("scenario");
  ScenarioKind kind = ScenarioKind::custom;
  if (scn && scn->has("kind")) kind = parse_kind(*scn->find("kind"));

  if (kind == ScenarioKind::custom) {
    if (!doc.section("system") || !doc.section("squeezing") || !scn)
      cfg_fail("a custom scenario spells out [system], [squeezing] and "
               "[scenario] in full");
    for (const char* key : {"axis", "from", "to", "points", "methods"})
      if (!scn->has(key))
        cfg_fail(std::string("a custom scenario needs '") + key +
                 "' in [scenario]");
  }

  Scenario sc = preset(kind);
  if (const toml::Table* sys = doc.section("system"))
    apply_system(*sys, sc.system);
  if (const toml::Table* sq = doc.section("squeezing"))
    apply_squeezing(*sq, sc.squeezing);

  bool from_set = false, to_set = false;
  if (scn) apply_scenario(*scn, sc, from_set, to_set);

  if (kind == ScenarioKind::fig3b_detuning_sweep && !from_set && !to_set) {
    DerivedParams d = derive_params(sc.system);
    CoolingRates rates =
        cooling_rates(d.coupling_G, d.kappa, d.omega_m0, d.gamma_m);
    double span_hz = 5.0 * rates.gamma_eff / two_pi;
    sc.axis.from = -span_hz;
    sc.axis.to = span_hz;
  }

  sc.input_db = to_db(sc.squeezing.N + 0.5 - std::abs(sc.squeezing.M));
  sc.validate();
  return sc;
}

Scenario load_config(const std::string& path) {
  return scenario_from_document(toml::parse_file(path));
}

}  // namespace osq
