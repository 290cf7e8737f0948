#include "optosqueeze/output.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"

namespace osq {

namespace {

using nlohmann::json;

// Shortest decimal form that round-trips the exact double.
std::string fmt(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json system_json(const SystemParams& p) {
  json j;
  j["omega_m0_hz"] = p.omega_m0 / two_pi;
  j["mass_kg"] = p.mass;
  if (p.quality_factor) j["quality_factor"] = *p.quality_factor;
  if (p.gamma_m) j["gamma_m_hz"] = *p.gamma_m / two_pi;
  j["kappa_hz"] = p.kappa / two_pi;
  j["temperature_k"] = p.temperature;
  if (const auto* dc = std::get_if<DriveCoupling>(&p.drive)) {
    j["coupling_hz"] = dc->coupling / two_pi;
  } else {
    const auto& dp = std::get<DrivePower>(p.drive);
    j["power_w"] = dp.power;
    j["cavity_length_m"] = dp.cavity_length;
    j["reflectivity"] = dp.reflectivity;
  }
  if (p.omega_c) j["omega_c_hz"] = *p.omega_c / two_pi;
  if (p.detuning_policy.kind == DetuningPolicy::Kind::sideband_cooling)
    j["detuning"] = "sideband-cooling";
  else
    j["detuning_hz"] = p.detuning_policy.value / two_pi;
  j["squeeze_detuning_hz"] = p.squeeze_detuning / two_pi;
  return j;
}

json squeezing_json(const SqueezingSpec& s) {
  json j;
  j["N"] = s.N;
  j["M_abs"] = std::abs(s.M);
  j["M_phase_rad"] = std::arg(s.M);
  j["b_x_hz"] = s.b_x / two_pi;
  j["b_y_hz"] = s.b_y / two_pi;
  if (s.opo) {
    j["gamma_o_hz"] = s.opo->gamma_o / two_pi;
    j["epsilon_hz"] = std::abs(s.opo->epsilon) / two_pi;
    j["epsilon_phase_rad"] = std::arg(s.opo->epsilon);
  }
  return j;
}

json scenario_json(const Scenario& sc) {
  json j;
  j["kind"] = kind_name(sc.kind);
  j["input_db"] = sc.input_db;
  j["axis"] = {{"name", sc.axis.name},
               {"from", sc.axis.from},
               {"to", sc.axis.to},
               {"points", sc.axis.points},
               {"spacing",
                sc.axis.spacing == AxisSpacing::log ? "log" : "linear"}};
  json methods = json::array();
  for (Method m : sc.methods) methods.push_back(method_name(m));
  j["methods"] = methods;
  j["system"] = system_json(sc.system);
  j["squeezing"] = squeezing_json(sc.squeezing);
  return j;
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& os) {
  os << "axis,method,V_min,V_max,phi_star_rad,squeeze_db,occupancy,"
        "micromotion_pp,stable\n";
  for (const auto& row : result.rows) {
    for (size_t j = 0; j < row.results.size(); ++j) {
      const MethodResult& r = row.results[j];
      os << fmt(row.axis_value) << ','
         << csv_quote(method_name(result.scenario.methods[j])) << ','
         << fmt(r.v_min) << ',' << fmt(r.v_max) << ',' << fmt(r.phi_star)
         << ',' << fmt(r.squeeze_db) << ',' << fmt(r.occupancy) << ','
         << fmt(r.micromotion_pp) << ',' << (r.stable ? '1' : '0') << '\n';
    }
  }
}

void write_json(const SweepResult& result, std::ostream& os) {
  json doc;
  doc["metadata"] = {{"generated_at", utc_now()},
                     {"version", version_string},
                     {"scenario", scenario_json(result.scenario)}};
  json rows = json::array();
  for (const auto& row : result.rows) {
    json jr;
    jr["axis_value"] = row.axis_value;
    json results = json::array();
    for (size_t j = 0; j < row.results.size(); ++j) {
      const MethodResult& r = row.results[j];
      json m;
      m["method"] = method_name(result.scenario.methods[j]);
      m["ok"] = r.ok;
      if (!r.ok) m["error"] = r.error;
      m["v_min"] = r.v_min;
      m["v_max"] = r.v_max;
      m["phi_star_rad"] = r.phi_star;
      m["squeeze_db"] = r.squeeze_db;
      m["occupancy"] = r.occupancy;
      m["micromotion_pp"] = r.micromotion_pp;
      m["stable"] = r.stable;
      results.push_back(std::move(m));
    }
    jr["results"] = std::move(results);
    rows.push_back(std::move(jr));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << '\n';
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  write_csv(result, os);
  return os.str();
}

std::string to_json(const SweepResult& result) {
  std::ostringstream os;
  write_json(result, os);
  return os.str();
}

void write_output(const SweepResult& result, OutputFormat format,
                  const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot open output file: " + path);
  if (format == OutputFormat::csv)
    write_csv(result, out);
  else
    write_json(result, out);
  out.flush();
  if (!out)
    throw Error(ErrorCode::io_error, "failed writing output file: " + path);
}

}  // namespace osq
