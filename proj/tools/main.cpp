// Command-line front end: evaluate the configured operating point
// (analytic / exact), run the configured sweep, or self-check the
// squeezed-noise source model.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure in a
// non-sweep invocation. Sweeps record per-point failures in the output rows
// and still exit 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "optosqueeze/config.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/dynamics.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/output.hpp"
#include "optosqueeze/squeezing.hpp"
#include "optosqueeze/sweep.hpp"

namespace {

int exit_code_for(osq::ErrorCode c) {
  switch (c) {
    case osq::ErrorCode::config_error:
    case osq::ErrorCode::io_error:
    case osq::ErrorCode::invalid_parameter:
      return 2;
    default:
      return 3;
  }
}

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
};

// Any failure while resolving the scenario file is a configuration error,
// including physics-level rejections of configured values (for example a
// pump at threshold).
osq::Scenario load_checked(const std::string& path) {
  try {
    return osq::load_config(path);
  } catch (const osq::Error& e) {
    switch (e.code()) {
      case osq::ErrorCode::config_error:
      case osq::ErrorCode::io_error:
      case osq::ErrorCode::invalid_parameter:
        throw;
      default:
        throw osq::Error(osq::ErrorCode::config_error, e.what());
    }
  }
}

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "scenario file (TOML)")
      ->required();
  sub->add_option("--out", o.out_path, "output path (stdout when omitted)");
  sub->add_option("--format", o.format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
}

void write_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os)
    throw osq::Error(osq::ErrorCode::io_error,
                     "cannot open output file: " + out_path);
  os << text;
  os.flush();
  if (!os)
    throw osq::Error(osq::ErrorCode::io_error,
                     "failed writing output file: " + out_path);
}

void emit(const osq::SweepResult& res, const CommonOpts& o) {
  bool json = o.format == "json";
  if (o.out_path.empty()) {
    if (json)
      osq::write_json(res, std::cout);
    else
      osq::write_csv(res, std::cout);
  } else {
    osq::write_output(res,
                      json ? osq::OutputFormat::json : osq::OutputFormat::csv,
                      o.out_path);
  }
}

int run_single(const CommonOpts& o, const std::vector<osq::Method>& methods) {
  osq::Scenario base = load_checked(o.config_path);

  osq::SweepResult out;
  out.scenario = base;
  out.scenario.methods = methods;
  out.scenario.axis = osq::Axis{"input_db", base.input_db, base.input_db, 1,
                                osq::AxisSpacing::linear};

  osq::SweepRow row;
  row.axis_value = base.input_db;
  bool all_ok = true;
  for (osq::Method m : methods) {
    row.results.push_back(osq::evaluate_point(base, m));
    all_ok = all_ok && row.results.back().ok;
  }
  out.rows.push_back(std::move(row));
  emit(out, o);

  if (!all_ok) {
    for (size_t j = 0; j < methods.size(); ++j)
      if (!out.rows[0].results[j].ok)
        std::cerr << osq::method_name(methods[j]) << ": "
                  << out.rows[0].results[j].error << "\n";
    return 3;
  }
  return 0;
}

int run_sweep(const CommonOpts& o, int jobs) {
  osq::Scenario sc = load_checked(o.config_path);
  osq::SweepResult res = osq::run_scenario(sc, jobs);
  emit(res, o);
  return 0;
}

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

std::string fmtg(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Consistency checks of the configured source: pump-to-spectrum mapping
// round-trip, purity bound, positivity of the white-noise minimum, the
// regression-theorem output correlators against the closed-form ones, and
// the intracavity photon bound.
int run_validate(const CommonOpts& o) {
  osq::Scenario base = load_checked(o.config_path);
  const osq::SqueezingSpec& spec = base.squeezing;
  if (!spec.opo)
    throw osq::Error(osq::ErrorCode::config_error,
                     "validate-source needs a pump model: give [squeezing] as "
                     "{gamma_o, epsilon} or {db, bandwidth_bx}");

  const osq::OpoParams& opo = *spec.opo;
  std::vector<Check> checks;

  {
    double ratio = std::abs(opo.epsilon) / (opo.gamma_o / 2.0);
    checks.push_back({"pump below threshold", ratio < 1.0,
                      "|epsilon|/(gamma_o/2) = " + fmtg(ratio)});
  }
  {
    osq::SqueezingSpec back = osq::opo_to_nm(opo.gamma_o, opo.epsilon);
    double dev = 0.0;
    auto rel = [](double a, double b) {
      return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    };
    dev = std::max(dev, rel(back.N, spec.N));
    dev = std::max(dev, std::abs(back.M - spec.M) /
                            std::max(1.0, std::abs(spec.M)));
    dev = std::max(dev, rel(back.b_x, spec.b_x) );
    dev = std::max(dev, rel(back.b_y, spec.b_y));
    checks.push_back({"pump-to-spectrum round-trip", dev <= 1e-9,
                      "max rel. deviation " + fmtg(dev)});
  }
  {
    double lhs = std::norm(spec.M);
    double rhs = spec.N * (spec.N + 1.0);
    double dev = std::abs(lhs - rhs) / std::max(1.0, rhs);
    checks.push_back({"pure-state bound saturated", dev <= 1e-9,
                      "| |M|^2 - N(N+1) | rel. " + fmtg(dev)});
  }
  {
    double v_min = spec.N + 0.5 - std::abs(spec.M);
    bool ok = v_min > 0.0;
    checks.push_back({"white-noise minimum variance positive", ok,
                      "V_min = " + fmtg(v_min) +
                          (ok ? " (" + fmtg(osq::to_db(v_min)) + " dB)" : "")});
  }
  {
    // Regression-theorem output correlators vs the closed-form two-time
    // correlators, in units where b_x = 1 so the 1e-6 bar is scale-free.
    double s = spec.b_x;
    osq::OpoParams nopo{opo.gamma_o / s, opo.epsilon / s};
    osq::SqueezingSpec nspec = osq::opo_to_nm(nopo.gamma_o, nopo.epsilon);
    double max_dev = 0.0;
    for (int i = 0; i <= 200; ++i) {
      double tau = 10.0 * double(i) / 200.0;
      osq::Mat2 reg = osq::opo_output_correlator(nopo, tau);
      double q[4];
      osq::input_quadrature_correlators(nspec, tau, q);
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          max_dev = std::max(max_dev, std::abs(reg(r, c) - q[2 * r + c]));
    }
    checks.push_back({"output correlators match regression theorem",
                      max_dev < 1e-6,
                      "max abs deviation " + fmtg(max_dev) +
                          " over tau in [0, 10/b_x]"});
  }
  {
    double n_cav = osq::intracavity_squeezed_photons(spec, base.system.kappa);
    bool ok = n_cav >= -1e-12 && n_cav <= spec.N * (1.0 + 1e-9) + 1e-12;
    checks.push_back({"intracavity photons within source bound", ok,
                      "n_cav = " + fmtg(n_cav) + ", N = " + fmtg(spec.N)});
  }

  bool all_ok = true;
  for (const Check& c : checks) all_ok = all_ok && c.ok;

  if (o.format == "json") {
    nlohmann::ordered_json doc;
    doc["source"] = {{"gamma_o_hz", opo.gamma_o / osq::two_pi},
                     {"epsilon_hz", std::abs(opo.epsilon) / osq::two_pi},
                     {"N", spec.N},
                     {"M_abs", std::abs(spec.M)},
                     {"b_x_hz", spec.b_x / osq::two_pi},
                     {"b_y_hz", spec.b_y / osq::two_pi}};
    doc["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : checks)
      doc["checks"].push_back(
          {{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    doc["ok"] = all_ok;
    write_text(doc.dump(2) + "\n", o.out_path);
  } else {
    std::ostringstream os;
    os << "source model checks:\n";
    for (const Check& c : checks)
      os << "  [" << (c.ok ? "ok" : "FAIL") << "] " << c.name << " ("
         << c.detail << ")\n";
    os << (all_ok ? "source model: OK\n" : "source model: FAILED\n");
    write_text(os.str(), o.out_path);
  }
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "steady-state mechanical squeezing of a laser-cooled oscillator driven "
      "by squeezed light: closed-form and exact covariance solvers"};
  app.set_version_flag("--version", std::string(osq::version_string));
  app.require_subcommand(1);

  CommonOpts oa, oe, os, ov;
  int jobs = 1;

  CLI::App* cmd_analytic = app.add_subcommand(
      "analytic",
      "closed-form variances at the configured base operating point");
  add_common(cmd_analytic, oa);

  CLI::App* cmd_exact = app.add_subcommand(
      "exact", "covariance-solver result at the configured base operating point");
  add_common(cmd_exact, oe);

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "evaluate the configured scenario axis");
  add_common(cmd_sweep, os);
  cmd_sweep->add_option("--jobs", jobs, "worker threads (default 1)")
      ->check(CLI::PositiveNumber);

  CLI::App* cmd_validate = app.add_subcommand(
      "validate-source",
      "consistency checks of the squeezed-noise source model (text report; "
      "--format json for machine-readable output)");
  add_common(cmd_validate, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (cmd_analytic->parsed())
      return run_single(oa, {osq::Method::analytic_rsl,
                             osq::Method::analytic_white,
                             osq::Method::analytic_finite_bw});
    if (cmd_exact->parsed()) return run_single(oe, {osq::Method::exact});
    if (cmd_sweep->parsed()) return run_sweep(os, jobs);
    if (cmd_validate->parsed()) return run_validate(ov);
  } catch (const osq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
