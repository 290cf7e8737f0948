#include "optosqueeze/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "optosqueeze/analytics.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/dynamics.hpp"
#include "optosqueeze/errors.hpp"

namespace osq {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::invalid_parameter, what);
}

constexpr double pi = 3.14159265358979323846;

double wrap_half_period(double phi) {
  double p = std::fmod(phi, pi);
  if (p < 0.0) p += pi;
  // Quadratures are pi-periodic; values within rounding of pi are angle 0.
  return pi - p < 1e-9 ? 0.0 : p;
}

struct PointSetup {
  SystemParams system;
  SqueezingSpec squeezing;
};

// Applies one axis value to the base scenario.
PointSetup setup_for(const Scenario& sc, double value) {
  PointSetup p{sc.system, sc.squeezing};
  const std::string& axis = sc.axis.name;
  if (axis == "input_db") {
    p.squeezing = nm_to_opo(value, sc.squeezing.b_x);
  } else if (axis == "delta") {
    p.system.squeeze_detuning = two_pi * value;
  } else if (axis == "bandwidth_bx") {
    p.squeezing = nm_to_opo(sc.input_db, two_pi * value);
  } else if (axis == "temperature") {
    p.system.temperature = value;
  } else if (axis == "kappa") {
    p.system.kappa = two_pi * value;
  } else if (axis == "eta") {
    // Scale kappa at fixed omega_m0, holding the cooperativity-like ratio
    // G^2/kappa so the white-noise backaction stays comparable.
    if (!(value > 0.0)) bad("eta axis values must be positive");
    double kappa_new = value * sc.system.omega_m0;
    const auto* dc = std::get_if<DriveCoupling>(&sc.system.drive);
    if (!dc) bad("the eta axis needs the drive given as a coupling");
    p.system.kappa = kappa_new;
    p.system.drive =
        DriveCoupling{dc->coupling * std::sqrt(kappa_new / sc.system.kappa)};
  } else {
    bad("unknown sweep axis '" + axis + "'");
  }
  return p;
}

// Extrema of an exactly sinusoidal V(phi) = mean + C cos 2phi - S sin 2phi,
// reconstructed from three probes of the supplied variance function.
QuadratureStats stats_from_sinusoid(std::function<double(double)> f) {
  double v0 = f(0.0);
  double v45 = f(pi / 4.0);
  double v90 = f(pi / 2.0);
  double mean = 0.5 * (v0 + v90);
  double c = 0.5 * (v0 - v90);
  double s = mean - v45;
  double rho = std::hypot(c, s);

  QuadratureStats q;
  q.v_min = mean - rho;
  q.v_max = mean + rho;
  q.phi_star = rho == 0.0 ? 0.0 : wrap_half_period(std::atan2(s, -c) / 2.0);
  q.squeeze_db = q.v_min > 0.0 ? to_db(q.v_min)
                               : std::numeric_limits<double>::infinity();
  q.occupancy = mean - 0.5;
  q.variance_of_phi = std::move(f);
  return q;
}

MethodResult eval_point_impl(const PointSetup& ps, Method m) {
  MethodResult r;
  double nan = std::numeric_limits<double>::quiet_NaN();
  r.v_min = r.v_max = r.phi_star = r.squeeze_db = r.occupancy =
      r.micromotion_pp = nan;
  r.stable = false;
  try {
    DerivedParams d = derive_params(ps.system);
    CoolingRates rates =
        cooling_rates(d.coupling_G, d.kappa, d.omega_m0, d.gamma_m);

    QuadratureStats q;
    double micromotion = 0.0;
    switch (m) {
      case Method::analytic_rsl:
        q = stats_from_sinusoid([spec = ps.squeezing, rates,
                                 n_th = d.n_th](double phi) {
          return variance_white_rsl(spec, phi, rates, n_th);
        });
        break;
      case Method::analytic_white:
        q = stats_from_sinusoid([spec = ps.squeezing, rates, d](double phi) {
          return variance_white_general(spec, phi, d.coupling_G, d.kappa,
                                        rates, d.gamma_m, d.n_th);
        });
        break;
      case Method::analytic_finite_bw:
        q = stats_from_sinusoid([spec = ps.squeezing, rates, d](double phi) {
          return variance_finite_bandwidth(spec, phi, d.coupling_G, d.kappa,
                                           rates, d.gamma_m, d.n_th);
        });
        break;
      case Method::exact: {
        LinearModel model =
            build_cascade(d, rates, ps.squeezing, d.squeeze_detuning);
        PeriodicCovariance cov = periodic_lyapunov_steady(
            model, 1e-6, 64, {d.kappa, d.omega_m0, ps.squeezing.b_y});
        MechStats ms = mech_quadrature_stats(cov, rates.omega_m);
        q = std::move(ms.stats);
        micromotion = ms.micromotion_pp;
        break;
      }
    }
    r.v_min = q.v_min;
    r.v_max = q.v_max;
    r.phi_star = q.phi_star;
    r.squeeze_db = q.squeeze_db;
    r.occupancy = q.occupancy;
    r.micromotion_pp = micromotion;
    r.stable = true;
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  return r;
}

MethodResult eval_method(const Scenario& sc, double axis_value, Method m) {
  try {
    return eval_point_impl(setup_for(sc, axis_value), m);
  } catch (const std::exception& e) {
    MethodResult r;
    double nan = std::numeric_limits<double>::quiet_NaN();
    r.v_min = r.v_max = r.phi_star = r.squeeze_db = r.occupancy =
        r.micromotion_pp = nan;
    r.ok = false;
    r.stable = false;
    r.error = e.what();
    return r;
  }
}

}  // namespace

MethodResult evaluate_point(const Scenario& scenario, Method method) {
  scenario.system.validate();
  scenario.squeezing.validate();
  return eval_point_impl({scenario.system, scenario.squeezing}, method);
}

std::vector<double> Axis::values() const {
  if (points < 1) bad("axis needs at least one point");
  std::vector<double> v;
  v.reserve(size_t(points));
  if (points == 1) {
    v.push_back(from);
    return v;
  }
  if (spacing == AxisSpacing::log) {
    if (!(from > 0.0) || !(to > 0.0))
      bad("log spacing needs positive endpoints");
    double ratio = to / from;
    for (int i = 0; i < points - 1; ++i)
      v.push_back(from * std::pow(ratio, double(i) / (points - 1)));
  } else {
    for (int i = 0; i < points - 1; ++i)
      v.push_back(from + (to - from) * double(i) / (points - 1));
  }
  v.push_back(to);
  return v;
}

void Scenario::validate() const {
  const std::string& a = axis.name;
  if (a != "input_db" && a != "delta" && a != "bandwidth_bx" &&
      a != "temperature" && a != "kappa" && a != "eta")
    bad("unknown sweep axis '" + a + "'");
  if (axis.points < 2) bad("a sweep needs at least two axis points");
  if (axis.points > 1000000) bad("axis point count is implausibly large");
  if (axis.spacing == AxisSpacing::log && (!(axis.from > 0.0) || !(axis.to > 0.0)))
    bad("log spacing needs positive endpoints");
  if ((a == "bandwidth_bx" || a == "kappa" || a == "eta") &&
      (!(axis.from > 0.0) || !(axis.to > 0.0)))
    bad("axis '" + a + "' needs positive endpoints");
  if (a == "temperature" && (axis.from < 0.0 || axis.to < 0.0))
    bad("temperature cannot be negative");
  if (a == "input_db" && (axis.from < 0.0 || axis.to < 0.0))
    bad("input squeezing level is quoted in dB >= 0");
  if (a == "eta" && !std::holds_alternative<DriveCoupling>(system.drive))
    bad("the eta axis needs the drive given as a coupling");
  if (methods.empty()) bad("no methods requested");
  for (size_t i = 0; i < methods.size(); ++i)
    for (size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j])
        bad("duplicate method '" + method_name(methods[i]) + "'");
  system.validate();
  squeezing.validate();
}

SweepResult run_scenario(const Scenario& scenario, int jobs) {
  scenario.validate();
  if (jobs < 1) bad("jobs must be >= 1");

  std::vector<double> vals = scenario.axis.values();
  std::sort(vals.begin(), vals.end());

  SweepResult out;
  out.scenario = scenario;
  out.rows.resize(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) {
    out.rows[i].axis_value = vals[i];
    out.rows[i].results.resize(scenario.methods.size());
  }

  auto work = [&](size_t i) {
    for (size_t j = 0; j < scenario.methods.size(); ++j)
      out.rows[i].results[j] =
          eval_method(scenario, vals[i], scenario.methods[j]);
  };

  size_t workers = std::min(size_t(jobs), vals.size());
  if (workers <= 1) {
    for (size_t i = 0; i < vals.size(); ++i) work(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < vals.size();
             i = next.fetch_add(1))
          work(i);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

namespace {

double imbalance_of(const MethodResult& r) {
  double mean = 0.5 * (r.v_min + r.v_max);
  return mean > 0.0 ? (r.v_max - r.v_min) / mean : 0.0;
}

const MethodResult& checked(const MethodResult& r, const char* which) {
  if (!r.ok)
    throw Error(ErrorCode::no_convergence,
                std::string("squashing report: the ") + which +
                    " evaluation failed: " + r.error);
  return r;
}

}  // namespace

SquashingReport squashing_report(const SystemParams& params, double input_db,
                                 double b_x) {
  if (!(input_db > 0.0)) bad("squashing needs a positive input level (dB)");

  Scenario sc;
  sc.kind = ScenarioKind::squashing;
  sc.system = params;
  sc.squeezing = nm_to_opo(input_db, b_x);
  sc.input_db = input_db;
  sc.axis = {"input_db", 0.0, input_db, 2, AxisSpacing::linear};
  sc.methods = {Method::analytic_rsl, Method::exact};

  SweepResult res = run_scenario(sc, 1);
  const MethodResult& base_a = checked(res.rows[0].results[0], "baseline analytic");
  const MethodResult& base_e = checked(res.rows[0].results[1], "baseline exact");
  const MethodResult& sq_a = checked(res.rows[1].results[0], "squeezed analytic");
  const MethodResult& sq_e = checked(res.rows[1].results[1], "squeezed exact");

  SquashingReport rep;
  rep.input_db = input_db;
  rep.baseline_occupancy_analytic = base_a.occupancy;
  rep.baseline_occupancy_exact = base_e.occupancy;
  rep.imbalance_analytic = imbalance_of(sq_a);
  rep.imbalance_exact = imbalance_of(sq_e);
  rep.baseline_imbalance_exact = imbalance_of(base_e);
  rep.v_min_exact = sq_e.v_min;
  rep.v_max_exact = sq_e.v_max;
  rep.detail = std::move(res);
  return rep;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::analytic_rsl: return "analytic_rsl";
    case Method::analytic_white: return "analytic_white";
    case Method::analytic_finite_bw: return "analytic_finite_bw";
    case Method::exact: return "exact";
  }
  return "unknown";
}

std::string kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::fig3a_input_sweep: return "fig3a_input_sweep";
    case ScenarioKind::fig3b_detuning_sweep: return "fig3b_detuning_sweep";
    case ScenarioKind::fig3c_bandwidth_sweep: return "fig3c_bandwidth_sweep";
    case ScenarioKind::fig3d_temperature_sweep: return "fig3d_temperature_sweep";
    case ScenarioKind::squashing: return "squashing";
    case ScenarioKind::custom: return "custom";
  }
  return "unknown";
}

}  // namespace osq
