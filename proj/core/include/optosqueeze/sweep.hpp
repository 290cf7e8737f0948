#pragma once

#include <string>
#include <vector>

#include "optosqueeze/params.hpp"
#include "optosqueeze/squeezing.hpp"

namespace osq {

inline constexpr const char* version_string = "0.1.0";

enum class ScenarioKind {
  fig3a_input_sweep,    // input squeezing level (dB)
  fig3b_detuning_sweep, // carrier mismatch delta
  fig3c_bandwidth_sweep,// source bandwidth b_x at fixed input level
  fig3d_temperature_sweep,
  squashing,            // thermal-regime imbalance report
  custom,
};

enum class Method { analytic_rsl, analytic_white, analytic_finite_bw, exact };

enum class AxisSpacing { linear, log };

// Swept variable. Axis values are quoted in config units: dB for
// "input_db", Hz for "delta" / "bandwidth_bx" / "kappa", K for
// "temperature", dimensionless for "eta" (which scales kappa at fixed
// omega_m0 while keeping G^2/kappa fixed).
struct Axis {
  std::string name;
  double from = 0.0;
  double to = 0.0;
  int points = 2;
  AxisSpacing spacing = AxisSpacing::linear;

  std::vector<double> values() const;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::custom;
  SystemParams system;      // resolved base system
  SqueezingSpec squeezing;  // resolved base source
  double input_db = 0.0;    // base input level implied by `squeezing`
  Axis axis;
  std::vector<Method> methods;

  void validate() const;
};

struct MethodResult {
  bool ok = false;
  std::string error;  // diagnostic when !ok; numeric fields are NaN then
  double v_min = 0.0;
  double v_max = 0.0;
  double phi_star = 0.0;
  double squeeze_db = 0.0;
  double occupancy = 0.0;
  double micromotion_pp = 0.0;  // 0 for analytic methods
  bool stable = false;
};

struct SweepRow {
  double axis_value = 0.0;
  // parallel to Scenario::methods
  std::vector<MethodResult> results;
};

struct SweepResult {
  Scenario scenario;
  std::vector<SweepRow> rows;  // sorted by axis value
};

// Evaluates every requested method at every axis point. Per-point numerical
// failures (instability, non-convergence) are recorded in the row and never
// abort the sweep. jobs > 1 evaluates points on a worker pool; the result is
// row-identical to the serial evaluation.
SweepResult run_scenario(const Scenario& scenario, int jobs = 1);

// Evaluates one method at the scenario's base operating point, ignoring the
// sweep axis. Numerical failures are reported in the result, not thrown.
MethodResult evaluate_point(const Scenario& scenario, Method method);

// Sub-thermal variance-imbalance study at a fixed operating point:
// occupancy of the no-squeezing baseline plus the conjugate-variance
// imbalance (V_max - V_min)/V_mean with squeezed input, each from both the
// resolved-sideband analytic formula and the exact solver.
struct SquashingReport {
  double input_db = 0.0;
  double baseline_occupancy_analytic = 0.0;
  double baseline_occupancy_exact = 0.0;
  double imbalance_analytic = 0.0;
  double imbalance_exact = 0.0;
  double baseline_imbalance_exact = 0.0;
  double v_min_exact = 0.0;
  double v_max_exact = 0.0;
  SweepResult detail;  // rows at the baseline and squeezed operating points
};

SquashingReport squashing_report(const SystemParams& params, double input_db,
                                 double b_x);

std::string method_name(Method m);
std::string kind_name(ScenarioKind k);

}  // namespace osq
