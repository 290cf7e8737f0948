#include "optosqueeze/params.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "optosqueeze/analytics.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"

namespace osq {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::invalid_parameter, what);
}

}  // namespace

void SystemParams::validate() const {
  if (!(omega_m0 > 0.0)) bad("omega_m0 must be > 0");
  if (!(mass > 0.0)) bad("mass must be > 0");
  if (!(kappa > 0.0)) bad("kappa must be > 0");
  if (!(temperature >= 0.0)) bad("temperature must be >= 0");
  if (quality_factor.has_value() == gamma_m.has_value())
    bad("exactly one of quality_factor and gamma_m must be set");
  if (quality_factor && !(*quality_factor > 0.0))
    bad("quality_factor must be > 0");
  if (gamma_m && !(*gamma_m > 0.0)) bad("gamma_m must be > 0");
  if (const auto* dc = std::get_if<DriveCoupling>(&drive)) {
    if (!(dc->coupling >= 0.0)) bad("coupling must be >= 0");
  } else {
    const auto& dp = std::get<DrivePower>(drive);
    if (!(dp.power >= 0.0)) bad("power must be >= 0");
    if (!(dp.cavity_length > 0.0)) bad("cavity_length must be > 0");
    if (!(dp.reflectivity >= 0.0 && dp.reflectivity <= 1.0))
      bad("reflectivity must be in [0, 1]");
    if (!omega_c || !(*omega_c > 0.0))
      bad("omega_c must be set and > 0 for a power drive");
  }
  if (detuning_policy.kind == DetuningPolicy::Kind::fixed &&
      !std::isfinite(detuning_policy.value))
    bad("fixed detuning must be finite");
}

double thermal_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) bad("thermal_occupation: omega must be > 0");
  if (!(temperature >= 0.0)) bad("thermal_occupation: temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  double x = hbar * omega / (k_boltzmann * temperature);
  if (x > 700.0) return 0.0;  // exp would overflow; occupation underflows
  return 1.0 / std::expm1(x);
}

std::pair<std::complex<double>, std::complex<double>> steady_state_amplitudes(
    std::complex<double> E, double kappa, double Delta, double g,
    double gamma_m, double omega_m0) {
  if (!(kappa > 0.0)) bad("steady_state_amplitudes: kappa must be > 0");
  // |c_ss| = |E| / |kappa + i Delta|; the laser phase is chosen so that
  // c_ss lands on the positive real axis exactly.
  double cmag = std::abs(E) / std::hypot(kappa, Delta);
  std::complex<double> c_ss(cmag, 0.0);
  std::complex<double> b_ss =
      g / std::complex<double>(omega_m0, -gamma_m) * (cmag * cmag);
  return {c_ss, b_ss};
}

namespace {

// Real roots of z^3 + p2 z^2 + p1 z + p0 via the companion matrix.
int real_cubic_roots(double p2, double p1, double p0, double roots[3]) {
  Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
  comp(0, 2) = -p0;
  comp(1, 2) = -p1;
  comp(2, 2) = -p2;
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  Eigen::EigenSolver<Eigen::Matrix3d> es(comp);
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z))) roots[n++] = z.real();
  }
  return n;
}

}  // namespace

double DerivedParams::single_photon_g() const {
  if (!power_chain)
    throw Error(ErrorCode::invalid_parameter,
                "single-photon coupling not derived: drive was specified as G");
  return g;
}
std::complex<double> DerivedParams::drive_amplitude() const {
  if (!power_chain)
    throw Error(ErrorCode::invalid_parameter,
                "drive amplitude not derived: drive was specified as G");
  return E;
}
std::complex<double> DerivedParams::cavity_amplitude() const {
  if (!power_chain)
    throw Error(ErrorCode::invalid_parameter,
                "cavity amplitude not derived: drive was specified as G");
  return c_ss;
}
std::complex<double> DerivedParams::mech_amplitude() const {
  if (!power_chain)
    throw Error(ErrorCode::invalid_parameter,
                "mechanical amplitude not derived: drive was specified as G");
  return b_ss;
}

DerivedParams derive_params(const SystemParams& params) {
  params.validate();

  DerivedParams d;
  d.omega_m0 = params.omega_m0;
  d.kappa = params.kappa;
  d.squeeze_detuning = params.squeeze_detuning;
  d.gamma_m = params.gamma_m ? *params.gamma_m
                             : params.omega_m0 / (2.0 * *params.quality_factor);
  d.n_th = thermal_occupation(params.omega_m0, params.temperature);
  d.eta = params.kappa / params.omega_m0;
  d.xbar_m = std::sqrt(hbar / (2.0 * params.mass * params.omega_m0));

  const bool sideband =
      params.detuning_policy.kind == DetuningPolicy::Kind::sideband_cooling;

  if (const auto* dc = std::get_if<DriveCoupling>(&params.drive)) {
    d.power_chain = false;
    d.coupling_G = dc->coupling;
    if (sideband) {
      d.detuning =
          cooling_rates(d.coupling_G, d.kappa, d.omega_m0, d.gamma_m).omega_m;
    } else {
      // With G given directly there is no power chain to shift; the policy
      // value is the effective detuning as-is.
      d.detuning = params.detuning_policy.value;
    }
    return d;
  }

  const auto& dp = std::get<DrivePower>(params.drive);
  d.power_chain = true;
  d.g = 2.0 * dp.reflectivity * (d.xbar_m / dp.cavity_length) * *params.omega_c;
  double Emag = std::sqrt(2.0 * dp.power * params.kappa / (hbar * *params.omega_c));
  // Static radiation-pressure shift coefficient: Delta = Delta_0 - s |c_ss|^2.
  double s = 2.0 * d.g * d.g * params.omega_m0 /
             (params.omega_m0 * params.omega_m0 + d.gamma_m * d.gamma_m);

  double Delta = 0.0;
  if (sideband) {
    // The laser is tuned so the *effective* detuning sits on the cooling
    // sideband Delta = omega_m (shifted); only G depends on Delta here.
    Delta = params.omega_m0;
    for (int it = 0; it < 200; ++it) {
      double cmag = Emag / std::hypot(params.kappa, Delta);
      double G = 2.0 * d.g * cmag;
      double next = cooling_rates(G, params.kappa, params.omega_m0, d.gamma_m).omega_m;
      if (std::abs(next - Delta) <= 1e-12 * params.omega_m0) {
        Delta = next;
        break;
      }
      Delta = next;
      if (it == 199)
        throw Error(ErrorCode::no_convergence,
                    "effective detuning iteration did not converge");
    }
  } else {
    // Fixed bare detuning Delta_0: the fixed point solves the cubic
    // (Delta - Delta_0)(kappa^2 + Delta^2) + s |E|^2 = 0. Three real roots
    // mean the static response is multivalued.
    double D0 = params.detuning_policy.value;
    double k2 = params.kappa * params.kappa;
    double roots[3];
    int n = real_cubic_roots(-D0, k2, -D0 * k2 + s * Emag * Emag, roots);
    if (n >= 2) {
      throw Error(ErrorCode::bistability,
                  "bistable steady state: the static cavity response is "
                  "multivalued at this power and bare detuning; reduce power "
                  "or move the detuning outside the bistable window");
    }
    if (n < 1)
      throw Error(ErrorCode::no_convergence,
                  "no real fixed point found for the effective detuning");
    Delta = roots[0];
  }

  d.detuning = Delta;
  // Rotate the laser phase so c_ss is exactly real and nonnegative.
  auto [c_ss, b_ss] = steady_state_amplitudes(
      std::complex<double>(Emag, 0.0), params.kappa, Delta, d.g, d.gamma_m,
      params.omega_m0);
  d.c_ss = c_ss;
  d.b_ss = b_ss;
  d.E = c_ss.real() * std::complex<double>(params.kappa, Delta);
  d.coupling_G = 2.0 * d.g * c_ss.real();
  return d;
}

}  // namespace osq
