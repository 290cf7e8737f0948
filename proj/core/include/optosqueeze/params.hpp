#pragma once

#include <complex>
#include <optional>
#include <variant>

namespace osq {

// Drive specified directly as the effective linearized coupling G.
struct DriveCoupling {
  double coupling;  // G, rad/s
};

// Drive specified by the laser power chain; the single-photon coupling is
// derived from the cavity geometry and membrane reflectivity.
struct DrivePower {
  double power;          // W
  double cavity_length;  // m
  double reflectivity;   // in [0, 1]
};

struct DetuningPolicy {
  enum class Kind { sideband_cooling, fixed };
  Kind kind = Kind::sideband_cooling;
  double value = 0.0;  // rad/s, used when kind == fixed
  static DetuningPolicy sideband() { return {}; }
  static DetuningPolicy fixed_at(double delta) {
    return {Kind::fixed, delta};
  }
};

struct SystemParams {
  std::optional<double> omega_c;  // optical frequency, rad/s; needed for power drive
  double omega_m0 = 0.0;          // bare mechanical frequency, rad/s
  double mass = 0.0;              // effective mass, kg
  std::optional<double> quality_factor;  // mutually exclusive with gamma_m
  std::optional<double> gamma_m;         // mechanical amplitude decay, rad/s
  double kappa = 0.0;        // cavity amplitude decay, rad/s
  double temperature = 0.0;  // bath temperature, K
  std::variant<DriveCoupling, DrivePower> drive = DriveCoupling{0.0};
  DetuningPolicy detuning_policy;
  double squeeze_detuning = 0.0;  // delta = Delta_s + omega_m, rad/s

  void validate() const;  // throws Error(invalid_parameter) naming the field
};

// Everything derivable from SystemParams before any squeezing enters.
// When the drive is given as G directly there is no power chain, so the
// amplitude-level fields (xbar_m aside) stay unset and power_chain is false;
// accessors for them throw rather than guess.
struct DerivedParams {
  double xbar_m = 0.0;    // zero-point motion, m
  double gamma_m = 0.0;   // resolved mechanical amplitude decay, rad/s
  double n_th = 0.0;      // thermal occupancy of the bath
  double eta = 0.0;       // sideband parameter kappa / omega_m0
  double coupling_G = 0.0;  // effective coupling G, rad/s
  double detuning = 0.0;    // effective detuning Delta, rad/s
  double kappa = 0.0;       // carried through for model building, rad/s
  double omega_m0 = 0.0;    // carried through, rad/s
  double squeeze_detuning = 0.0;  // carried through, rad/s

  bool power_chain = false;  // whether the fields below were derived
  double g = 0.0;            // single-photon coupling, rad/s
  std::complex<double> E{0.0, 0.0};     // drive amplitude, rad/s-equivalent
  std::complex<double> c_ss{0.0, 0.0};  // steady-state cavity amplitude
  std::complex<double> b_ss{0.0, 0.0};  // steady-state mechanical amplitude

  // Throw Error(invalid_parameter) when power_chain is false.
  double single_photon_g() const;
  std::complex<double> drive_amplitude() const;
  std::complex<double> cavity_amplitude() const;
  std::complex<double> mech_amplitude() const;
};

// Bose factor 1/(exp(hbar*omega/kT) - 1); exact, not the high-T limit.
// T = 0 returns 0.
double thermal_occupation(double omega, double temperature);

// c_ss = E/(kappa + i Delta) with the laser phase chosen so that c_ss is
// real and nonnegative exactly; b_ss = g/(omega_m0 - i gamma_m) * |c_ss|^2.
std::pair<std::complex<double>, std::complex<double>> steady_state_amplitudes(
    std::complex<double> E, double kappa, double Delta, double g,
    double gamma_m, double omega_m0);

// Populates DerivedParams. For a power drive the effective detuning is made
// self-consistent with the static radiation-pressure shift
// 2 g^2 omega_m0 / (omega_m0^2 + gamma_m^2) * |c_ss|^2 by iteration; a
// multivalued response (bistability) is reported as an error rather than
// picking a branch.
DerivedParams derive_params(const SystemParams& params);

}  // namespace osq
