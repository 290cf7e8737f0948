#include <cmath>
#include <complex>

#include "doctest.h"
#include "helpers.hpp"
#include "optosqueeze/analytics.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/params.hpp"

using namespace osq;
using doctest::Approx;
using tst::cold_point;

TEST_CASE("thermal occupation: pinned Bose factors at 1 MHz") {
  double w = hz_to_rad(1e6);
  CHECK(thermal_occupation(w, 0.1) == Approx(2083.1619536).epsilon(1e-9));
  CHECK(thermal_occupation(w, 1.0) == Approx(20836.1191401).epsilon(1e-9));
  CHECK(thermal_occupation(w, 4.0) == Approx(83345.9765454).epsilon(1e-9));
}

TEST_CASE("thermal occupation: limits and monotonicity") {
  double w = hz_to_rad(1e6);
  CHECK(thermal_occupation(w, 0.0) == 0.0);
  // hbar*omega/kT > 700: occupation underflows to 0 instead of overflowing.
  CHECK(thermal_occupation(hz_to_rad(1e12), 1e-4) == 0.0);

  double prev = -1.0;
  for (double T = 1e-3; T <= 10.0; T *= 1.9) {
    double n = thermal_occupation(w, T);
    CHECK(n > prev);
    prev = n;
  }

  // Rayleigh-Jeans limit: within 0.1% of kT/(hbar w) - 1/2 once x <= 1e-2.
  for (double x : {1e-2, 1e-3}) {
    double T = hbar * w / (k_boltzmann * x);
    double exact = thermal_occupation(w, T);
    double approx = 1.0 / x - 0.5;
    CHECK(tst::rel_diff(exact, approx) < 1e-3);
  }

  CHECK_THROWS_AS(thermal_occupation(w, -0.1), Error);
  CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), Error);
}

TEST_CASE("derived params: zero-point spread, damping, occupancy, eta") {
  DerivedParams d = derive_params(cold_point());
  CHECK(d.xbar_m == Approx(2.89689762954e-15).epsilon(1e-10));
  CHECK(d.gamma_m == Approx(hz_to_rad(1e6) / 2e7).epsilon(1e-12));
  CHECK(d.n_th == Approx(2083.1619536).epsilon(1e-9));
  CHECK(d.eta == Approx(0.38).epsilon(1e-12));
  CHECK(d.coupling_G == Approx(hz_to_rad(110e3)).epsilon(1e-12));
  CHECK_FALSE(d.power_chain);
  CHECK_THROWS_AS(d.single_photon_g(), Error);
  CHECK_THROWS_AS(d.drive_amplitude(), Error);
  CHECK_THROWS_AS(d.cavity_amplitude(), Error);
  CHECK_THROWS_AS(d.mech_amplitude(), Error);

  SystemParams heavy = cold_point();
  heavy.mass = 1e-11;
  CHECK(derive_params(heavy).xbar_m == Approx(9.1607946577e-16).epsilon(1e-10));
}

TEST_CASE("derived params: explicit gamma_m excludes quality factor") {
  SystemParams p = cold_point();
  p.quality_factor.reset();
  p.gamma_m = hz_to_rad(0.1);
  DerivedParams d = derive_params(p);
  CHECK(d.gamma_m == Approx(hz_to_rad(0.1)).epsilon(1e-12));

  p.quality_factor = 1e7;  // both set
  CHECK_THROWS_WITH_AS(derive_params(p),
                       "exactly one of quality_factor and gamma_m must be set",
                       Error);
  p.quality_factor.reset();
  p.gamma_m.reset();  // neither
  CHECK_THROWS_AS(derive_params(p), Error);
}

TEST_CASE("derived params: detuning policy with a direct coupling") {
  // Sideband policy settles on the shifted mechanical frequency.
  DerivedParams d = derive_params(cold_point());
  CHECK(d.detuning == Approx(6274000.61606).epsilon(1e-8));
  CoolingRates r = cooling_rates(d.coupling_G, d.kappa, d.omega_m0, d.gamma_m);
  CHECK(d.detuning == Approx(r.omega_m).epsilon(1e-10));

  SystemParams p = cold_point();
  p.detuning_policy = DetuningPolicy::fixed_at(1.25 * p.omega_m0);
  CHECK(derive_params(p).detuning == Approx(1.25 * p.omega_m0).epsilon(1e-15));
}

TEST_CASE("steady-state amplitudes: phase convention and magnitudes") {
  using cd = std::complex<double>;
  // Laser phase is absorbed so the cavity amplitude is real and nonnegative.
  auto [c, b] = steady_state_amplitudes(cd(3.0, 4.0), 2.0, 2.0, 0.0, 0.1, 1.0);
  CHECK(c.imag() == 0.0);
  CHECK(c.real() == Approx(5.0 / std::hypot(2.0, 2.0)).epsilon(1e-14));
  CHECK(b == cd(0.0, 0.0));

  auto [c2, b2] = steady_state_amplitudes(cd(0.0, 0.0), 2.0, 1.0, 0.5, 0.1, 1.0);
  CHECK(c2 == cd(0.0, 0.0));
  CHECK(b2 == cd(0.0, 0.0));

  // b_ss = g/(omega_m0 - i gamma_m) |c_ss|^2.
  auto [c3, b3] = steady_state_amplitudes(cd(2.0, 0.0), 1.0, 0.0, 0.3, 0.2, 1.5);
  cd expect = 0.3 / cd(1.5, -0.2) * std::norm(c3);
  CHECK(b3.real() == Approx(expect.real()).epsilon(1e-14));
  CHECK(b3.imag() == Approx(expect.imag()).epsilon(1e-14));

  CHECK_THROWS_AS(steady_state_amplitudes(cd(1.0, 0.0), 0.0, 1.0, 0.1, 0.1, 1.0),
                  Error);
}

namespace {

SystemParams power_point(double watts, DetuningPolicy pol) {
  SystemParams p;
  p.omega_c = hz_to_rad(2.8e14);
  p.omega_m0 = hz_to_rad(1e6);
  p.mass = 1e-12;
  p.quality_factor = 1e7;
  p.kappa = hz_to_rad(380e3);
  p.temperature = 0.1;
  p.drive = DrivePower{watts, 1e-3, 0.3};
  p.detuning_policy = pol;
  return p;
}

}  // namespace

TEST_CASE("power chain: derived coupling at a fixed target detuning") {
  SystemParams p =
      power_point(1e-9, DetuningPolicy::fixed_at(hz_to_rad(1e6)));
  DerivedParams d = derive_params(p);
  CHECK(d.power_chain);
  CHECK(d.single_photon_g() == Approx(3057.89309655).epsilon(1e-9));
  CHECK(std::abs(d.drive_amplitude()) == Approx(160431520.682).epsilon(1e-9));
  // The static radiation-pressure shift pushes the effective detuning below
  // the requested one.
  CHECK(d.detuning == Approx(6281488.85553).epsilon(1e-8));
  CHECK(d.detuning < hz_to_rad(1e6));
  CHECK(d.cavity_amplitude().imag() == 0.0);
  CHECK(d.cavity_amplitude().real() == Approx(23.8739005666).epsilon(1e-8));
  CHECK(d.coupling_G == Approx(146007.671461).epsilon(1e-8));
  CHECK(d.mech_amplitude().real() == Approx(0.277388972312).epsilon(1e-8));
  CHECK(d.mech_amplitude().imag() == Approx(1.38694486156e-8).epsilon(1e-6));

  // Drive amplitude consistency: E = c_ss (kappa + i Delta).
  std::complex<double> back =
      d.cavity_amplitude() * std::complex<double>(d.kappa, d.detuning);
  CHECK(std::abs(back) == Approx(std::abs(d.drive_amplitude())).epsilon(1e-12));
}

TEST_CASE("power chain: sideband policy tracks the shifted frequency") {
  DerivedParams d = derive_params(power_point(1e-9, DetuningPolicy::sideband()));
  CHECK(d.detuning == Approx(6282776.09305).epsilon(1e-8));
  CHECK(d.coupling_G == Approx(145981.532267).epsilon(1e-8));
  // Self-consistency: the detuning equals the shifted frequency computed
  // from the derived coupling.
  CoolingRates r = cooling_rates(d.coupling_G, d.kappa, d.omega_m0, d.gamma_m);
  CHECK(d.detuning == Approx(r.omega_m).epsilon(1e-9));
}

TEST_CASE("power chain: multivalued static response is rejected") {
  SystemParams p =
      power_point(2e-6, DetuningPolicy::fixed_at(hz_to_rad(2.28e6)));
  try {
    derive_params(p);
    FAIL("expected bistability error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::bistability);
  }
  // Same target detuning at low power is single-valued again.
  p.drive = DrivePower{1e-12, 1e-3, 0.3};
  CHECK_NOTHROW(derive_params(p));
}

TEST_CASE("parameter validation names the offending field") {
  SystemParams p = cold_point();
  p.omega_m0 = 0.0;
  CHECK_THROWS_WITH_AS(derive_params(p), "omega_m0 must be > 0", Error);

  p = cold_point();
  p.mass = -1.0;
  CHECK_THROWS_WITH_AS(derive_params(p), "mass must be > 0", Error);

  p = cold_point();
  p.temperature = -0.5;
  CHECK_THROWS_WITH_AS(derive_params(p), "temperature must be >= 0", Error);

  p = cold_point();
  p.drive = DrivePower{1e-9, 1e-3, 1.5};
  p.omega_c = hz_to_rad(2.8e14);
  CHECK_THROWS_WITH_AS(derive_params(p), "reflectivity must be in [0, 1]",
                       Error);

  p = cold_point();
  p.drive = DrivePower{1e-9, 1e-3, 0.3};
  p.omega_c.reset();
  CHECK_THROWS_WITH_AS(derive_params(p),
                       "omega_c must be set and > 0 for a power drive", Error);

  p = cold_point();
  p.drive = DriveCoupling{-1.0};
  CHECK_THROWS_WITH_AS(derive_params(p), "coupling must be >= 0", Error);
}

TEST_CASE("rate scaling: cooling rates are homogeneous of degree one") {
  double G = hz_to_rad(110e3), k = hz_to_rad(380e3), w0 = hz_to_rad(1e6);
  double gm = w0 / 2e7;
  CoolingRates a = cooling_rates(G, k, w0, gm);
  for (double lam : {10.0, 0.25}) {
    CoolingRates b = cooling_rates(lam * G, lam * k, lam * w0, lam * gm);
    CHECK(b.Gamma == Approx(lam * a.Gamma).epsilon(1e-8));
    CHECK(b.Omega == Approx(lam * a.Omega).epsilon(1e-8));
    CHECK(b.gamma_eff == Approx(lam * a.gamma_eff).epsilon(1e-8));
    CHECK(b.omega_m == Approx(lam * a.omega_m).epsilon(1e-8));
  }
  // eta and n_th are the dimensionless outputs: eta is invariant under the
  // same rescaling by construction.
  SystemParams p = cold_point();
  double eta0 = derive_params(p).eta;
  p.omega_m0 *= 3.0;
  p.kappa *= 3.0;
  CHECK(derive_params(p).eta == Approx(eta0).epsilon(1e-14));
}
