#pragma once

#include <complex>
#include <functional>
#include <span>

#include "optosqueeze/squeezing.hpp"

namespace osq {

// Sideband-cooling rates at the self-consistent shifted mechanical
// frequency omega_m = omega_m0 - Omega.
struct CoolingRates {
  double Gamma = 0.0;      // optical damping, rad/s
  double gamma_eff = 0.0;  // gamma_m + Gamma, rad/s
  double Omega = 0.0;      // optical spring shift, rad/s
  double omega_m = 0.0;    // shifted mechanical frequency, rad/s
};

// Gamma = (G^2/4k) 4 w_m^2/(k^2+4 w_m^2) and Omega = Gamma k/(2 w_m),
// evaluated at the fixed point w_m = w_m0 - Omega(w_m) (relative tolerance
// 1e-9, at most 100 iterations; failure to converge is an error).
CoolingRates cooling_rates(double G, double kappa, double omega_m0,
                           double gamma_m);

struct QuadratureStats {
  std::function<double(double)> variance_of_phi;
  double v_min = 0.0;
  double v_max = 0.0;
  double phi_star = 0.0;  // angle of the minimum, in [0, pi)
  double squeeze_db = 0.0;
  double occupancy = 0.0;  // (v_min + v_max)/2 - 1/2
};

// Resolved-sideband, white-noise mechanical quadrature variance:
//   (N + 1/2 - Re{M e^{2 i phi}}) + (gamma_m/gamma_eff)(n_th + 1/2)
// Only N and M of the spec are read.
double variance_white_rsl(const SqueezingSpec& spec, double phi,
                          const CoolingRates& rates, double n_th);

// White-noise variance beyond the resolved-sideband limit:
//   (G^2/4 geff k) [ (N+1/2)(1 + k^2/(k^2+4 w_m^2)) - Re{M e^{2 i phi}} ]
//     + (gamma_m/gamma_eff)(n_th + 1/2)
double variance_white_general(const SqueezingSpec& spec, double phi, double G,
                              double kappa, const CoolingRates& rates,
                              double gamma_m, double n_th);

// Bandwidth dependence of the finite-bandwidth variance. All three lie in
// (0, 1] and tend to 1 as b_x, b_y -> infinity.
struct BandwidthCoeffs {
  double f_minus = 1.0;
  double f_plus = 1.0;
  double h = 1.0;
};

// Evaluated in cancellation-free form; the confluent b_x = b_y point uses a
// divided difference with an analytic-derivative midpoint inside a relative
// window of 1e-6.
BandwidthCoeffs bandwidth_coeffs(double b_x, double b_y, double gamma_eff,
                                 double kappa, double omega_m);

// Full finite-bandwidth variance:
//   (G^2/4 geff k) [ N f- + 1/2 + (k^2/(k^2+4 w_m^2))(N h + 1/2)
//                    - Re{M e^{2 i phi}} f+ ] + (gamma_m/gamma_eff)(n_th+1/2)
double variance_finite_bandwidth(const SqueezingSpec& spec, double phi,
                                 double G, double kappa,
                                 const CoolingRates& rates, double gamma_m,
                                 double n_th);

// Impurity acquired by the transferred state at finite sideband parameter:
//   N' = N [1 + eta/(eta+4)] + eta/(2 [eta+4]),  M unchanged.
double effective_impurity(double N, double eta);

// |M|^2 <= N'(N'+1) (true = physical, strict inequality = mixed).
bool impurity_is_physical(double N_prime, std::complex<double> M);

// Extrema of V(phi) = a - Re{M e^{2 i phi}} s (s >= 0): the minimum sits at
// the argmax of Re{M e^{2 i phi}}, phi* = -arg(M)/2 mod pi, with
// V_min = a - |M| s and V_max = a + |M| s.
QuadratureStats quadrature_extrema(double a, std::complex<double> M, double s);

// Extrema of a sampled V(phi) table over one pi-period: dense scan plus
// parabolic refinement. Requires at least 8 samples.
QuadratureStats quadrature_extrema(std::span<const double> phi,
                                   std::span<const double> variance);

}  // namespace osq
