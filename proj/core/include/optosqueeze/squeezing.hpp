#pragma once

#include <complex>
#include <optional>

namespace osq {

struct OpoParams {
  double gamma_o = 0.0;               // OPO cavity damping, rad/s
  std::complex<double> epsilon{0.0};  // pump susceptibility, rad/s
};

// Stationary squeezed-vacuum input field. (N, M) set the degree of
// squeezing, (b_x, b_y) the bandwidths of the two-time correlators:
//
//   <in(t+tau) in(t)>      = (M/2) (b_x b_y/(b_x^2+b_y^2)) (b_y e^{-b_x|tau|} + b_x e^{-b_y|tau|})
//   <in†(t+tau) in(t)>     = (N/2) (b_x b_y/(b_y^2-b_x^2)) (b_y e^{-b_x|tau|} - b_x e^{-b_y|tau|})
//
// Physicality: |M|^2 <= N(N+1), equality for a pure squeezed state.
struct SqueezingSpec {
  double N = 0.0;
  std::complex<double> M{0.0};
  double b_x = 0.0;  // narrow bandwidth, rad/s
  double b_y = 0.0;  // broad bandwidth, rad/s
  std::optional<OpoParams> opo;

  // Throws Error(invalid_parameter) naming the violated constraint:
  // |M|^2 <= N(N+1) (relative slack 1e-9), 0 < b_x <= b_y, and when OPO
  // parameters are present, b_x = gamma_o/2 - |eps| and b_y = gamma_o/2 + |eps|
  // to 1e-9 relative.
  void validate() const;

  bool is_pure(double rel_tol = 1e-9) const;
};

// Below-threshold OPO -> (N, M, b_x, b_y). Pure by construction.
// Throws Error(above_threshold) when |epsilon| >= gamma_o/2.
SqueezingSpec opo_to_nm(double gamma_o, std::complex<double> epsilon);

// Pure squeezed source whose white-noise minimum quadrature variance is
// (1/2) 10^{-db/10}, realized by an OPO with the given narrow bandwidth.
// M comes out real and nonnegative. Round-trips through opo_to_nm to 1e-9.
SqueezingSpec nm_to_opo(double squeeze_db, double b_x);

struct InputCorrelators {
  std::complex<double> mm;  // <in(t+tau) in(t)>
  double nm;                // <in†(t+tau) in(t)>
};

// Two-time correlators at lag tau (even in tau). The b_x = b_y confluent
// point is evaluated by its exact limit inside a relative window of 1e-6.
InputCorrelators input_correlators(const SqueezingSpec& spec, double tau);

// Smooth symmetrized quadrature correlator matrix at lag tau in the (X, P)
// basis, X = (c+c†)/sqrt2, P = (c-c†)/(i sqrt2); the delta(tau)/2 * I vacuum
// part is not included:
//   [[ Re mm + nm, Im mm ], [ Im mm, -Re mm + nm ]]
// The 2x2 matrix is returned in row-major double[4] to keep this header
// free of linear-algebra types.
void input_quadrature_correlators(const SqueezingSpec& spec, double tau,
                                  double out[4]);

// N + 1/2 + Re{M e^{2 i phi}}; minimum over phi is N + 1/2 - |M|.
double input_quadrature_variance_white(const SqueezingSpec& spec, double phi);

// Variance <-> dB relative to the vacuum value 1/2; positive dB = squeezed.
double to_db(double variance);
double from_db(double db);

// Steady-state intracavity photons contributed by the squeezed input of a
// cavity with amplitude decay kappa:
//   N b_x b_y (b_x + b_y + kappa) / ((b_x+b_y)(b_x+kappa)(b_y+kappa))
// (cancellation-free form; always <= N, finite for b_x = b_y and kappa -> 0).
double intracavity_squeezed_photons(const SqueezingSpec& spec, double kappa);

}  // namespace osq
