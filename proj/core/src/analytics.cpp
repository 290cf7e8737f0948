#include "optosqueeze/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

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

double re_M_rot(std::complex<double> M, double phi) {
  return (M * std::exp(std::complex<double>(0.0, 2.0 * phi))).real();
}

// Thermal feed-through factor gamma_m/gamma_eff; 1 when nothing damps.
double thermal_weight(double gamma_m, double gamma_eff) {
  return gamma_eff > 0.0 ? gamma_m / gamma_eff : 1.0;
}

}  // namespace

CoolingRates cooling_rates(double G, double kappa, double omega_m0,
                           double gamma_m) {
  if (!(G >= 0.0)) bad("cooling_rates: G must be >= 0");
  if (!(kappa > 0.0)) bad("cooling_rates: kappa must be > 0");
  if (!(omega_m0 > 0.0)) bad("cooling_rates: omega_m0 must be > 0");
  if (!(gamma_m >= 0.0)) bad("cooling_rates: gamma_m must be >= 0");

  double w = omega_m0;
  double Gamma = 0.0, Omega = 0.0;
  for (int it = 0;; ++it) {
    Gamma = (G * G / (4.0 * kappa)) * 4.0 * w * w / (kappa * kappa + 4.0 * w * w);
    Omega = Gamma * kappa / (2.0 * w);
    double next = omega_m0 - Omega;
    if (!(next > 0.0))
      throw Error(ErrorCode::no_convergence,
                  "optical spring shift reaches the bare mechanical frequency");
    if (std::abs(next - w) <= 1e-9 * omega_m0) {
      w = next;
      break;
    }
    w = next;
    if (it >= 100)
      throw Error(ErrorCode::no_convergence,
                  "shifted-frequency fixed point did not converge");
  }
  // Rates evaluated at the converged shifted frequency.
  Gamma = (G * G / (4.0 * kappa)) * 4.0 * w * w / (kappa * kappa + 4.0 * w * w);
  Omega = Gamma * kappa / (2.0 * w);
  return {Gamma, gamma_m + Gamma, Omega, w};
}

double variance_white_rsl(const SqueezingSpec& spec, double phi,
                          const CoolingRates& rates, double n_th) {
  double gamma_m = rates.gamma_eff - rates.Gamma;
  return spec.N + 0.5 - re_M_rot(spec.M, phi) +
         thermal_weight(gamma_m, rates.gamma_eff) * (n_th + 0.5);
}

double variance_white_general(const SqueezingSpec& spec, double phi, double G,
                              double kappa, const CoolingRates& rates,
                              double gamma_m, double n_th) {
  double w = rates.omega_m;
  double u = kappa * kappa / (kappa * kappa + 4.0 * w * w);
  double pref =
      rates.gamma_eff > 0.0 ? G * G / (4.0 * rates.gamma_eff * kappa) : 0.0;
  return pref * ((spec.N + 0.5) * (1.0 + u) - re_M_rot(spec.M, phi)) +
         thermal_weight(gamma_m, rates.gamma_eff) * (n_th + 0.5);
}

namespace {

// Shared rational factor of the h coefficient.
double h_g(double beta, double gamma_eff, double kappa, double w2_4) {
  double C = gamma_eff / kappa * (kappa * kappa + w2_4);
  return (beta * beta + beta * kappa + C) /
         ((beta + kappa) * (beta * beta + 2.0 * beta * gamma_eff + w2_4));
}

double h_g_prime(double beta, double gamma_eff, double kappa, double w2_4) {
  double C = gamma_eff / kappa * (kappa * kappa + w2_4);
  double p = beta * beta + beta * kappa + C;
  double dp = 2.0 * beta + kappa;
  double q1 = beta + kappa;
  double q2 = beta * beta + 2.0 * beta * gamma_eff + w2_4;
  double q = q1 * q2;
  double dq = q2 + q1 * (2.0 * beta + 2.0 * gamma_eff);
  return (dp * q - p * dq) / (q * q);
}

}  // namespace

BandwidthCoeffs bandwidth_coeffs(double b_x, double b_y, double gamma_eff,
                                 double kappa, double omega_m) {
  if (!(b_x > 0.0) || !(b_y >= b_x)) bad("bandwidth_coeffs: need 0 < b_x <= b_y");
  if (!(gamma_eff >= 0.0) || !(kappa > 0.0) || !(omega_m > 0.0))
    bad("bandwidth_coeffs: rates must be positive");
  double g = gamma_eff;
  BandwidthCoeffs c;
  // f- and f+ in forms with the removable b_x = b_y point cancelled.
  c.f_minus = b_x * b_y * (b_x + b_y + g) / ((b_x + g) * (b_y + g) * (b_x + b_y));
  c.f_plus = b_x * b_y * (b_x * b_x + b_y * b_y + g * (b_x + b_y)) /
             ((b_x * b_x + b_y * b_y) * (b_x + g) * (b_y + g));
  double w2_4 = 4.0 * omega_m * omega_m;
  // h = (b_x b_y/(b_x+b_y)) [g(b_x) - b_x Dg], Dg the divided difference of
  // the rational factor; near-confluent bandwidths use its derivative.
  double gx = h_g(b_x, g, kappa, w2_4);
  double Dg;
  if (b_y - b_x < 1e-6 * (b_x + b_y)) {
    Dg = h_g_prime(0.5 * (b_x + b_y), g, kappa, w2_4);
  } else {
    Dg = (h_g(b_y, g, kappa, w2_4) - gx) / (b_y - b_x);
  }
  c.h = (b_x * b_y / (b_x + b_y)) * (gx - b_x * Dg);
  return c;
}

double variance_finite_bandwidth(const SqueezingSpec& spec, double phi,
                                 double G, double kappa,
                                 const CoolingRates& rates, double gamma_m,
                                 double n_th) {
  double w = rates.omega_m;
  double u = kappa * kappa / (kappa * kappa + 4.0 * w * w);
  auto c = bandwidth_coeffs(spec.b_x, spec.b_y, rates.gamma_eff, kappa, w);
  double pref =
      rates.gamma_eff > 0.0 ? G * G / (4.0 * rates.gamma_eff * kappa) : 0.0;
  return pref * (spec.N * c.f_minus + 0.5 + u * (spec.N * c.h + 0.5) -
                 re_M_rot(spec.M, phi) * c.f_plus) +
         thermal_weight(gamma_m, rates.gamma_eff) * (n_th + 0.5);
}

double effective_impurity(double N, double eta) {
  if (!(N >= 0.0) || !(eta >= 0.0)) bad("effective_impurity: need N, eta >= 0");
  return N * (1.0 + eta / (eta + 4.0)) + eta / (2.0 * (eta + 4.0));
}

bool impurity_is_physical(double N_prime, std::complex<double> M) {
  double rhs = N_prime * (N_prime + 1.0);
  return std::norm(M) <= rhs + 1e-12 * std::max(1.0, rhs);
}

QuadratureStats quadrature_extrema(double a, std::complex<double> M,
                                   double s) {
  if (!(s >= 0.0)) bad("quadrature_extrema: scale s must be >= 0");
  QuadratureStats q;
  double m = std::abs(M);
  q.v_min = a - m * s;
  q.v_max = a + m * s;
  // Minimum of a - Re{M e^{2 i phi}} s sits at the argmax of the cosine,
  // 2 phi + arg M = 0.
  q.phi_star = (m == 0.0 || s == 0.0) ? 0.0 : wrap_half_period(-std::arg(M) / 2.0);
  q.variance_of_phi = [a, M, s](double phi) { return a - re_M_rot(M, phi) * s; };
  q.squeeze_db = to_db(q.v_min);
  q.occupancy = 0.5 * (q.v_min + q.v_max) - 0.5;
  return q;
}

QuadratureStats quadrature_extrema(std::span<const double> phi,
                                   std::span<const double> variance) {
  if (phi.size() != variance.size()) bad("quadrature_extrema: size mismatch");
  if (phi.size() < 8)
    bad("quadrature_extrema: table needs at least 8 samples");
  size_t n = phi.size();

  auto refine = [&](size_t i) {
    // Parabola through the sample and its periodic neighbours (period pi).
    size_t l = (i + n - 1) % n, r = (i + 1) % n;
    double xl = phi[l], xc = phi[i], xr = phi[r];
    if (xl > xc) xl -= pi;
    if (xr < xc) xr += pi;
    double yl = variance[l], yc = variance[i], yr = variance[r];
    double d1 = (yr - yl) / (xr - xl);
    double d2 = ((yr - yc) / (xr - xc) - (yc - yl) / (xc - xl)) / (xr - xl) * 2.0;
    if (d2 == 0.0) return std::pair{xc, yc};
    double x = xc - d1 / d2;
    if (x < std::min(xl, xc) || x > std::max(xr, xc)) return std::pair{xc, yc};
    double y = yc + d1 * (x - xc) + 0.5 * d2 * (x - xc) * (x - xc);
    return std::pair{x, y};
  };

  size_t imin = 0, imax = 0;
  for (size_t i = 1; i < n; ++i) {
    if (variance[i] < variance[imin]) imin = i;
    if (variance[i] > variance[imax]) imax = i;
  }
  auto [pmin, vmin] = refine(imin);
  auto [pmax, vmax] = refine(imax);

  QuadratureStats q;
  q.v_min = vmin;
  q.v_max = vmax;
  q.phi_star = wrap_half_period(pmin);
  std::vector<double> px(phi.begin(), phi.end());
  std::vector<double> py(variance.begin(), variance.end());
  q.variance_of_phi = [px = std::move(px), py = std::move(py)](double p) {
    // Piecewise-linear periodic interpolation.
    size_t n = px.size();
    double x = std::fmod(p - px[0], pi);
    if (x < 0.0) x += pi;
    x += px[0];
    size_t j = 0;
    while (j + 1 < n && px[j + 1] <= x) ++j;
    double x0 = px[j], y0 = py[j];
    double x1 = (j + 1 < n) ? px[j + 1] : px[0] + pi;
    double y1 = (j + 1 < n) ? py[j + 1] : py[0];
    double t = (x1 == x0) ? 0.0 : (x - x0) / (x1 - x0);
    return y0 + t * (y1 - y0);
  };
  q.squeeze_db = to_db(q.v_min);
  q.occupancy = 0.5 * (q.v_min + q.v_max) - 0.5;
  return q;
}

}  // namespace osq
