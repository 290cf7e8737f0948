#include "optosqueeze/squeezing.hpp"

#include <cmath>
#include <string>

#include "optosqueeze/errors.hpp"

namespace osq {

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::invalid_parameter, what);
}

double sinhc(double x) { return x == 0.0 ? 1.0 : std::sinh(x) / x; }

}  // namespace

void SqueezingSpec::validate() const {
  if (!(N >= 0.0)) bad("squeezing N must be >= 0");
  if (!(b_x > 0.0)) bad("squeezing bandwidth b_x must be > 0");
  if (!(b_y >= b_x)) bad("squeezing bandwidths must satisfy b_y >= b_x");
  double lhs = std::norm(M);
  double rhs = N * (N + 1.0);
  if (lhs > rhs + 1e-9 * std::max(1.0, rhs))
    bad("unphysical squeezing: |M|^2 exceeds N(N+1)");
  if (opo) {
    if (!(opo->gamma_o > 0.0)) bad("gamma_o must be > 0");
    double bx = opo->gamma_o / 2.0 - std::abs(opo->epsilon);
    double by = opo->gamma_o / 2.0 + std::abs(opo->epsilon);
    double tol = 1e-9 * opo->gamma_o;
    if (std::abs(bx - b_x) > tol || std::abs(by - b_y) > tol)
      bad("squeezing bandwidths inconsistent with the attached OPO parameters");
  }
}

bool SqueezingSpec::is_pure(double rel_tol) const {
  double rhs = N * (N + 1.0);
  return std::abs(std::norm(M) - rhs) <= rel_tol * std::max(1.0, rhs);
}

SqueezingSpec opo_to_nm(double gamma_o, std::complex<double> epsilon) {
  if (!(gamma_o > 0.0)) bad("gamma_o must be > 0");
  double eps = std::abs(epsilon);
  if (!(eps < gamma_o / 2.0))
    throw Error(ErrorCode::above_threshold,
                "OPO at/above threshold: |epsilon| >= gamma_o/2");
  SqueezingSpec s;
  s.b_x = gamma_o / 2.0 - eps;
  s.b_y = gamma_o / 2.0 + eps;
  double ix = 1.0 / (s.b_x * s.b_x);
  double iy = 1.0 / (s.b_y * s.b_y);
  s.M = epsilon * (gamma_o / 2.0) * (ix + iy);
  s.N = eps * (gamma_o / 2.0) * (ix - iy);
  s.opo = OpoParams{gamma_o, epsilon};
  return s;
}

SqueezingSpec nm_to_opo(double squeeze_db, double b_x) {
  if (!(squeeze_db >= 0.0)) bad("squeeze_db must be >= 0");
  if (!(b_x > 0.0)) bad("b_x must be > 0");
  // Pure state with N + 1/2 - |M| = v and (N+1/2)^2 - |M|^2 = 1/4.
  double v = from_db(squeeze_db);
  double N = 0.5 * (v + 0.25 / v) - 0.5;
  double Mabs = 0.5 * (0.25 / v - v);
  SqueezingSpec s;
  s.N = N;
  s.M = Mabs;
  s.b_x = b_x;
  s.b_y = b_x * std::sqrt(2.0 * (N + Mabs) + 1.0);
  s.opo = OpoParams{s.b_x + s.b_y, (s.b_y - s.b_x) / 2.0};
  return s;
}

InputCorrelators input_correlators(const SqueezingSpec& spec, double tau) {
  double at = std::abs(tau);
  double bx = spec.b_x, by = spec.b_y;
  double bbar = 0.5 * (bx + by);
  double d = 0.5 * (by - bx);
  // MM part: no confluent point, b_x^2 + b_y^2 > 0 always.
  std::complex<double> mm =
      spec.M * (0.5 * bx * by / (bx * bx + by * by)) *
      (by * std::exp(-bx * at) + bx * std::exp(-by * at));
  // NM part rewritten so the (b_y - b_x) -> 0 limit is exact:
  //   (N/4) b_x b_y e^{-bbar|t|} [ |t| sinhc(d|t|) + cosh(d|t|)/bbar ]
  double nm = 0.25 * spec.N * bx * by * std::exp(-bbar * at) *
              (at * sinhc(d * at) + std::cosh(d * at) / bbar);
  return {mm, nm};
}

void input_quadrature_correlators(const SqueezingSpec& spec, double tau,
                                  double out[4]) {
  auto [mm, nm] = input_correlators(spec, tau);
  out[0] = mm.real() + nm;
  out[1] = mm.imag();
  out[2] = mm.imag();
  out[3] = -mm.real() + nm;
}

double input_quadrature_variance_white(const SqueezingSpec& spec, double phi) {
  return spec.N + 0.5 +
         (spec.M * std::exp(std::complex<double>(0.0, 2.0 * phi))).real();
}

double to_db(double variance) {
  if (!(variance > 0.0)) bad("variance must be > 0 for dB conversion");
  return -10.0 * std::log10(2.0 * variance) + 0.0;  // +0.0 kills signed zero
}

double from_db(double db) { return 0.5 * std::pow(10.0, -db / 10.0); }

double intracavity_squeezed_photons(const SqueezingSpec& spec, double kappa) {
  if (!(kappa > 0.0)) bad("kappa must be > 0");
  spec.validate();
  double bx = spec.b_x, by = spec.b_y;
  // Equal to N (b_x b_y/(b_y^2-b_x^2)) [b_y/(b_x+k) - b_x/(b_y+k)] with the
  // removable b_x = b_y singularity cancelled out.
  return spec.N * bx * by * (bx + by + kappa) /
         ((bx + by) * (bx + kappa) * (by + kappa));
}

}  // namespace osq
