#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <unsupported/Eigen/MatrixFunctions>

#include "optosqueeze/constants.hpp"
#include "optosqueeze/dynamics.hpp"
#include "optosqueeze/params.hpp"

// Shared fixtures for the test suites: the two operating points most of the
// pinned values below were computed at, plus small numeric utilities.

namespace tst {

// Cold membrane-in-the-middle point: omega_m0 = 2pi 1 MHz, kappa = 2pi 380 kHz
// (eta = 0.38), G = 2pi 110 kHz, Q = 1e7, T = 0.1 K.
inline osq::SystemParams cold_point() {
  osq::SystemParams p;
  p.omega_m0 = osq::hz_to_rad(1e6);
  p.mass = 1e-12;
  p.quality_factor = 1e7;
  p.kappa = osq::hz_to_rad(380e3);
  p.temperature = 0.1;
  p.drive = osq::DriveCoupling{osq::hz_to_rad(110e3)};
  return p;
}

// Thermal squashing point: heavier membrane, gamma_m = 2pi 0.1 Hz, T = 4 K,
// kappa = 2pi 125 kHz, G = 2pi 21 kHz.
inline osq::SystemParams squash_point() {
  osq::SystemParams p;
  p.omega_m0 = osq::hz_to_rad(1e6);
  p.mass = 1e-11;
  p.gamma_m = osq::hz_to_rad(0.1);
  p.kappa = osq::hz_to_rad(125e3);
  p.temperature = 4.0;
  p.drive = osq::DriveCoupling{osq::hz_to_rad(21e3)};
  return p;
}

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

inline double urand(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

namespace detail {

template <class F>
double simpson_rec1(const F& f, double a, double fa, double m, double fm,
                    double b, double fb, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double s1 = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double s2 = (b - a) / 12.0 * (fa + 4.0 * flm + 2.0 * fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(s2 - s1) <= 15.0 * tol) {
    return s2 + (s2 - s1) / 15.0;
  }
  return simpson_rec1(f, a, fa, lm, flm, m, fm, 0.5 * tol, depth - 1) +
         simpson_rec1(f, m, fm, rm, frm, b, fb, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with a Richardson tail; tol is absolute, so rescale
// dimensionful integrands to order one before calling.
template <class F>
double integrate(const F& f, double a, double b, double tol) {
  double m = 0.5 * (a + b);
  return detail::simpson_rec1(f, a, f(a), m, f(m), b, f(b), tol, 24);
}

// Random Hurwitz drift: shift a random matrix left until its spectral
// abscissa sits at -margin.
inline Eigen::MatrixXd random_stable_drift(std::mt19937& rng, int n,
                                           double margin = 0.4) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = urand(rng, -1.0, 1.0);
  double max_re = a.eigenvalues().real().maxCoeff();
  a -= (max_re + margin) * Eigen::MatrixXd::Identity(n, n);
  return a;
}

inline Eigen::MatrixXd random_spd(std::mt19937& rng, int n) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) l(i, j) = urand(rng, -0.6, 0.6);
    l(i, i) = urand(rng, 0.4, 1.4);
  }
  return l * l.transpose();
}

namespace detail {

inline Eigen::MatrixXd gram_integrand(const Eigen::MatrixXd& a,
                                      const Eigen::MatrixXd& d, double t) {
  Eigen::MatrixXd e = (a * t).exp();
  return e * d * e.transpose();
}

inline Eigen::MatrixXd simpson_rec(const Eigen::MatrixXd& a,
                                   const Eigen::MatrixXd& d, double lo,
                                   double hi, const Eigen::MatrixXd& flo,
                                   const Eigen::MatrixXd& fmid,
                                   const Eigen::MatrixXd& fhi, double tol,
                                   int depth) {
  double mid = 0.5 * (lo + hi);
  Eigen::MatrixXd fl = gram_integrand(a, d, 0.5 * (lo + mid));
  Eigen::MatrixXd fr = gram_integrand(a, d, 0.5 * (mid + hi));
  Eigen::MatrixXd whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  Eigen::MatrixXd left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
  Eigen::MatrixXd right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
  Eigen::MatrixXd sum = left + right;
  if (depth <= 0 || (sum - whole).norm() < 15.0 * tol) {
    return sum + (sum - whole) / 15.0;
  }
  return simpson_rec(a, d, lo, mid, flo, fl, fmid, 0.5 * tol, depth - 1) +
         simpson_rec(a, d, mid, hi, fmid, fr, fhi, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Direct quadrature of the controllability Gramian
// int_0^T exp(At) D exp(A^T t) dt, which converges to the steady covariance
// of dr = A r dt + noise with diffusion D when A is Hurwitz and T covers many
// decay times.
inline Eigen::MatrixXd gramian_quadrature(const Eigen::MatrixXd& a,
                                          const Eigen::MatrixXd& d, double t_max,
                                          double tol) {
  int pieces = 32;
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  double step = t_max / pieces;
  for (int k = 0; k < pieces; ++k) {
    double lo = k * step;
    double hi = lo + step;
    double mid = 0.5 * (lo + hi);
    Eigen::MatrixXd flo = detail::gram_integrand(a, d, lo);
    Eigen::MatrixXd fmid = detail::gram_integrand(a, d, mid);
    Eigen::MatrixXd fhi = detail::gram_integrand(a, d, hi);
    total += detail::simpson_rec(a, d, lo, hi, flo, fmid, fhi,
                                 tol / pieces, 18);
  }
  return total;
}

}  // namespace tst
