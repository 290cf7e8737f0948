#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "optosqueeze/analytics.hpp"
#include "optosqueeze/params.hpp"
#include "optosqueeze/squeezing.hpp"

namespace osq {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat2 = Eigen::Matrix2d;

// Linear Gaussian model  dr = A(t) r dt + B dW,  r = (X_a,P_a, X_c,P_c, X_b,P_b)
// (source mode, cavity mode, mechanical mode), with
//   A(t) = A0 + A_cos cos(drive_freq t) + A_sin sin(drive_freq t)
// and white inputs with symmetrized spectral matrix S, so the covariance
// obeys  dSigma/dt = A Sigma + Sigma A^T + D,  D = B S B^T.
//
// Frames: optical modes in the laser rotating frame, mechanics unrotated.
// Only the source's pump block is time-periodic (at twice the source-laser
// detuning); it vanishes when the pump is off.
struct LinearModel {
  static constexpr int dim = 6;
  Mat6 A0 = Mat6::Zero();
  Mat6 A_cos = Mat6::Zero();
  Mat6 A_sin = Mat6::Zero();
  double drive_freq = 0.0;  // rad/s; 0 means time-independent drift
  Eigen::Matrix<double, 6, 4> B = Eigen::Matrix<double, 6, 4>::Zero();
  Eigen::Matrix4d S = Eigen::Matrix4d::Zero();

  Mat6 drift(double t) const;
  Mat6 diffusion() const;  // B S B^T
  bool time_dependent() const;
};

enum class FrameTag { laser, source, interaction };

struct Covariance {
  Mat6 sigma = Mat6::Zero();
  FrameTag frame_tag = FrameTag::laser;
  double time_tag = 0.0;  // phase within the drive period, seconds
};

// Steady state of a periodically driven model: covariance samples over one
// drive period at uniformly spaced phases.
struct PeriodicCovariance {
  std::vector<Covariance> samples;  // time_tag = k*period/samples.size()
  double period = 0.0;              // 0 for time-independent models
};

// Floquet multipliers (eigenvalues of the one-period fundamental matrix).
struct FloquetResult {
  bool stable = false;
  std::vector<std::complex<double>> multipliers;
};

// Cascade OPO -> cavity -> membrane in the laser frame. The source runs at
// detuning -Delta_s relative to the laser (Delta_s = delta - omega_m, with
// omega_m the shifted frequency from `rates`), its pump rotates at
// 2*Delta_s, and its output feeds the cavity input unidirectionally:
// the shared vacuum enters the source rows with weight sqrt(gamma_o) and the
// cavity rows with weight -sqrt(2 kappa) next to the drift term
// +sqrt(2 kappa gamma_o) a, so that an undriven chain holds vacuum exactly.
// Requires spec.opo; throws above_threshold / invalid_parameter otherwise.
LinearModel build_cascade(const DerivedParams& derived,
                          const CoolingRates& rates, const SqueezingSpec& spec,
                          double delta);

// Unique Sigma with A Sigma + Sigma A^T + D = 0 via the 36x36 Kronecker
// system. Residual is verified to 1e-10 * (|A||Sigma| + |D|) (Frobenius).
// Non-Hurwitz A -> Error(unstable_dynamics, "dynamically unstable
// configuration ...").
Covariance lyapunov_steady(const Mat6& A, const Mat6& D);

// Periodic steady state: integrates the fundamental matrix and one forced
// period (adaptive Dormand-Prince 5(4), relative tolerance 1e-9, step capped
// at 1/50 of min{1/kappa-scale rates, drive period/64}), closes the period
// map Sigma = Phi Sigma Phi^T + C_T exactly, then verifies the periodicity
// criterion |Sigma(t+T) - Sigma(t)|_F < tol |Sigma|_F over a further period
// while sampling >= `phase_samples` phases. Time-independent models fall
// back to lyapunov_steady (single sample, period 0). `rate_hint` adds
// characteristic rates (kappa, omega_m0, b_y) to the step cap.
PeriodicCovariance periodic_lyapunov_steady(
    const LinearModel& model, double tol = 1e-6, int phase_samples = 64,
    std::vector<double> rate_hint = {}, int max_periods = 16);

// Spectral radius of the monodromy matrix < 1 - 1e-12. Time-independent
// models are classified by the Hurwitz test with multipliers e^{lambda T}
// over a reference time (drive period if nonzero, else the slowest decay).
FloquetResult floquet_stability(const LinearModel& model);

// Quantum regression: state two-time covariance e^{A tau} Sigma_ss (tau >= 0).
Eigen::MatrixXd two_time_correlator(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& Sigma_ss,
                                    double tau);

// Output-field adapter for a standalone source: smooth part of the
// symmetrized output quadrature correlator at lag tau >= 0 in the source
// frame, gamma_o e^{A tau} (Sigma_ss - I/2); the delta(tau)/2 * I vacuum
// term is not included. Throws above_threshold past threshold.
Mat2 opo_output_correlator(const OpoParams& opo, double tau);

// Symplectic eigenvalues of a 2n x 2n covariance (pairwise singular values
// of Sigma^(1/2) J Sigma^(1/2)); physical states have all >= 1/2.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& sigma);

// Mechanical quadrature statistics: rotates the mechanical 2x2 block of each
// phase sample into the interaction frame at omega_m (using the sample's
// absolute time), averages over the period, and reports extrema over the
// quadrature angle (eigenvalues of the averaged block) together with the
// micromotion diagnostic: peak-to-peak of the per-phase V_min over its mean.
struct MechStats {
  QuadratureStats stats;
  double micromotion_pp = 0.0;
};
MechStats mech_quadrature_stats(const PeriodicCovariance& cov, double omega_m);

}  // namespace osq
