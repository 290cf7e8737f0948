#include "optosqueeze/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <unsupported/Eigen/MatrixFunctions>
#include <utility>
#include <vector>

#include "optosqueeze/constants.hpp"
#include "optosqueeze/errors.hpp"

namespace osq {

Mat6 LinearModel::drift(double t) const {
  return A0 + std::cos(drive_freq * t) * A_cos + std::sin(drive_freq * t) * A_sin;
}

Mat6 LinearModel::diffusion() const { return B * S * B.transpose(); }

bool LinearModel::time_dependent() const { return drive_freq != 0.0; }

namespace {

using Eigen::VectorXd;

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

using Rhs = std::function<void(double, const VectorXd&, VectorXd&)>;

// Dormand-Prince 5(4) with FSAL and the standard step controller. Integrates
// y over [t0, t1] in place, hitting t1 exactly.
void integrate_dopri5(const Rhs& rhs, double t0, double t1, VectorXd& y,
                      double rtol, double max_step) {
  if (t1 == t0) return;
  if (!(t1 > t0)) bad("integration interval must run forward");
  if (!(max_step > 0.0)) bad("step cap must be positive");

  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                      a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                      a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695,
                      e4 = b4 - 393.0 / 640, e5 = b5 + 92097.0 / 339200,
                      e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

  const Eigen::Index n = y.size();
  VectorXd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);
  const double atol = 1e-12 * (1.0 + y.cwiseAbs().maxCoeff());

  double t = t0;
  double h = std::min(max_step, t1 - t0);
  rhs(t, y, k1);
  bool rejected = false;
  long steps = 0;
  while (t < t1) {
    if (++steps > 20'000'000)
      throw Error(ErrorCode::no_convergence,
                  "time integration exceeded the step budget");
    h = std::min(h, t1 - t);
    if (t + h == t)
      throw Error(ErrorCode::no_convergence,
                  "time integration step size underflowed");

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);

    double err2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                      e6 * k6[i] + e7 * k7[i]);
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err2 += (e / sc) * (e / sc);
    }
    double err = std::sqrt(err2 / double(n));

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      double fac = 0.9 * std::pow(std::max(err, 1e-30), -0.2);
      fac = std::min(fac, rejected ? 1.0 : 5.0);
      h = std::min(h * std::max(fac, 0.2), max_step);
      rejected = false;
    } else {
      h *= std::max(0.9 * std::pow(err, -0.2), 0.2);
      rejected = true;
    }
  }
}

// Lower-triangle packing of a symmetric 6x6 into 21 doubles, column by column.
constexpr int kSym = 21;

void pack_sym(const Mat6& s, double* p) {
  int idx = 0;
  for (int j = 0; j < 6; ++j)
    for (int i = j; i < 6; ++i) p[idx++] = s(i, j);
}

Mat6 unpack_sym(const double* p) {
  Mat6 s;
  int idx = 0;
  for (int j = 0; j < 6; ++j)
    for (int i = j; i < 6; ++i) {
      s(i, j) = p[idx];
      s(j, i) = p[idx];
      ++idx;
    }
  return s;
}

double step_cap(const LinearModel& model, double period,
                const std::vector<double>& rate_hint) {
  double fastest = 0.0;
  for (double r : rate_hint)
    if (r > 0.0) fastest = std::max(fastest, r);
  if (fastest == 0.0)
    fastest = model.A0.norm() + model.A_cos.norm() + model.A_sin.norm();
  double cap = period / 64.0;
  if (fastest > 0.0) cap = std::min(cap, 1.0 / fastest);
  return cap / 50.0;
}

double spectral_radius(const Mat6& m) {
  Eigen::EigenSolver<Mat6> es(m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Unique solution of A Sigma + Sigma A^T + D = 0 for Hurwitz A, any size.
Eigen::MatrixXd lyapunov_dense(const Eigen::MatrixXd& A,
                               const Eigen::MatrixXd& D) {
  const int n = int(A.rows());
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  if (!(es.eigenvalues().real().maxCoeff() < 0.0))
    throw Error(ErrorCode::unstable_dynamics,
                "dynamically unstable configuration: the drift matrix has a "
                "non-decaying mode");

  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n * n, n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        K(i + n * j, k + n * j) += A(i, k);  // vec(A Sigma)
        K(i + n * j, i + n * k) += A(j, k);  // vec(Sigma A^T)
      }
  Eigen::VectorXd rhs(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) rhs(i + n * j) = -D(i, j);
  Eigen::VectorXd x = K.partialPivLu().solve(rhs);

  Eigen::MatrixXd sig(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) sig(i, j) = x(i + n * j);
  Eigen::MatrixXd sig_t = sig.transpose();
  sig = 0.5 * (sig + sig_t);

  double resid = (A * sig + sig * A.transpose() + D).norm();
  if (!(resid <= 1e-10 * (A.norm() * sig.norm() + D.norm())))
    throw Error(ErrorCode::no_convergence,
                "steady covariance solve lost precision");
  return sig;
}

}  // namespace

LinearModel build_cascade(const DerivedParams& derived,
                          const CoolingRates& rates, const SqueezingSpec& spec,
                          double delta) {
  spec.validate();
  if (!spec.opo)
    bad("cascade needs an explicit source model (bandwidth and pump)");
  const OpoParams& o = *spec.opo;
  if (!(o.gamma_o > 0.0)) bad("source linewidth must be positive");
  if (std::abs(o.epsilon) >= 0.5 * o.gamma_o)
    throw Error(ErrorCode::above_threshold,
                "source pump at or above threshold");

  const double kappa = derived.kappa;
  const double G = derived.coupling_G;
  const double gm = derived.gamma_m;
  const double w0 = derived.omega_m0;
  const double Delta = derived.detuning;
  const double Ds = delta - rates.omega_m;

  LinearModel m;
  m.A0.block<2, 2>(0, 0) << -0.5 * o.gamma_o, -Ds, Ds, -0.5 * o.gamma_o;
  m.A0.block<2, 2>(2, 2) << -kappa, Delta, -Delta, -kappa;
  m.A0.block<2, 2>(4, 4) << -gm, w0, -w0, -gm;
  double cas = std::sqrt(2.0 * kappa * o.gamma_o);
  m.A0(2, 0) = cas;
  m.A0(3, 1) = cas;
  m.A0(3, 4) += G;
  m.A0(5, 2) += G;

  // Pump block, static in the source frame, rotates at twice the
  // source-laser detuning here.
  Mat2 pc, ps;
  pc << o.epsilon.real(), o.epsilon.imag(), o.epsilon.imag(),
      -o.epsilon.real();
  ps << -o.epsilon.imag(), o.epsilon.real(), o.epsilon.real(),
      o.epsilon.imag();
  if (o.epsilon == 0.0) {
    m.drive_freq = 0.0;
  } else if (Ds == 0.0) {
    m.A0.block<2, 2>(0, 0) += pc;
    m.drive_freq = 0.0;
  } else {
    m.A_cos.block<2, 2>(0, 0) = pc;
    m.A_sin.block<2, 2>(0, 0) = ps;
    m.drive_freq = 2.0 * Ds;
  }

  m.B.block<2, 2>(0, 0) = std::sqrt(o.gamma_o) * Mat2::Identity();
  m.B.block<2, 2>(2, 0) = -std::sqrt(2.0 * kappa) * Mat2::Identity();
  m.B.block<2, 2>(4, 2) = std::sqrt(2.0 * gm) * Mat2::Identity();
  m.S.diagonal() << 0.5, 0.5, derived.n_th + 0.5, derived.n_th + 0.5;
  return m;
}

Covariance lyapunov_steady(const Mat6& A, const Mat6& D) {
  Covariance c;
  c.sigma = lyapunov_dense(A, D);
  c.frame_tag = FrameTag::laser;
  c.time_tag = 0.0;
  return c;
}

PeriodicCovariance periodic_lyapunov_steady(const LinearModel& model,
                                            double tol, int phase_samples,
                                            std::vector<double> rate_hint,
                                            int max_periods) {
  if (!(tol > 0.0)) bad("periodicity tolerance must be positive");
  if (phase_samples < 1) bad("need at least one phase sample");
  if (max_periods < 1) bad("need at least one period");

  if (!model.time_dependent()) {
    PeriodicCovariance out;
    out.samples.push_back(lyapunov_steady(model.drift(0.0), model.diffusion()));
    out.period = 0.0;
    return out;
  }

  const double T = two_pi / std::abs(model.drive_freq);
  const double cap = step_cap(model, T, rate_hint);
  const Mat6 D = model.diffusion();
  const double rtol = 1e-9;

  auto rhs_joint = [&](double t, const VectorXd& y, VectorXd& dy) {
    Eigen::Map<const Mat6> phi(y.data());
    Mat6 sig = unpack_sym(y.data() + 36);
    Mat6 A = model.drift(t);
    Eigen::Map<Mat6> dphi(dy.data());
    dphi = A * phi;
    Mat6 ds = A * sig + sig * A.transpose() + D;
    pack_sym(ds, dy.data() + 36);
  };
  auto rhs_sigma = [&](double t, const VectorXd& y, VectorXd& dy) {
    Mat6 sig = unpack_sym(y.data());
    Mat6 A = model.drift(t);
    Mat6 ds = A * sig + sig * A.transpose() + D;
    pack_sym(ds, dy.data());
  };

  // One period of the fundamental matrix and a forced trajectory together.
  Mat6 sigma0 = Mat6::Identity() * 0.5;
  sigma0(4, 4) = model.S(2, 2);
  sigma0(5, 5) = model.S(3, 3);
  VectorXd y(36 + kSym);
  Eigen::Map<Mat6>(y.data()) = Mat6::Identity();
  pack_sym(sigma0, y.data() + 36);
  integrate_dopri5(rhs_joint, 0.0, T, y, rtol, cap);
  Mat6 phi_T = Eigen::Map<const Mat6>(y.data());
  Mat6 sigma_T = unpack_sym(y.data() + 36);

  if (!(spectral_radius(phi_T) < 1.0 - 1e-12))
    throw Error(ErrorCode::unstable_dynamics,
                "dynamically unstable configuration: a Floquet multiplier "
                "reaches the unit circle");

  // Close the period map Sigma = Phi Sigma Phi^T + C exactly.
  Mat6 C = sigma_T - phi_T * sigma0 * phi_T.transpose();
  Eigen::Matrix<double, 36, 36> K;
  for (int p = 0; p < 6; ++p)
    for (int r = 0; r < 6; ++r)
      for (int q = 0; q < 6; ++q)
        for (int s = 0; s < 6; ++s)
          K(6 * p + q, 6 * r + s) = -phi_T(p, r) * phi_T(q, s);
  K += Eigen::Matrix<double, 36, 36>::Identity();
  Eigen::Matrix<double, 36, 1> rhs;
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i) rhs(i + 6 * j) = C(i, j);
  Eigen::Matrix<double, 36, 1> x = K.partialPivLu().solve(rhs);
  Mat6 star;
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i) star(i, j) = x(i + 6 * j);
  star = 0.5 * (star + Mat6(star.transpose()));

  // Verify periodicity over a further period while sampling the phases.
  const int ns = phase_samples;
  for (int period = 0; period < max_periods; ++period) {
    std::vector<Covariance> samples;
    samples.reserve(size_t(ns));
    VectorXd z(kSym);
    pack_sym(star, z.data());
    for (int k = 0; k < ns; ++k) {
      samples.push_back({unpack_sym(z.data()), FrameTag::laser, T * k / ns});
      integrate_dopri5(rhs_sigma, T * k / ns, T * (k + 1) / ns, z, rtol, cap);
    }
    Mat6 send = unpack_sym(z.data());
    if ((send - star).norm() <= tol * star.norm()) {
      PeriodicCovariance out;
      out.samples = std::move(samples);
      out.period = T;
      return out;
    }
    star = 0.5 * (send + Mat6(send.transpose()));
  }
  throw Error(ErrorCode::no_convergence,
              "periodic steady state did not settle within the period budget");
}

FloquetResult floquet_stability(const LinearModel& model) {
  FloquetResult out;
  if (!model.time_dependent()) {
    Eigen::EigenSolver<Mat6> es(model.drift(0.0), true);
    auto lam = es.eigenvalues();
    double max_re = lam.real().maxCoeff();
    double t_ref = max_re != 0.0 ? 1.0 / std::abs(max_re) : 1.0;
    out.multipliers.reserve(6);
    for (int i = 0; i < 6; ++i)
      out.multipliers.push_back(std::exp(lam[i] * t_ref));
  } else {
    const double T = two_pi / std::abs(model.drive_freq);
    const double cap = step_cap(model, T, {});
    auto rhs = [&](double t, const VectorXd& y, VectorXd& dy) {
      Eigen::Map<const Mat6> phi(y.data());
      Eigen::Map<Mat6> dphi(dy.data());
      dphi = model.drift(t) * phi;
    };
    VectorXd y(36);
    Eigen::Map<Mat6>(y.data()) = Mat6::Identity();
    integrate_dopri5(rhs, 0.0, T, y, 1e-9, cap);
    Mat6 phi_T = Eigen::Map<const Mat6>(y.data());
    Eigen::EigenSolver<Mat6> es(phi_T, true);
    out.multipliers.assign(es.eigenvalues().data(),
                           es.eigenvalues().data() + 6);
  }
  double rho = 0.0;
  for (auto m : out.multipliers) rho = std::max(rho, std::abs(m));
  out.stable = rho < 1.0 - 1e-12;
  return out;
}

Eigen::MatrixXd two_time_correlator(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& Sigma_ss,
                                    double tau) {
  if (A.rows() != A.cols() || A.rows() != Sigma_ss.rows() ||
      Sigma_ss.rows() != Sigma_ss.cols())
    bad("two_time_correlator: square matrices of one size required");
  if (!(tau >= 0.0)) bad("two_time_correlator: lag must be >= 0");
  return (A * tau).exp() * Sigma_ss;
}

Mat2 opo_output_correlator(const OpoParams& opo, double tau) {
  if (!(opo.gamma_o > 0.0)) bad("source linewidth must be positive");
  if (std::abs(opo.epsilon) >= 0.5 * opo.gamma_o)
    throw Error(ErrorCode::above_threshold,
                "source pump at or above threshold");
  if (!(tau >= 0.0)) bad("opo_output_correlator: lag must be >= 0");
  Mat2 A;
  A << -0.5 * opo.gamma_o + opo.epsilon.real(), opo.epsilon.imag(),
      opo.epsilon.imag(), -0.5 * opo.gamma_o - opo.epsilon.real();
  Mat2 D = 0.5 * opo.gamma_o * Mat2::Identity();
  Eigen::MatrixXd sig = lyapunov_dense(A, D);
  Mat2 expA = (A * tau).exp();
  return opo.gamma_o * (expA * (sig - 0.5 * Eigen::MatrixXd::Identity(2, 2)));
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
  const int n = int(sigma.rows());
  if (sigma.cols() != n || n % 2 != 0)
    bad("symplectic_eigenvalues: even-dimensional square matrix required");
  Eigen::MatrixXd s = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  if (es.eigenvalues().minCoeff() < -1e-9 * scale)
    bad("symplectic_eigenvalues: covariance must be positive semidefinite");
  Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd root = es.eigenvectors() * lam.cwiseSqrt().asDiagonal() *
                         es.eigenvectors().transpose();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; k += 2) {
    J(k, k + 1) = 1.0;
    J(k + 1, k) = -1.0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(root * J * root);
  const auto& sv = svd.singularValues();
  std::vector<double> nu;
  nu.reserve(size_t(n / 2));
  for (int i = 0; i + 1 < n; i += 2) nu.push_back(0.5 * (sv[i] + sv[i + 1]));
  return nu;
}

MechStats mech_quadrature_stats(const PeriodicCovariance& cov,
                                double omega_m) {
  if (cov.samples.empty()) bad("mech_quadrature_stats: no phase samples");

  Mat2 avg = Mat2::Zero();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double acc = 0.0;
  for (const auto& sample : cov.samples) {
    Mat2 blk = sample.sigma.block<2, 2>(4, 4);
    double th = sample.frame_tag == FrameTag::interaction
                    ? 0.0
                    : omega_m * sample.time_tag;
    Mat2 rot;
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    avg += rot * blk * rot.transpose();

    // The per-phase floor is rotation invariant, so the raw block serves.
    double mean = 0.5 * (blk(0, 0) + blk(1, 1));
    double rho = std::hypot(0.5 * (blk(0, 0) - blk(1, 1)),
                            0.5 * (blk(0, 1) + blk(1, 0)));
    double vmin = mean - rho;
    lo = std::min(lo, vmin);
    hi = std::max(hi, vmin);
    acc += vmin;
  }
  const double count = double(cov.samples.size());
  avg /= count;

  double mean = 0.5 * (avg(0, 0) + avg(1, 1));
  double c = 0.5 * (avg(0, 0) - avg(1, 1));
  double s = 0.5 * (avg(0, 1) + avg(1, 0));
  double rho = std::hypot(c, s);

  MechStats out;
  out.stats.v_min = mean - rho;
  out.stats.v_max = mean + rho;
  out.stats.phi_star = rho == 0.0 ? 0.0 : wrap_half_period(std::atan2(s, -c) / 2.0);
  out.stats.variance_of_phi = [mean, c, s](double phi) {
    return mean + c * std::cos(2.0 * phi) - s * std::sin(2.0 * phi);
  };
  out.stats.squeeze_db = out.stats.v_min > 0.0
                             ? to_db(out.stats.v_min)
                             : std::numeric_limits<double>::infinity();
  out.stats.occupancy = mean - 0.5;
  out.micromotion_pp =
      cov.samples.size() > 1 && acc > 0.0 ? (hi - lo) / (acc / count) : 0.0;
  return out;
}

}  // namespace osq
