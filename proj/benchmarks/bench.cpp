#include <benchmark/benchmark.h>

#include <complex>

#include "optosqueeze/analytics.hpp"
#include "optosqueeze/constants.hpp"
#include "optosqueeze/dynamics.hpp"
#include "optosqueeze/params.hpp"
#include "optosqueeze/squeezing.hpp"
#include "optosqueeze/sweep.hpp"

namespace {

using namespace osq;

SystemParams cold_platform() {
  SystemParams sys;
  sys.omega_m0 = hz_to_rad(1e6);
  sys.mass = 1e-12;
  sys.quality_factor = 1e7;
  sys.kappa = hz_to_rad(380e3);
  sys.temperature = 0.1;
  sys.drive = DriveCoupling{hz_to_rad(110e3)};
  return sys;
}

struct Prepared {
  DerivedParams d;
  CoolingRates rates;
};

Prepared prepare() {
  DerivedParams d = derive_params(cold_platform());
  CoolingRates rates =
      cooling_rates(d.coupling_G, d.kappa, d.omega_m0, d.gamma_m);
  return {d, rates};
}

void bench_cooling_rates(benchmark::State& state) {
  Prepared p = prepare();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cooling_rates(p.d.coupling_G, p.d.kappa, p.d.omega_m0, p.d.gamma_m));
  }
}
BENCHMARK(bench_cooling_rates);

void bench_finite_bandwidth_variance(benchmark::State& state) {
  Prepared p = prepare();
  SqueezingSpec spec = nm_to_opo(6.0, hz_to_rad(20e6));
  double phi = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(variance_finite_bandwidth(
        spec, phi, p.d.coupling_G, p.d.kappa, p.rates, p.d.gamma_m,
        p.d.n_th));
    phi += 1e-3;
  }
}
BENCHMARK(bench_finite_bandwidth_variance);

void bench_output_correlator(benchmark::State& state) {
  SqueezingSpec spec = nm_to_opo(6.0, hz_to_rad(20e6));
  double tau = 0.0;
  const double dtau = 0.1 / spec.b_x;
  for (auto _ : state) {
    benchmark::DoNotOptimize(opo_output_correlator(*spec.opo, tau));
    tau += dtau;
    if (tau > 10.0 / spec.b_x) tau = 0.0;
  }
}
BENCHMARK(bench_output_correlator);

void bench_static_lyapunov(benchmark::State& state) {
  Prepared p = prepare();
  SqueezingSpec spec = opo_to_nm(hz_to_rad(40e6), 0.0);
  LinearModel model = build_cascade(p.d, p.rates, spec, 0.0);
  auto D = model.diffusion();
  for (auto _ : state) {
    benchmark::DoNotOptimize(lyapunov_steady(model.A0, D));
  }
}
BENCHMARK(bench_static_lyapunov);

void bench_periodic_steady_state(benchmark::State& state) {
  Prepared p = prepare();
  SqueezingSpec spec = nm_to_opo(6.0, hz_to_rad(20e6));
  LinearModel model = build_cascade(p.d, p.rates, spec, 0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(periodic_lyapunov_steady(
        model, 1e-6, 64, {p.d.kappa, p.d.omega_m0, spec.b_y}));
  }
}
BENCHMARK(bench_periodic_steady_state)->Unit(benchmark::kMillisecond);

void bench_exact_point(benchmark::State& state) {
  Scenario sc;
  sc.system = cold_platform();
  sc.squeezing = nm_to_opo(6.0, hz_to_rad(20e6));
  sc.input_db = 6.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_point(sc, Method::exact));
  }
}
BENCHMARK(bench_exact_point)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
