#include <benchmark/benchmark.h>

#include <cmath>

#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"
#include "qdelaunay/ode_integrator.hpp"
#include "qdelaunay/q_functionals.hpp"
#include "qdelaunay/stability.hpp"

using namespace qdelaunay;

namespace {

const DimensionParams& params5() {
  static const DimensionParams p = make_params(5);
  return p;
}

const DelaunayOrbit& orbit5() {
  static const DelaunayOrbit o = shoot(params5(), 0.9);
  return o;
}

}  // namespace

static void BM_IntegrateSphere(benchmark::State& state) {
  const auto& p = params5();
  IntegratorOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  for (auto _ : state) {
    auto traj = integrate(p, {0.0, 1.0, 0.0, -0.5, 0.0}, 3.0, opt);
    benchmark::DoNotOptimize(traj.final_state().v);
  }
}
BENCHMARK(BM_IntegrateSphere);

static void BM_Shoot(benchmark::State& state) {
  const auto& p = params5();
  const double a = 1.0 - std::pow(10.0, -double(state.range(0)));
  for (auto _ : state) {
    auto orbit = shoot(p, a);
    benchmark::DoNotOptimize(orbit.t_a);
  }
}
BENCHMARK(BM_Shoot)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_QEnergy(benchmark::State& state) {
  const auto& p = params5();
  const auto u = RadialProfile::from_orbit(orbit5());
  for (auto _ : state) benchmark::DoNotOptimize(q_energy_radial(p, u));
}
BENCHMARK(BM_QEnergy);

static void BM_DiscretizedSpectrum(benchmark::State& state) {
  const auto& p = params5();
  for (auto _ : state) {
    auto rep = discretized_spectrum(p, orbit5(), 1, std::size_t(state.range(0)));
    benchmark::DoNotOptimize(rep.negative_count);
  }
}
BENCHMARK(BM_DiscretizedSpectrum)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
