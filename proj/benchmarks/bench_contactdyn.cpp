#include <benchmark/benchmark.h>

#include <vector>

#include <contactdyn/contact.hpp>
#include <contactdyn/fields.hpp>
#include <contactdyn/integrate.hpp>
#include <contactdyn/langevin.hpp>
#include <contactdyn/systems.hpp>
#include <contactdyn/virial.hpp>

using namespace contactdyn;

static void BM_ContactField(benchmark::State& state) {
  const auto spec = make_system("damped_particles", {{"count", static_cast<double>(state.range(0))}});
  const VectorField f = spec.field(Chart::hamiltonian);
  const std::vector<double> y = spec.initial_vector(Chart::hamiltonian);
  std::vector<double> d(y.size());
  for (auto _ : state) {
    f.eval(0.0, y, d);
    benchmark::DoNotOptimize(d.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ContactField)->Arg(1)->Arg(8)->Arg(64);

static void BM_VirialRate(benchmark::State& state) {
  const auto spec = make_system("parachute");
  const DarbouxPoint x(0.3, {-1.0}, {0.5});
  for (auto _ : state) benchmark::DoNotOptimize(virial_rate(*spec.hamiltonian, x).total);
}
BENCHMARK(BM_VirialRate);

static void BM_Rk4DampedOscillator(benchmark::State& state) {
  const auto spec = make_system("damped_oscillator");
  const VectorField f = spec.field(Chart::hamiltonian);
  const auto x0 = spec.initial_vector(Chart::hamiltonian);
  const double T = 10.0, dt = 1e-3;
  for (auto _ : state) {
    auto traj = integrate_fixed(f, x0, T, dt, {0.0, 1});
    benchmark::DoNotOptimize(traj.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T / dt));
}
BENCHMARK(BM_Rk4DampedOscillator)->Unit(benchmark::kMillisecond);

static void BM_Rk4Herglotz(benchmark::State& state) {
  const auto spec = make_system("parachute");
  const VectorField f = spec.field(Chart::lagrangian);
  const auto x0 = spec.initial_vector(Chart::lagrangian);
  const double T = 10.0, dt = 1e-3;
  for (auto _ : state) {
    auto traj = integrate_fixed(f, x0, T, dt, {0.0, 1});
    benchmark::DoNotOptimize(traj.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T / dt));
}
BENCHMARK(BM_Rk4Herglotz)->Unit(benchmark::kMillisecond);

static void BM_Dopri5GiererMeinhardt(benchmark::State& state) {
  const auto spec = make_system("gierer_meinhardt");
  const VectorField f = spec.field(Chart::hamiltonian);
  const auto x0 = spec.initial_vector(Chart::hamiltonian);
  AdaptiveOptions opts;
  opts.rel_tol = 1e-10;
  opts.abs_tol = 1e-12;
  for (auto _ : state) {
    auto traj = integrate_adaptive(f, x0, 100.0, opts);
    benchmark::DoNotOptimize(traj.size());
  }
}
BENCHMARK(BM_Dopri5GiererMeinhardt)->Unit(benchmark::kMillisecond);

static void BM_EulerMaruyama(benchmark::State& state) {
  const NoiseSpec noise{1.0, 0.5, 1.0, 3};
  const double T = 10.0, dt = 1e-3;
  for (auto _ : state) {
    auto traj = euler_maruyama_langevin(1.0, noise, {0.0, {1.0}, {0.0}}, T, dt);
    benchmark::DoNotOptimize(traj.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T / dt));
}
BENCHMARK(BM_EulerMaruyama)->Unit(benchmark::kMillisecond);

static void BM_TimeAverage(benchmark::State& state) {
  const auto spec = make_system("damped_oscillator");
  const auto traj = integrate_fixed(spec.field(Chart::hamiltonian),
                                    spec.initial_vector(Chart::hamiltonian), 100.0, 1e-3, {0.0, 1});
  const auto& ke = spec.virial(Chart::hamiltonian).terms.front().value;
  for (auto _ : state) benchmark::DoNotOptimize(time_average(traj, ke));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(traj.size()));
}
BENCHMARK(BM_TimeAverage)->Unit(benchmark::kMillisecond);

static void BM_VirialReport(benchmark::State& state) {
  const auto spec = make_system("damped_oscillator");
  auto traj = integrate_fixed(spec.field(Chart::hamiltonian),
                              spec.initial_vector(Chart::hamiltonian), 100.0, 1e-3, {0.0, 1});
  traj.metadata.system = spec.name;
  for (auto _ : state) {
    benchmark::DoNotOptimize(virial_report(spec, traj, Chart::hamiltonian).residual_exact);
  }
}
BENCHMARK(BM_VirialReport)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
