#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <contactdyn/fields.hpp>
#include <contactdyn/run.hpp>
#include <contactdyn/virial.hpp>

#include "test_models.hpp"

using namespace contactdyn;
using testing_models::close_rel;

namespace {

Trajectory rk4(const SystemSpec& spec, Chart chart, double horizon, double dt = 1e-3) {
  RunOptions o;
  o.horizon = horizon;
  o.dt = dt;
  o.sample_every = 1;
  return run(spec, chart, o);
}

// Synthetic one-component trajectory x(t) on a uniform grid.
Trajectory synthetic(const std::function<double(double)>& x, double T, std::size_t n) {
  Trajectory traj({"x"});
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(n);
    const double v[1] = {x(t)};
    traj.append(t, v);
  }
  return traj;
}

const SampleFunction first = [](const Sample& s) { return s.x[0]; };

}  // namespace

TEST(VirialRate, DampedOscillatorExample) {
  const auto spec = make_system("damped_oscillator");
  const auto r = virial_rate(*spec.hamiltonian, {0.0, {1.0}, {2.0}});
  EXPECT_NEAR(r.pb, 3.0, 1e-15);
  EXPECT_NEAR(r.reeb_term, 0.2, 1e-15);
  EXPECT_NEAR(r.total, 2.8, 1e-15);
}

TEST(VirialRate, AgreesWithFieldDerivative) {
  std::mt19937_64 rng(31);
  for (const auto& spec : testing_models::hamiltonian_systems()) {
    const auto& h = *spec.hamiltonian;
    const auto g = virial_observable(h.n);
    for (int k = 0; k < 200; ++k) {
      const auto x = testing_models::jitter(spec.initial_state, rng, 0.15);
      const double direct = apply_field_to_observable(h, g, x);
      // Independent route: X_h(G) = sum_i dq_i p_i + q_i dp_i from the field.
      const auto v = contact_vector_field(h, x);
      double via_field = 0.0;
      for (std::size_t i = 0; i < h.n; ++i) via_field += v.dq[i] * x.p[i] + x.q[i] * v.dp[i];
      const auto r = virial_rate(h, x);
      EXPECT_TRUE(close_rel(r.total, via_field, 1e-12, 1.0)) << spec.name;
      EXPECT_TRUE(close_rel(r.total, direct, 1e-12, 1.0)) << spec.name;
    }
  }
}

TEST(VirialObservable, LagrangianForm) {
  const auto g = virial_observable(std::vector<double>{2.0, 3.0});
  const LagrangianPoint z({1.0, -2.0}, {0.5, 4.0}, 0.0);
  EXPECT_DOUBLE_EQ(g.value(z), 2.0 * 0.5 * 1.0 + 3.0 * 4.0 * -2.0);
  EXPECT_THROW(virial_observable(std::vector<double>{}), DimensionError);
  EXPECT_THROW(virial_observable(std::vector<double>{-1.0}), ParameterError);
  EXPECT_THROW(virial_observable(std::size_t{0}), DimensionError);
}

TEST(BoundaryTerm, LinearSignalAndWindow) {
  const auto traj = synthetic([](double t) { return 3.0 * t * t; }, 10.0, 100);
  EXPECT_NEAR(boundary_term(traj, first), 30.0, 1e-12);
  EXPECT_NEAR(boundary_term(traj, first, 5.0), (300.0 - 75.0) / 5.0, 1e-12);
  EXPECT_THROW(boundary_term(traj, first, 10.0), IntegrationError);
}

TEST(Boundedness, LinearGrowthAndOscillation) {
  const auto grow = synthetic([](double t) { return -2.0 * t + std::sin(t); }, 200.0, 20000);
  const auto b = assess_boundedness(grow, first, 0.0, 1e-6);
  EXPECT_EQ(b.verdict, Verdict::growing);
  EXPECT_NEAR(b.growth_rate, 2.0, 0.05);

  const auto osc = synthetic([](double t) { return std::sin(t) * (1.0 + std::exp(-t)); }, 200.0,
                             20000);
  const auto c = assess_boundedness(osc, first, 0.0, 1e-6);
  EXPECT_EQ(c.verdict, Verdict::bounded);
  double brute = 0.0;
  for (std::size_t i = 0; i < osc.size(); ++i) brute = std::max(brute, std::abs(osc.state(i)[0]));
  EXPECT_EQ(c.max_abs, brute);
  EXPECT_EQ(to_string(Verdict::growing), "growing");
}

TEST(VirialReport, HarmonicIdentityAndPointwiseDecomposition) {
  const auto spec = make_system("harmonic_oscillator");
  const auto traj = rk4(spec, Chart::hamiltonian, 100.0);
  const auto r = virial_report(spec, traj, Chart::hamiltonian);
  EXPECT_LT(std::abs(r.residual_exact), 1e-8);
  // Terms and rate are averaged with the same rule, so the theorem
  // residual is the scaled rate average up to rounding.
  EXPECT_NEAR(r.theorem_residual, r.rate_scale * r.rate_average, 1e-12);
  EXPECT_EQ(r.boundedness.verdict, Verdict::bounded);
  EXPECT_NEAR(r.term("kinetic") + r.term("potential"), 0.5, 1e-8);
  EXPECT_EQ(r.samples, traj.size());
  EXPECT_EQ(r.t_end, 100.0);
  EXPECT_THROW(r.term("friction"), ParameterError);
}

TEST(VirialReport, DampedOscillatorAnalyticAverages) {
  // Averages over [0, T] of the exact solution, from the closed form of
  // the energy integral: <E> = (1 - e^{-gamma T}) / (2 gamma T) to O(gamma/T).
  const auto spec = make_system("damped_oscillator");
  const auto traj = rk4(spec, Chart::hamiltonian, 200.0);
  const auto r = virial_report(spec, traj, Chart::hamiltonian);
  const double gamma = 0.1, T = 200.0;
  const double mean_energy = (1.0 - std::exp(-gamma * T)) / (gamma * T) * 0.5;
  EXPECT_NEAR(r.term("kinetic") + r.term("potential"), mean_energy, 1e-3);
  EXPECT_LT(std::abs(r.residual_exact), 1e-8);
  EXPECT_NEAR(r.theorem_residual, r.rate_scale * r.boundary, 1e-8);
}

TEST(VirialReport, WindowStartsAtTBegin) {
  const auto spec = make_system("damped_oscillator");
  const auto traj = rk4(spec, Chart::hamiltonian, 20.0, 1e-2);
  ReportOptions o;
  o.t_begin = 10.0;
  const auto r = virial_report(spec, traj, Chart::hamiltonian, o);
  EXPECT_NEAR(r.t_begin, 10.0, 1e-12);
  EXPECT_EQ(r.samples, 1001u);
  const auto& g = spec.virial(Chart::hamiltonian).virial;
  EXPECT_NEAR(r.boundary, boundary_term(traj, g, 10.0), 1e-15);
}

TEST(VirialReport, ParachuteLagrangianGrows) {
  const auto spec = make_system("parachute");
  const auto traj = rk4(spec, Chart::lagrangian, 200.0);
  const auto r = virial_report(spec, traj, Chart::lagrangian);
  EXPECT_EQ(r.boundedness.verdict, Verdict::growing);
  // G = m q qdot with qdot -> -sqrt(g/lambda) and q ~ qdot t.
  EXPECT_NEAR(r.boundedness.growth_rate, 20.0, 0.2);
  EXPECT_LT(std::abs(r.residual_exact), 1e-8);
}

TEST(VirialReport, RejectsMismatchedInput) {
  const auto spec = make_system("damped_oscillator");
  const auto traj = rk4(spec, Chart::hamiltonian, 1.0);
  EXPECT_THROW(virial_report(make_system("harmonic_oscillator"), traj, Chart::hamiltonian),
               ParameterError);
  EXPECT_THROW(virial_report(spec, traj, Chart::lagrangian), DimensionError);
  EXPECT_THROW(virial_report(spec, traj, Chart::extended), ParameterError);
  ReportOptions late;
  late.t_begin = 1.0;
  EXPECT_THROW(virial_report(spec, traj, Chart::hamiltonian, late), IntegrationError);
  auto aborted = traj;
  aborted.abort("test");
  EXPECT_THROW(virial_report(spec, aborted, Chart::hamiltonian), IntegrationError);
}

TEST(VirialReport, PlanarAndContactChartsAgree) {
  const auto spec = make_system("gierer_meinhardt");
  const auto a = rk4(spec, Chart::hamiltonian, 50.0);
  const auto b = rk4(spec, Chart::planar, 50.0);
  const auto ra = virial_report(spec, a, Chart::hamiltonian);
  const auto rb = virial_report(spec, b, Chart::planar);
  for (const char* t : {"saturation", "a_x2", "b_xy"}) {
    EXPECT_NEAR(ra.term(t), rb.term(t), 1e-12) << t;
  }
}

TEST(Ensemble, IndependentOfThreadCount) {
  const auto spec = make_system("brownian_oscillator");
  EnsembleOptions o;
  o.n_traj = 12;
  o.horizon = 5.0;
  o.dt = 1e-2;
  o.seed = 99;
  o.threads = 1;
  const auto one = ensemble_report(spec, o);
  o.threads = 4;
  const auto four = ensemble_report(spec, o);
  ASSERT_EQ(one.terms.size(), four.terms.size());
  for (std::size_t k = 0; k < one.terms.size(); ++k) {
    EXPECT_EQ(one.terms[k].mean, four.terms[k].mean);
    EXPECT_EQ(one.terms[k].standard_error, four.terms[k].standard_error);
  }
  EXPECT_EQ(one.noise_virial.mean, four.noise_virial.mean);
  EXPECT_EQ(one.n_aborted, 0u);
  EXPECT_EQ(one.equipartition, 0.5);
}

TEST(Ensemble, MembersMatchSingleRuns) {
  const auto spec = make_system("brownian_oscillator");
  EnsembleOptions o;
  o.n_traj = 3;
  o.horizon = 2.0;
  o.dt = 1e-2;
  o.seed = 5;
  const auto e = ensemble_report(spec, o);
  RunningStats kinetic, noise;
  for (std::uint64_t i = 0; i < 3; ++i) {
    RunOptions ro;
    ro.integrator = Integrator::euler_maruyama;
    ro.horizon = 2.0;
    ro.dt = 1e-2;
    ro.sample_every = 1;
    ro.seed = 5 ^ i;
    const auto r = virial_report(spec, run(spec, Chart::extended, ro), Chart::extended);
    kinetic.add(r.term("kinetic"));
    noise.add(2.0 * r.term("friction_noise"));
  }
  EXPECT_DOUBLE_EQ(e.term("kinetic").mean, kinetic.mean());
  EXPECT_DOUBLE_EQ(e.term("kinetic").standard_error, kinetic.standard_error());
  EXPECT_DOUBLE_EQ(e.noise_virial.mean, noise.mean());
}

TEST(Ensemble, ZeroTemperatureHasNoSpread) {
  const auto spec = make_system("brownian_oscillator", {{"kT", 0.0}});
  EnsembleOptions o;
  o.n_traj = 4;
  o.horizon = 3.0;
  o.dt = 1e-2;
  const auto e = ensemble_report(spec, o);
  EXPECT_EQ(e.term("kinetic").standard_error, 0.0);
  EXPECT_GT(e.term("kinetic").mean, 0.0);
}

TEST(Ensemble, RejectsDeterministicSystemsAndTinyEnsembles) {
  EnsembleOptions o;
  o.n_traj = 4;
  o.horizon = 1.0;
  EXPECT_THROW(ensemble_report(make_system("damped_oscillator"), o), ParameterError);
  o.n_traj = 1;
  EXPECT_THROW(ensemble_report(make_system("brownian_oscillator"), o), ParameterError);
  o.n_traj = 4;
  o.dt = 0.5;
  EXPECT_THROW(ensemble_report(make_system("brownian_oscillator"), o), IntegrationError);
}
