#pragma once

// Virial harness: term-decomposed time averages, the exact finite-horizon
// identity <X(G)> = (G(T) - G(t0))/(T - t0), a boundedness diagnostic for G,
// and ensemble statistics for the stochastic system.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "contactdyn/contact.hpp"
#include "contactdyn/herglotz.hpp"
#include "contactdyn/integrate.hpp"
#include "contactdyn/systems.hpp"

namespace contactdyn {

// G = sum_i q^i p_i in the Darboux chart.
ObservableModel virial_observable(std::size_t n);
// G = sum_i m_i qdot^i q^i in the Lagrangian chart.
LagrangianObservable virial_observable(const std::vector<double>& masses);

struct VirialRate {
  double pb = 0.0;         // {G, h}_PB
  double reeb_term = 0.0;  // G xi(h)
  double total = 0.0;      // pb - reeb_term = X_h(G)
};

VirialRate virial_rate(const HamiltonianModel& h, const DarbouxPoint& x);

// (G(last) - G(first)) / (t_last - t_first) over samples with t >= t_begin.
double boundary_term(const Trajectory& traj, const SampleFunction& G,
                     double t_begin = -std::numeric_limits<double>::infinity());

enum class Verdict { bounded, growing };
std::string to_string(Verdict verdict);

struct Boundedness {
  Verdict verdict = Verdict::bounded;
  double growth_rate = 0.0;  // least-squares slope of running max |G|
  double max_abs = 0.0;      // max |G| over the window
};

// Fits the running maximum of |G| over the trailing half of the window;
// "growing" when the slope exceeds `threshold`.
Boundedness assess_boundedness(const Trajectory& traj, const SampleFunction& G, double t_begin,
                               double threshold);

struct TermAverage {
  std::string name;
  double sign = 1.0;
  double average = 0.0;
};

struct ReportOptions {
  double t_begin = 0.0;
  // Identity tolerance; the boundedness threshold is 100x this.
  double residual_tolerance = 1e-8;
};

struct VirialReport {
  std::string system;
  Chart chart = Chart::hamiltonian;
  std::string relation;
  TrajectoryMetadata metadata;
  double t_begin = 0.0;
  double t_end = 0.0;
  std::size_t samples = 0;

  std::vector<TermAverage> terms;
  double rate_scale = 0.5;
  double rate_average = 0.0;     // <X(G)>
  double boundary = 0.0;         // (G(T) - G(t_begin)) / (T - t_begin)
  double residual_exact = 0.0;   // <X(G)> - boundary
  double theorem_residual = 0.0; // sum_k sign_k <term_k>
  Boundedness boundedness;
  double residual_tolerance = 1e-8;
  bool stochastic = false;

  double term(std::string_view name) const;
};

// Throws on aborted trajectories and on state layouts that do not match the chart.
VirialReport virial_report(const SystemSpec& system, const Trajectory& traj, Chart chart,
                           const ReportOptions& opts = {});

struct EnsembleOptions {
  std::size_t n_traj = 1000;
  double horizon = 100.0;
  double dt = 1e-3;
  std::uint64_t seed = 0;
  double t_begin = 0.0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct EnsembleStat {
  std::string name;
  double mean = 0.0;
  double standard_error = 0.0;
};

struct EnsembleReport {
  std::string system;
  std::string relation;
  TrajectoryMetadata metadata;
  std::size_t n_traj = 0;
  std::size_t n_aborted = 0;
  double horizon = 0.0;
  double dt = 0.0;
  double t_begin = 0.0;
  double equipartition = 0.0;  // kT/2

  std::vector<EnsembleStat> terms;  // ensemble means of the per-trajectory time averages
  EnsembleStat theorem_residual;    // sum_k sign_k <term_k>
  EnsembleStat kinetic_minus_potential;
  EnsembleStat noise_virial;        // <q(-gamma p + eta)>
  EnsembleStat identity_residual;   // <X(G)> - boundary, zero in expectation

  const EnsembleStat& term(std::string_view name) const;
};

// Euler-Maruyama ensemble with per-trajectory seeds seed ^ index. Results
// do not depend on the thread count. Throws when every trajectory aborts.
EnsembleReport ensemble_report(const SystemSpec& system, const EnsembleOptions& opts);

}  // namespace contactdyn
