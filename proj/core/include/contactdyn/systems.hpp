#pragma once

// Catalog of dissipative example systems with analytic partials:
//
//   harmonic_oscillator  h = p^2/2m + m w^2 q^2/2                 (s-independent reference)
//   damped_oscillator    h = p^2/2m + m w^2 q^2/2 + gamma s
//   damped_particles     h = sum p_i^2/2m + V(q) + gamma s,  V = sum (m w^2 q^2/2 + kappa q^4/4)
//                            + coupling/2 sum (q_i - q_{i+1})^2
//   parachute            h = (p - 2 lambda s)^2/2m + (m g/2 lambda)(exp(2 lambda q) - 1)
//   forced_oscillator    h = p^2/2m + m w^2 q^2/2 + gamma s - q F0 cos(Omega t)
//   brownian_oscillator  forced_oscillator with F(t) = eta(t), white noise of strength 2 m gamma kT
//   gierer_meinhardt     h = A ln(B + y) - D x^2/2 + C (z - x y) + K z   on (z, x, y) ~ (s, q, p)
//
// Lagrangian charts are provided for the harmonic, damped and parachute systems.

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contactdyn/contact.hpp"
#include "contactdyn/extended_time.hpp"
#include "contactdyn/herglotz.hpp"
#include "contactdyn/integrate.hpp"
#include "contactdyn/langevin.hpp"

namespace contactdyn {

enum class Chart { hamiltonian, lagrangian, extended, planar };

std::string to_string(Chart chart);
Chart parse_chart(std::string_view text);

using ParameterSet = std::map<std::string, double, std::less<>>;

enum class Bound { positive, nonnegative, nonzero, any, positive_integer };

struct ParameterInfo {
  std::string name;
  std::string unit;
  Bound bound = Bound::positive;
  double default_value = 1.0;
  std::string description;
};

std::string describe(Bound bound);

struct SystemInfo {
  std::string name;
  std::string description;
  std::vector<ParameterInfo> parameters;
  std::vector<Chart> charts;
  bool stochastic = false;
};

const std::vector<SystemInfo>& catalog();
const SystemInfo& system_info(std::string_view name);

// One named time-averaged quantity of a virial relation. The relation reads
// sum_k sign_k <term_k> = 0 in the long-time limit.
struct VirialTerm {
  std::string name;
  double sign = 1.0;
  SampleFunction value;
  Quadrature rule = Quadrature::trapezoid;
};

// Everything the virial harness needs in one chart. Pointwise,
// sum_k sign_k term_k = rate_scale * rate.
struct ChartVirial {
  Chart chart = Chart::hamiltonian;
  std::string relation;
  SampleFunction virial;  // G
  SampleFunction rate;    // X(G) along the flow
  double rate_scale = 0.5;
  std::vector<VirialTerm> terms;
};

// Planar field X_H + a Z on (x, y) with omega = dx ^ dy:
//   xdot = dH/dy,  ydot = -dH/dx + a y.
struct PlanarConformalModel {
  std::string name;
  double a = 0.0;
  std::function<double(double, double)> H;
  std::function<double(double, double)> H_x;
  std::function<double(double, double)> H_y;

  std::array<double, 2> field(double x, double y) const;
};

struct SystemSpec {
  std::string name;
  ParameterSet params;
  Chart default_chart = Chart::hamiltonian;

  std::optional<HamiltonianModel> hamiltonian;
  std::optional<LagrangianModel> lagrangian;
  std::optional<TimeDependentHamiltonianModel> extended;
  std::optional<PlanarConformalModel> planar;
  std::optional<NoiseSpec> noise;

  DarbouxPoint initial_state;
  std::optional<LagrangianPoint> initial_lagrangian;
  std::vector<ChartVirial> virials;

  double param(std::string_view key) const;
  bool stochastic() const noexcept { return noise.has_value(); }
  bool has_chart(Chart chart) const;
  const ChartVirial& virial(Chart chart) const;

  // Deterministic vector field and default initial vector in a chart.
  VectorField field(Chart chart) const;
  std::vector<double> initial_vector(Chart chart) const;
};

// Missing parameters take catalog defaults; unknown names and constraint
// violations throw ParameterError. Analytic partials are oracle-checked at
// the default state and a ParameterError is thrown if any fails.
SystemSpec make_system(std::string_view name, const ParameterSet& params = {});

// Result of conformal_projection_check.
struct ProjectionCheck {
  std::array<double, 2> planar{};
  std::array<double, 2> projected{};
  double z_rate = 0.0;          // ds component of the contact field
  double z_rate_closed = 0.0;   // A[y/(B+y) - ln(B+y)] + D x^2/2 - (C+K) z
  double max_abs_difference = 0.0;
};

// Compares the (xdot, ydot) part of the contact field with the planar
// conformal field at (x, y, z). Throws DomainError when y <= -B.
ProjectionCheck conformal_projection_check(const SystemSpec& gierer_meinhardt, double x, double y,
                                           double z);

}  // namespace contactdyn
