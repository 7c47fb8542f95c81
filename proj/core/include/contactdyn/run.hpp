#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "contactdyn/integrate.hpp"
#include "contactdyn/systems.hpp"

namespace contactdyn {

enum class Integrator { rk4, dopri5, euler_maruyama };

std::string to_string(Integrator integrator);
Integrator parse_integrator(std::string_view text);

struct RunOptions {
  Integrator integrator = Integrator::rk4;
  double horizon = 100.0;
  double t0 = 0.0;
  double dt = 1e-3;                // rk4 and euler_maruyama
  std::size_t sample_every = 10;   // rk4 and euler_maruyama
  double rel_tol = 1e-9;           // dopri5
  double abs_tol = 1e-12;          // dopri5
  double sample_interval = 0.0;    // dopri5 dense output, 0 = every accepted step
  std::uint64_t seed = 0;          // euler_maruyama
  std::optional<std::vector<double>> initial;  // defaults to the system's initial vector
};

// Integrates a catalog system in one chart and fills the trajectory metadata.
// Stochastic systems require euler_maruyama and vice versa.
Trajectory run(const SystemSpec& system, Chart chart, const RunOptions& opts);

}  // namespace contactdyn
