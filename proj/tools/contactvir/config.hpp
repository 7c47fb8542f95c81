#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <contactdyn/run.hpp>
#include <contactdyn/systems.hpp>

namespace contactvir {

// Experiment description. JSON keys use the field names below; `params` is
// an object of numbers and `initial_state` an array in the chart's layout.
struct ExperimentConfig {
  std::string system;
  contactdyn::ParameterSet params;
  std::optional<std::string> chart;       // default: the system's default chart
  std::optional<std::string> integrator;  // default: rk4, or euler-maruyama when stochastic
  double dt = 1e-3;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double horizon = 100.0;
  double t_begin = 0.0;
  std::size_t sample_every = 1;
  double sample_interval = 0.0;
  std::size_t csv_stride = 10;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  double residual_tolerance = 1e-8;
  std::string output_dir = ".";
  std::optional<std::vector<double>> initial_state;
};

// Throws contactdyn::ParameterError on malformed input or unknown keys.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Everything needed to run, checked against the catalog.
struct ResolvedExperiment {
  ExperimentConfig config;
  contactdyn::SystemSpec system;
  contactdyn::Chart chart = contactdyn::Chart::hamiltonian;
  contactdyn::RunOptions run;
};

ResolvedExperiment resolve(const ExperimentConfig& config);

}  // namespace contactvir
