#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace contactvir {

using contactdyn::ParameterError;
using json = nlohmann::json;

namespace {

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ParameterError("config key '" + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParameterError("config key '" + key + "' must be finite");
  return d;
}

std::uint64_t count(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) {
    throw ParameterError("config key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ParameterError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  json root;
  try {
    root = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParameterError("config must be a JSON object");

  ExperimentConfig c;
  bool have_system = false;
  for (const auto& [key, v] : root.items()) {
    if (key == "system") {
      c.system = text(v, key);
      have_system = true;
    } else if (key == "params") {
      if (!v.is_object()) throw ParameterError("config key 'params' must be an object");
      for (const auto& [pk, pv] : v.items()) c.params[pk] = number(pv, "params." + pk);
    } else if (key == "chart") {
      c.chart = text(v, key);
    } else if (key == "integrator") {
      c.integrator = text(v, key);
    } else if (key == "dt") {
      c.dt = number(v, key);
    } else if (key == "rel_tol") {
      c.rel_tol = number(v, key);
    } else if (key == "abs_tol") {
      c.abs_tol = number(v, key);
    } else if (key == "horizon") {
      c.horizon = number(v, key);
    } else if (key == "t_begin") {
      c.t_begin = number(v, key);
    } else if (key == "sample_every") {
      c.sample_every = count(v, key);
    } else if (key == "sample_interval") {
      c.sample_interval = number(v, key);
    } else if (key == "csv_stride") {
      c.csv_stride = count(v, key);
    } else if (key == "n_traj") {
      c.n_traj = count(v, key);
    } else if (key == "seed") {
      c.seed = count(v, key);
    } else if (key == "threads") {
      const auto t = count(v, key);
      if (t > std::numeric_limits<unsigned>::max()) throw ParameterError("threads out of range");
      c.threads = static_cast<unsigned>(t);
    } else if (key == "residual_tolerance") {
      c.residual_tolerance = number(v, key);
    } else if (key == "output_dir") {
      c.output_dir = text(v, key);
    } else if (key == "initial_state") {
      if (!v.is_array()) throw ParameterError("config key 'initial_state' must be an array");
      std::vector<double> x;
      for (const auto& e : v) x.push_back(number(e, key));
      c.initial_state = std::move(x);
    } else {
      throw ParameterError("unknown config key '" + key + "'");
    }
  }
  if (!have_system) throw ParameterError("config is missing 'system'");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse_config(in);
}

ResolvedExperiment resolve(const ExperimentConfig& config) {
  using namespace contactdyn;
  ResolvedExperiment r{config, make_system(config.system, config.params), Chart::hamiltonian, {}};
  r.chart = config.chart ? parse_chart(*config.chart) : r.system.default_chart;
  if (!r.system.has_chart(r.chart)) {
    throw ParameterError("system '" + r.system.name + "' has no " + to_string(r.chart) + " chart");
  }
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ParameterError(std::string(name) + " must be positive and finite");
    }
  };
  positive(config.horizon, "horizon");
  positive(config.dt, "dt");
  positive(config.rel_tol, "rel_tol");
  positive(config.abs_tol, "abs_tol");
  positive(config.residual_tolerance, "residual_tolerance");
  if (config.dt > config.horizon) throw ParameterError("dt must not exceed horizon");
  if (!(config.sample_interval >= 0.0)) throw ParameterError("sample_interval must be >= 0");
  if (config.sample_every == 0) throw ParameterError("sample_every must be >= 1");
  if (config.csv_stride == 0) throw ParameterError("csv_stride must be >= 1");
  if (!(config.t_begin >= 0.0 && config.t_begin < config.horizon)) {
    throw ParameterError("t_begin must lie in [0, horizon)");
  }

  RunOptions& ro = r.run;
  ro.integrator = config.integrator
                      ? parse_integrator(*config.integrator)
                      : (r.system.stochastic() ? Integrator::euler_maruyama : Integrator::rk4);
  ro.horizon = config.horizon;
  ro.dt = config.dt;
  ro.sample_every = config.sample_every;
  ro.rel_tol = config.rel_tol;
  ro.abs_tol = config.abs_tol;
  ro.sample_interval = config.sample_interval;
  ro.seed = config.seed;
  ro.initial = config.initial_state;
  if (r.system.stochastic() != (ro.integrator == Integrator::euler_maruyama)) {
    throw ParameterError(r.system.stochastic()
                             ? "system '" + r.system.name + "' is stochastic; use euler-maruyama"
                             : "euler-maruyama is only available for stochastic systems");
  }
  if (ro.initial && ro.initial->size() != r.system.field(r.chart).dim()) {
    throw ParameterError("initial_state has " + std::to_string(ro.initial->size()) +
                         " entries, the " + to_string(r.chart) + " chart needs " +
                         std::to_string(r.system.field(r.chart).dim()));
  }
  return r;
}

}  // namespace contactvir
