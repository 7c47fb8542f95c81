#include "contactdyn/run.hpp"

#include "contactdyn/fields.hpp"
#include "contactdyn/langevin.hpp"

namespace contactdyn {

std::string to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::rk4: return "rk4";
    case Integrator::dopri5: return "dopri5";
    case Integrator::euler_maruyama: return "euler-maruyama";
  }
  return "unknown";
}

Integrator parse_integrator(std::string_view text) {
  for (Integrator i : {Integrator::rk4, Integrator::dopri5, Integrator::euler_maruyama}) {
    if (text == to_string(i)) return i;
  }
  throw ParameterError("unknown integrator '" + std::string(text) +
                       "' (expected rk4, dopri5 or euler-maruyama)");
}

Trajectory run(const SystemSpec& system, Chart chart, const RunOptions& opts) {
  if (!system.has_chart(chart)) {
    throw ParameterError("system '" + system.name + "' has no " + to_string(chart) + " chart");
  }
  const bool em = opts.integrator == Integrator::euler_maruyama;
  if (system.stochastic() != em) {
    throw ParameterError(system.stochastic()
                             ? "system '" + system.name + "' is stochastic; use euler-maruyama"
                             : "euler-maruyama is only available for stochastic systems");
  }
  const VectorField field = system.field(chart);
  const std::vector<double> x0 = opts.initial ? *opts.initial : system.initial_vector(chart);
  if (x0.size() != field.dim()) {
    throw DimensionError("initial state has " + std::to_string(x0.size()) +
                         " components, chart expects " + std::to_string(field.dim()));
  }

  Trajectory traj;
  switch (opts.integrator) {
    case Integrator::rk4:
      traj = integrate_fixed(field, x0, opts.horizon, opts.dt, {opts.t0, opts.sample_every});
      break;
    case Integrator::dopri5: {
      AdaptiveOptions a;
      a.t0 = opts.t0;
      a.rel_tol = opts.rel_tol;
      a.abs_tol = opts.abs_tol;
      a.sample_interval = opts.sample_interval;
      traj = integrate_adaptive(field, x0, opts.horizon, a);
      break;
    }
    case Integrator::euler_maruyama: {
      NoiseSpec noise = *system.noise;
      noise.seed = opts.seed;
      traj = euler_maruyama_langevin(system.param("omega"), noise, unpack_darboux(x0, 1),
                                     opts.horizon, opts.dt, {opts.t0, opts.sample_every});
      break;
    }
  }
  traj.metadata.system = system.name;
  traj.metadata.chart = to_string(chart);
  traj.metadata.params.clear();
  for (const auto& [k, v] : system.params) traj.metadata.params[k] = v;
  traj.metadata.integrator = to_string(opts.integrator);
  return traj;
}

}  // namespace contactdyn
