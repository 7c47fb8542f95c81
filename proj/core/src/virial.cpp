#include "contactdyn/virial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "contactdyn/run.hpp"

namespace contactdyn {

ObservableModel virial_observable(std::size_t n) {
  if (n == 0) throw DimensionError("virial observable needs n >= 1");
  return observables::virial(n);
}

LagrangianObservable virial_observable(const std::vector<double>& masses) {
  if (masses.empty()) throw DimensionError("virial observable needs n >= 1");
  for (double m : masses) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ParameterError("virial masses must be > 0");
  }
  return {"G_L",
          masses.size(),
          [masses](const LagrangianPoint& z) {
            double g = 0.0;
            for (std::size_t i = 0; i < masses.size(); ++i) g += masses[i] * z.qdot[i] * z.q[i];
            return g;
          },
          [](const LagrangianPoint&) { return 0.0; },
          [masses](const LagrangianPoint& z, std::size_t i) { return masses[i] * z.qdot[i]; },
          [masses](const LagrangianPoint& z, std::size_t i) { return masses[i] * z.q[i]; }};
}

VirialRate virial_rate(const HamiltonianModel& h, const DarbouxPoint& x) {
  const ObservableModel g = virial_observable(x.dim());
  VirialRate r;
  r.pb = poisson_bracket(g, h, x);
  r.reeb_term = g.value(x) * reeb_derivative(h, x);
  r.total = r.pb - r.reeb_term;
  return r;
}

double boundary_term(const Trajectory& traj, const SampleFunction& G, double t_begin) {
  if (traj.empty()) throw IntegrationError("boundary term of an empty trajectory");
  const std::size_t first = window_start(traj, t_begin);
  if (first + 1 >= traj.size()) {
    throw IntegrationError("boundary term needs at least two samples in the window");
  }
  const Sample a = traj.sample(first);
  const Sample b = traj.back();
  return (G(b) - G(a)) / (b.t - a.t);
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::bounded ? "bounded" : "growing";
}

Boundedness assess_boundedness(const Trajectory& traj, const SampleFunction& G, double t_begin,
                               double threshold) {
  const std::size_t first = window_start(traj, t_begin);
  if (first >= traj.size()) throw IntegrationError("boundedness window is empty");
  const double t_mid = 0.5 * (traj.time(first) + traj.back().t);

  Boundedness out;
  std::vector<double> ts, ms;
  double running = 0.0;
  for (std::size_t i = first; i < traj.size(); ++i) {
    const Sample s = traj.sample(i);
    running = std::max(running, std::abs(G(s)));
    if (s.t >= t_mid) {
      ts.push_back(s.t);
      ms.push_back(running);
    }
  }
  out.max_abs = running;
  if (ts.size() >= 2) {
    double tbar = 0.0, mbar = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      tbar += ts[i];
      mbar += ms[i];
    }
    tbar /= static_cast<double>(ts.size());
    mbar /= static_cast<double>(ts.size());
    double stt = 0.0, stm = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      stt += (ts[i] - tbar) * (ts[i] - tbar);
      stm += (ts[i] - tbar) * (ms[i] - mbar);
    }
    out.growth_rate = stt > 0.0 ? stm / stt : 0.0;
  }
  out.verdict = out.growth_rate > threshold ? Verdict::growing : Verdict::bounded;
  return out;
}

double VirialReport::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t.average;
  }
  throw ParameterError("report has no term '" + std::string(name) + "'");
}

const EnsembleStat& EnsembleReport::term(std::string_view name) const {
  for (const auto& t : terms) {
    if (t.name == name) return t;
  }
  throw ParameterError("report has no term '" + std::string(name) + "'");
}

VirialReport virial_report(const SystemSpec& system, const Trajectory& traj, Chart chart,
                           const ReportOptions& opts) {
  if (traj.aborted()) {
    throw IntegrationError("virial report of an aborted trajectory: " + *traj.abort_reason());
  }
  if (!traj.metadata.system.empty() && traj.metadata.system != system.name) {
    throw ParameterError("trajectory of '" + traj.metadata.system + "' passed with system '" +
                         system.name + "'");
  }
  const ChartVirial& cv = system.virial(chart);
  if (traj.components() != system.field(chart).components) {
    throw DimensionError("trajectory layout does not match the " + to_string(chart) +
                         " chart of '" + system.name + "'");
  }
  const std::size_t first = window_start(traj, opts.t_begin);
  if (first + 1 >= traj.size()) {
    throw IntegrationError("averaging window contains fewer than two samples");
  }

  const bool any_left = std::any_of(cv.terms.begin(), cv.terms.end(), [](const VirialTerm& t) {
    return t.rule == Quadrature::left_point;
  });
  std::vector<AverageAccumulator> acc;
  acc.reserve(cv.terms.size());
  for (const auto& t : cv.terms) acc.emplace_back(t.rule);
  AverageAccumulator rate(any_left ? Quadrature::left_point : Quadrature::trapezoid);

  for (std::size_t i = first; i < traj.size(); ++i) {
    const Sample s = traj.sample(i);
    for (std::size_t k = 0; k < cv.terms.size(); ++k) acc[k].add(s.t, cv.terms[k].value(s));
    rate.add(s.t, cv.rate(s));
  }

  VirialReport r;
  r.system = system.name;
  r.chart = chart;
  r.relation = cv.relation;
  r.metadata = traj.metadata;
  r.t_begin = traj.time(first);
  r.t_end = traj.back().t;
  r.samples = traj.size() - first;
  r.rate_scale = cv.rate_scale;
  r.residual_tolerance = opts.residual_tolerance;
  r.stochastic = system.stochastic();
  for (std::size_t k = 0; k < cv.terms.size(); ++k) {
    r.terms.push_back({cv.terms[k].name, cv.terms[k].sign, acc[k].average()});
    r.theorem_residual += cv.terms[k].sign * acc[k].average();
  }
  r.rate_average = rate.average();
  r.boundary = boundary_term(traj, cv.virial, opts.t_begin);
  r.residual_exact = r.rate_average - r.boundary;
  r.boundedness =
      assess_boundedness(traj, cv.virial, opts.t_begin, 100.0 * opts.residual_tolerance);
  return r;
}

namespace {

struct MemberResult {
  bool aborted = false;
  std::vector<double> terms;
  double theorem_residual = 0.0;
  double identity_residual = 0.0;
};

EnsembleStat to_stat(std::string name, const RunningStats& s) {
  return {std::move(name), s.mean(), s.standard_error()};
}

}  // namespace

EnsembleReport ensemble_report(const SystemSpec& system, const EnsembleOptions& opts) {
  if (!system.stochastic()) {
    throw ParameterError("ensemble report needs a stochastic system, got '" + system.name + "'");
  }
  if (opts.n_traj < 2) throw ParameterError("ensemble needs at least two trajectories");
  const ChartVirial& cv = system.virial(Chart::extended);

  RunOptions ro;
  ro.integrator = Integrator::euler_maruyama;
  ro.horizon = opts.horizon;
  ro.dt = opts.dt;
  ro.sample_every = 1;

  // Validate the run configuration once before fanning out.
  {
    RunOptions probe = ro;
    probe.horizon = opts.dt;
    run(system, Chart::extended, probe);
  }

  std::vector<MemberResult> results(opts.n_traj);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < opts.n_traj; i = next.fetch_add(1)) {
      RunOptions mine = ro;
      mine.seed = opts.seed ^ static_cast<std::uint64_t>(i);
      const Trajectory traj = run(system, Chart::extended, mine);
      MemberResult& out = results[i];
      if (traj.aborted()) {
        out.aborted = true;
        continue;
      }
      const VirialReport r = virial_report(system, traj, Chart::extended, {opts.t_begin, 1e-8});
      for (const auto& t : r.terms) out.terms.push_back(t.average);
      out.theorem_residual = r.theorem_residual;
      out.identity_residual = r.residual_exact;
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(opts.n_traj)));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const auto index_of = [&](std::string_view name) {
    for (std::size_t k = 0; k < cv.terms.size(); ++k) {
      if (cv.terms[k].name == name) return k;
    }
    throw ParameterError("stochastic virial has no term '" + std::string(name) + "'");
  };
  const std::size_t ke = index_of("kinetic");
  const std::size_t pe = index_of("potential");
  const std::size_t fn = index_of("friction_noise");

  std::vector<RunningStats> term_stats(cv.terms.size());
  RunningStats residual, paired, noise_virial, identity;
  EnsembleReport out;
  for (const auto& m : results) {
    if (m.aborted) {
      ++out.n_aborted;
      continue;
    }
    for (std::size_t k = 0; k < m.terms.size(); ++k) term_stats[k].add(m.terms[k]);
    residual.add(m.theorem_residual);
    paired.add(m.terms[ke] - m.terms[pe]);
    noise_virial.add(2.0 * m.terms[fn]);
    identity.add(m.identity_residual);
  }
  if (out.n_aborted == opts.n_traj) throw IntegrationError("every ensemble trajectory aborted");

  out.system = system.name;
  out.relation = cv.relation;
  out.metadata.system = system.name;
  out.metadata.chart = to_string(Chart::extended);
  for (const auto& [k, v] : system.params) out.metadata.params[k] = v;
  out.metadata.integrator = to_string(Integrator::euler_maruyama);
  out.metadata.step = opts.dt;
  out.metadata.seed = opts.seed;
  out.n_traj = opts.n_traj;
  out.horizon = opts.horizon;
  out.dt = opts.dt;
  out.t_begin = opts.t_begin;
  out.equipartition = 0.5 * system.param("kT");
  for (std::size_t k = 0; k < cv.terms.size(); ++k) {
    out.terms.push_back(to_stat(cv.terms[k].name, term_stats[k]));
  }
  out.theorem_residual = to_stat("theorem_residual", residual);
  out.kinetic_minus_potential = to_stat("kinetic_minus_potential", paired);
  out.noise_virial = to_stat("noise_virial", noise_virial);
  out.identity_residual = to_stat("identity_residual", identity);
  return out;
}

}  // namespace contactdyn
