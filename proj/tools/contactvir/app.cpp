#include "app.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include <contactdyn/fields.hpp>
#include <contactdyn/report_io.hpp>
#include <contactdyn/run.hpp>
#include <contactdyn/virial.hpp>

#include "config.hpp"

namespace contactvir {

namespace fs = std::filesystem;
using namespace contactdyn;

namespace {

ParameterSet parse_params(const std::vector<std::string>& args) {
  ParameterSet out;
  for (const auto& kv : args) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParameterError("--param expects key=value, got '" + kv + "'");
    }
    const std::string value = kv.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw ParameterError("--param value for '" + kv.substr(0, eq) + "' is not a number");
    }
    out[kv.substr(0, eq)] = v;
  }
  return out;
}

// Scalar overrides shared by the experiment subcommands.
struct Overrides {
  std::string config_path;
  std::string system, chart, integrator, output_dir;
  std::vector<std::string> params;
  double dt = 0, rel_tol = 0, abs_tol = 0, horizon = 0, t_begin = 0, sample_interval = 0,
         residual_tolerance = 0;
  std::size_t sample_every = 0, csv_stride = 0, n_traj = 0;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::map<std::string, CLI::Option*> set;

  void attach(CLI::App& sub) {
    set["config"] = sub.add_option("-c,--config", config_path, "JSON experiment config");
    set["system"] = sub.add_option("--system", system, "catalog system name");
    set["params"] = sub.add_option("-p,--param", params, "parameter override key=value");
    set["chart"] = sub.add_option("--chart", chart, "hamiltonian | lagrangian | extended | planar");
    set["integrator"] = sub.add_option("--integrator", integrator, "rk4 | dopri5 | euler-maruyama");
    set["dt"] = sub.add_option("--dt", dt, "fixed step");
    set["rel_tol"] = sub.add_option("--rel-tol", rel_tol, "dopri5 relative tolerance");
    set["abs_tol"] = sub.add_option("--abs-tol", abs_tol, "dopri5 absolute tolerance");
    set["horizon"] = sub.add_option("-T,--horizon", horizon, "integration horizon");
    set["t_begin"] = sub.add_option("--t-begin", t_begin, "start of the averaging window");
    set["sample_every"] = sub.add_option("--sample-every", sample_every, "record every k-th step");
    set["sample_interval"] =
        sub.add_option("--sample-interval", sample_interval, "dopri5 dense output spacing");
    set["csv_stride"] = sub.add_option("--csv-stride", csv_stride, "CSV row stride");
    set["n_traj"] = sub.add_option("--n-traj", n_traj, "ensemble size");
    set["seed"] = sub.add_option("--seed", seed, "base seed");
    set["threads"] = sub.add_option("--threads", threads, "ensemble workers (0 = all cores)");
    set["residual_tolerance"] =
        sub.add_option("--residual-tolerance", residual_tolerance, "identity tolerance");
    set["output_dir"] = sub.add_option("-o,--out", output_dir, "output directory");
  }

  bool given(const std::string& key) const { return set.at(key)->count() > 0; }

  ExperimentConfig build() const {
    ExperimentConfig c;
    if (given("config")) {
      c = load_config(config_path);
    } else if (!given("system")) {
      throw ParameterError("either --config or --system is required");
    }
    if (given("system")) {
      if (given("config") && system != c.system) c.params.clear();
      c.system = system;
    }
    for (const auto& [k, v] : parse_params(params)) c.params[k] = v;
    if (given("chart")) c.chart = chart;
    if (given("integrator")) c.integrator = integrator;
    if (given("dt")) c.dt = dt;
    if (given("rel_tol")) c.rel_tol = rel_tol;
    if (given("abs_tol")) c.abs_tol = abs_tol;
    if (given("horizon")) c.horizon = horizon;
    if (given("t_begin")) c.t_begin = t_begin;
    if (given("sample_every")) c.sample_every = sample_every;
    if (given("sample_interval")) c.sample_interval = sample_interval;
    if (given("csv_stride")) c.csv_stride = csv_stride;
    if (given("n_traj")) c.n_traj = n_traj;
    if (given("seed")) c.seed = seed;
    if (given("threads")) c.threads = threads;
    if (given("residual_tolerance")) c.residual_tolerance = residual_tolerance;
    if (given("output_dir")) c.output_dir = output_dir;
    return c;
  }
};

// Thrown for unwritable artifacts; reported as a configuration error.
struct OutputError : Error {
  using Error::Error;
};

std::ofstream open_artifact(const fs::path& dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot write " + (dir / name).string());
  return out;
}

void close_artifact(std::ofstream& out, const fs::path& dir, const std::string& name) {
  out.close();
  if (!out) throw OutputError("failed writing " + (dir / name).string());
}

void write_abort_report(const Trajectory& traj, const fs::path& dir) {
  auto out = open_artifact(dir, "report.txt");
  out << "# virial report\n";
  write_metadata(traj.metadata, out);
  out << "status = aborted\n";
  out << "abort_reason = " << traj.abort_reason().value_or("") << '\n';
  out << "samples = " << traj.size() << '\n';
  if (!traj.empty()) out << "t_last = " << format_double(traj.back().t) << '\n';
  close_artifact(out, dir, "report.txt");
}

void print_summary(const VirialReport& r, std::ostream& out) {
  out << r.system << " [" << to_string(r.chart) << "] t in [" << format_double(r.t_begin) << ", "
      << format_double(r.t_end) << "]\n";
  out << "  " << r.relation << '\n';
  for (const auto& t : r.terms) {
    out << "  <" << t.name << "> = " << format_double(t.average) << '\n';
  }
  out << "  boundary term    = " << format_double(r.boundary) << '\n';
  out << "  residual_exact   = " << format_double(r.residual_exact) << '\n';
  out << "  theorem residual = " << format_double(r.theorem_residual) << '\n';
  out << "  G is " << to_string(r.boundedness.verdict) << " (growth rate "
      << format_double(r.boundedness.growth_rate) << ")\n";
}

enum class Mode { simulate, virial, check_identity };

int experiment(const Overrides& ov, Mode mode, std::ostream& out, std::ostream& err) {
  const ResolvedExperiment ex = resolve(ov.build());
  if (mode == Mode::check_identity && ex.system.stochastic()) {
    throw ParameterError("check-identity applies to deterministic systems; use ensemble");
  }
  const fs::path dir = ex.config.output_dir;
  const Trajectory traj = run(ex.system, ex.chart, ex.run);
  const ChartVirial& cv = ex.system.virial(ex.chart);

  if (mode == Mode::simulate) {
    auto csv = open_artifact(dir, "trajectory.csv");
    write_csv(traj, csv, {{"G", cv.virial}}, ex.config.csv_stride);
    close_artifact(csv, dir, "trajectory.csv");
  }
  if (traj.aborted()) {
    write_abort_report(traj, dir);
    err << "contactvir: integration aborted: " << *traj.abort_reason() << '\n';
    return kIntegrationAbort;
  }

  const VirialReport report =
      virial_report(ex.system, traj, ex.chart, {ex.config.t_begin, ex.config.residual_tolerance});
  {
    auto rep = open_artifact(dir, "report.txt");
    write_report(report, rep);
    close_artifact(rep, dir, "report.txt");
  }
  if (mode != Mode::check_identity) {
    auto ra = open_artifact(dir, "running_averages.csv");
    write_running_averages(ex.system, traj, ex.chart, ex.config.t_begin, ra, ex.config.csv_stride);
    close_artifact(ra, dir, "running_averages.csv");
  }
  print_summary(report, out);

  if (!report.stochastic && !(std::abs(report.residual_exact) <= report.residual_tolerance)) {
    err << "contactvir: identity residual " << format_double(report.residual_exact)
        << " exceeds tolerance " << format_double(report.residual_tolerance) << '\n';
    return kVerificationFailure;
  }
  if (mode == Mode::check_identity) out << "identity holds within tolerance\n";
  return kOk;
}

int ensemble(const Overrides& ov, std::ostream& out) {
  const ResolvedExperiment ex = resolve(ov.build());
  if (!ex.system.stochastic()) {
    throw ParameterError("ensemble needs a stochastic system, got '" + ex.system.name + "'");
  }
  EnsembleOptions eo;
  eo.n_traj = ex.config.n_traj;
  eo.horizon = ex.config.horizon;
  eo.dt = ex.config.dt;
  eo.seed = ex.config.seed;
  eo.t_begin = ex.config.t_begin;
  eo.threads = ex.config.threads;
  const EnsembleReport r = ensemble_report(ex.system, eo);

  const fs::path dir = ex.config.output_dir;
  auto rep = open_artifact(dir, "ensemble_report.txt");
  write_report(r, rep);
  close_artifact(rep, dir, "ensemble_report.txt");

  out << r.system << ": " << r.n_traj - r.n_aborted << " of " << r.n_traj
      << " trajectories, T = " << format_double(r.horizon) << '\n';
  for (const auto& t : r.terms) {
    out << "  <" << t.name << "> = " << format_double(t.mean) << " +- "
        << format_double(t.standard_error) << '\n';
  }
  out << "  <KE> - <PE>      = " << format_double(r.kinetic_minus_potential.mean) << " +- "
      << format_double(r.kinetic_minus_potential.standard_error) << '\n';
  out << "  noise virial     = " << format_double(r.noise_virial.mean) << " +- "
      << format_double(r.noise_virial.standard_error) << '\n';
  out << "  kT/2             = " << format_double(r.equipartition) << '\n';
  return r.n_aborted > 0 ? kIntegrationAbort : kOk;
}

int list_systems(std::ostream& out) {
  for (const auto& s : catalog()) {
    out << s.name << (s.stochastic ? " (stochastic)" : "") << "\n  " << s.description
        << "\n  charts:";
    for (Chart c : s.charts) out << ' ' << to_string(c);
    out << '\n';
    for (const auto& p : s.parameters) {
      out << "  " << std::left << std::setw(9) << p.name << std::setw(16) << p.unit
          << std::setw(14) << describe(p.bound) << "default " << format_double(p.default_value)
          << "  " << p.description << '\n';
    }
  }
  return kOk;
}

void report_partials(const std::string& system, const std::string& where,
                     const PartialsReport& rep, std::ostream& out, bool& ok) {
  for (const auto& c : rep.checks) {
    out << system << ' ' << rep.model << ' ' << where << ' ' << c.coordinate << ' '
        << format_double(c.analytic) << ' ' << format_double(c.numeric) << ' '
        << format_double(c.rel_error) << ' ' << (c.passed ? "ok" : "FAIL");
    if (!c.failure.empty()) out << ' ' << c.failure;
    out << '\n';
    ok = ok && c.passed;
  }
}

int gradcheck(const std::string& only, const std::vector<std::string>& param_args,
              std::uint64_t seed, std::size_t points, std::ostream& out) {
  const ParameterSet params = parse_params(param_args);
  if (!params.empty() && only.empty()) {
    throw ParameterError("--param needs --system for gradcheck");
  }

  bool ok = true;
  out << "system model point coordinate analytic numeric rel_error status\n";
  for (const auto& info : catalog()) {
    if (!only.empty() && info.name != only) continue;
    const SystemSpec spec = make_system(info.name, only.empty() ? ParameterSet{} : params);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    std::uniform_real_distribution<double> clock(0.0, 10.0);

    for (std::size_t k = 0; k <= points; ++k) {
      const std::string where = k == 0 ? "default" : "random" + std::to_string(k);
      DarbouxPoint x = spec.initial_state;
      if (k > 0) {
        x.s += jitter(rng);
        for (double& v : x.q) v += jitter(rng);
        for (double& v : x.p) v += jitter(rng);
      }
      if (spec.hamiltonian) {
        report_partials(info.name, where, check_partials(*spec.hamiltonian, x), out, ok);
        report_partials(info.name, where, check_partials(virial_observable(x.dim()), x), out, ok);
      }
      if (spec.extended) {
        const double t = k == 0 ? 0.0 : clock(rng);
        report_partials(info.name, where, check_partials(*spec.extended, {t, x}), out, ok);
      }
      if (spec.lagrangian && spec.initial_lagrangian) {
        LagrangianPoint z = *spec.initial_lagrangian;
        if (k > 0) {
          z.s += jitter(rng);
          for (double& v : z.q) v += jitter(rng);
          for (double& v : z.qdot) v += jitter(rng);
        }
        report_partials(info.name, where, check_partials(*spec.lagrangian, z), out, ok);
        const std::vector<double> masses(z.dim(), spec.param("m"));
        report_partials(info.name, where, check_partials(virial_observable(masses), z), out, ok);
      }
    }
  }
  if (!only.empty() && std::none_of(catalog().begin(), catalog().end(),
                                    [&](const SystemInfo& s) { return s.name == only; })) {
    throw ParameterError("unknown system '" + only + "'");
  }
  out << (ok ? "all partials pass\n" : "partials FAILED\n");
  return ok ? kOk : kVerificationFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"contact Hamiltonian dynamics and virial theorem experiments", "contactvir"};
  app.set_version_flag("--version", std::string(contactdyn::version()));
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-systems", "print the system catalog");
  Overrides sim_ov, vir_ov, ens_ov, chk_ov;
  auto* sim = app.add_subcommand("simulate", "integrate; write trajectory, report, averages");
  sim_ov.attach(*sim);
  auto* vir = app.add_subcommand("virial", "integrate; write report and running averages");
  vir_ov.attach(*vir);
  auto* ens = app.add_subcommand("ensemble", "stochastic ensemble report");
  ens_ov.attach(*ens);
  auto* chk = app.add_subcommand("check-identity", "verify the finite-horizon identity");
  chk_ov.attach(*chk);

  auto* grad = app.add_subcommand("gradcheck", "finite-difference check of analytic partials");
  std::string grad_system;
  std::vector<std::string> grad_params;
  std::uint64_t grad_seed = 1;
  std::size_t grad_points = 3;
  grad->add_option("--system", grad_system, "restrict to one system");
  grad->add_option("-p,--param", grad_params, "parameter override key=value");
  grad->add_option("--seed", grad_seed, "seed for the random sample points");
  grad->add_option("--points", grad_points, "random points per system");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kConfigError;
  }

  try {
    if (*list) return list_systems(out);
    if (*sim) return experiment(sim_ov, Mode::simulate, out, err);
    if (*vir) return experiment(vir_ov, Mode::virial, out, err);
    if (*chk) return experiment(chk_ov, Mode::check_identity, out, err);
    if (*ens) return ensemble(ens_ov, out);
    if (*grad) return gradcheck(grad_system, grad_params, grad_seed, grad_points, out);
  } catch (const ParameterError& e) {
    err << "contactvir: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "contactvir: config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const OutputError& e) {
    err << "contactvir: output error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IntegrationError& e) {
    err << "contactvir: integration error: " << e.what() << '\n';
    return kIntegrationAbort;
  } catch (const Error& e) {
    err << "contactvir: error: " << e.what() << '\n';
    return kIntegrationAbort;
  }
  return kUsage;
}

}  // namespace contactvir
