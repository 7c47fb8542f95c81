#include "contactdyn/systems.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "contactdyn/fields.hpp"
#include "contactdyn/virial.hpp"

namespace contactdyn {

std::string to_string(Chart chart) {
  switch (chart) {
    case Chart::hamiltonian: return "hamiltonian";
    case Chart::lagrangian: return "lagrangian";
    case Chart::extended: return "extended";
    case Chart::planar: return "planar";
  }
  return "unknown";
}

Chart parse_chart(std::string_view text) {
  for (Chart c : {Chart::hamiltonian, Chart::lagrangian, Chart::extended, Chart::planar}) {
    if (text == to_string(c)) return c;
  }
  throw ParameterError("unknown chart '" + std::string(text) + "'");
}

std::string describe(Bound bound) {
  switch (bound) {
    case Bound::positive: return "> 0";
    case Bound::nonnegative: return ">= 0";
    case Bound::nonzero: return "!= 0";
    case Bound::any: return "real";
    case Bound::positive_integer: return "integer >= 1";
  }
  return "";
}

std::array<double, 2> PlanarConformalModel::field(double x, double y) const {
  return {require_finite(H_y(x, y), "dH/dy"), require_finite(-H_x(x, y) + a * y, "ydot")};
}

const std::vector<SystemInfo>& catalog() {
  static const std::vector<SystemInfo> systems = {
      {"harmonic_oscillator",
       "undamped oscillator; s-independent reference (symplectic limit)",
       {{"m", "mass", Bound::positive, 1.0, "mass"},
        {"omega", "1/time", Bound::positive, 1.0, "angular frequency"}},
       {Chart::hamiltonian, Chart::lagrangian},
       false},
      {"damped_oscillator",
       "oscillator with linear friction -gamma p",
       {{"m", "mass", Bound::positive, 1.0, "mass"},
        {"omega", "1/time", Bound::positive, 1.0, "angular frequency"},
        {"gamma", "1/time", Bound::positive, 0.1, "damping constant"}},
       {Chart::hamiltonian, Chart::lagrangian},
       false},
      {"damped_particles",
       "N coupled anharmonic particles with linear friction",
       {{"m", "mass", Bound::positive, 1.0, "mass of each particle"},
        {"omega", "1/time", Bound::positive, 1.0, "on-site angular frequency"},
        {"gamma", "1/time", Bound::positive, 0.1, "damping constant"},
        {"kappa", "energy/length^4", Bound::nonnegative, 0.5, "quartic on-site stiffness"},
        {"coupling", "energy/length^2", Bound::nonnegative, 0.3, "nearest-neighbour spring"},
        {"count", "1", Bound::positive_integer, 3.0, "number of particles"}},
       {Chart::hamiltonian},
       false},
      {"parachute",
       "vertical fall under gravity with quadratic drag",
       {{"m", "mass", Bound::positive, 1.0, "mass"},
        {"g", "length/time^2", Bound::positive, 10.0, "gravitational acceleration"},
        {"lambda", "1/length", Bound::positive, 0.5, "drag constant"}},
       {Chart::hamiltonian, Chart::lagrangian},
       false},
      {"forced_oscillator",
       "damped oscillator driven by F0 cos(Omega t); time-dependent contact Hamiltonian",
       {{"m", "mass", Bound::positive, 1.0, "mass"},
        {"omega", "1/time", Bound::positive, 1.0, "angular frequency"},
        {"gamma", "1/time", Bound::positive, 0.1, "damping constant"},
        {"F0", "force", Bound::nonnegative, 1.0, "forcing amplitude"},
        {"Omega", "1/time", Bound::positive, 2.0, "forcing angular frequency"}},
       {Chart::extended},
       false},
      {"brownian_oscillator",
       "harmonically trapped Brownian particle (Langevin equation)",
       {{"m", "mass", Bound::positive, 1.0, "mass"},
        {"omega", "1/time", Bound::positive, 1.0, "trap angular frequency"},
        {"gamma", "1/time", Bound::positive, 0.5, "damping constant"},
        {"kT", "energy", Bound::nonnegative, 1.0, "thermal energy k_B T"}},
       {Chart::extended},
       true},
      {"gierer_meinhardt",
       "activator-inhibitor kinetics as a contact (and planar conformal) system",
       {{"A", "1", Bound::nonzero, 1.0, "activator production"},
        {"B", "1", Bound::any, 1.0, "saturation offset (domain y > -B)"},
        {"C", "1", Bound::any, 1.0, "activator decay"},
        {"D", "1", Bound::any, 1.0, "inhibitor production"},
        {"K", "1", Bound::any, 1.0, "inhibitor decay"}},
       {Chart::hamiltonian, Chart::planar},
       false},
  };
  return systems;
}

const SystemInfo& system_info(std::string_view name) {
  for (const auto& s : catalog()) {
    if (s.name == name) return s;
  }
  throw ParameterError("unknown system '" + std::string(name) + "'");
}

double SystemSpec::param(std::string_view key) const {
  const auto it = params.find(key);
  if (it == params.end()) throw ParameterError("system has no parameter '" + std::string(key) + "'");
  return it->second;
}

bool SystemSpec::has_chart(Chart chart) const {
  return std::any_of(virials.begin(), virials.end(),
                     [chart](const ChartVirial& v) { return v.chart == chart; });
}

const ChartVirial& SystemSpec::virial(Chart chart) const {
  for (const auto& v : virials) {
    if (v.chart == chart) return v;
  }
  throw ParameterError("system '" + name + "' has no " + to_string(chart) + " chart");
}

VectorField SystemSpec::field(Chart chart) const {
  switch (chart) {
    case Chart::hamiltonian:
      if (hamiltonian) {
        VectorField f = contact_field(*hamiltonian);
        if (name == "gierer_meinhardt") f.components = {"z", "x", "y"};
        return f;
      }
      break;
    case Chart::lagrangian:
      if (lagrangian) return herglotz_field(*lagrangian);
      break;
    case Chart::extended:
      if (extended) return extended_contact_field(*extended);
      break;
    case Chart::planar:
      if (planar) {
        auto model = std::make_shared<const PlanarConformalModel>(*planar);
        return {planar->name, {"x", "y"},
                [model](double, std::span<const double> y, std::span<double> dydt) {
                  const auto v = model->field(y[0], y[1]);
                  dydt[0] = v[0];
                  dydt[1] = v[1];
                }};
      }
      break;
  }
  throw ParameterError("system '" + name + "' has no " + to_string(chart) + " chart");
}

std::vector<double> SystemSpec::initial_vector(Chart chart) const {
  switch (chart) {
    case Chart::hamiltonian:
    case Chart::extended:
      return pack(initial_state);
    case Chart::lagrangian:
      if (initial_lagrangian) return pack(*initial_lagrangian);
      break;
    case Chart::planar:
      return {initial_state.q[0], initial_state.p[0]};
  }
  throw ParameterError("system '" + name + "' has no " + to_string(chart) + " chart");
}

namespace {

ParameterSet resolve_parameters(const SystemInfo& info, const ParameterSet& given) {
  ParameterSet out;
  for (const auto& p : info.parameters) out[p.name] = p.default_value;
  for (const auto& [key, value] : given) {
    const auto it = std::find_if(info.parameters.begin(), info.parameters.end(),
                                 [&](const ParameterInfo& p) { return p.name == key; });
    if (it == info.parameters.end()) {
      throw ParameterError("system '" + info.name + "' has no parameter '" + key + "'");
    }
    out[key] = value;
  }
  for (const auto& p : info.parameters) {
    const double v = out[p.name];
    bool ok = std::isfinite(v);
    switch (p.bound) {
      case Bound::positive: ok = ok && v > 0.0; break;
      case Bound::nonnegative: ok = ok && v >= 0.0; break;
      case Bound::nonzero: ok = ok && v != 0.0; break;
      case Bound::any: break;
      case Bound::positive_integer: ok = ok && v >= 1.0 && std::floor(v) == v; break;
    }
    if (!ok) {
      std::ostringstream msg;
      msg << info.name << ": parameter " << p.name << " = " << v << " violates constraint "
          << describe(p.bound);
      throw ParameterError(msg.str());
    }
  }
  return out;
}

// Hamiltonian-chart state accessors for n = 1: (s, q, p).
constexpr std::size_t kS = 0, kQ = 1, kP = 2;
// Lagrangian-chart state accessors for n = 1: (q, qdot, s).
constexpr std::size_t kLq = 0, kLv = 1;

SampleFunction darboux_virial() {
  auto g = std::make_shared<const ObservableModel>(observables::virial(1));
  return [g](const Sample& smp) { return g->value(unpack_darboux(smp.x, 1)); };
}

SampleFunction contact_rate(const HamiltonianModel& h, std::size_t n) {
  auto model = std::make_shared<const HamiltonianModel>(h);
  auto g = std::make_shared<const ObservableModel>(observables::virial(n));
  return [model, g, n](const Sample& smp) {
    return apply_field_to_observable(*model, *g, unpack_darboux(smp.x, n));
  };
}

SampleFunction extended_rate(const TimeDependentHamiltonianModel& h) {
  auto model = std::make_shared<const TimeDependentHamiltonianModel>(h);
  auto g = std::make_shared<const ObservableModel>(observables::virial(1));
  return [model, g](const Sample& smp) {
    return apply_evolution_field(*model, *g, ExtendedPoint{smp.t, unpack_darboux(smp.x, 1)});
  };
}

void add_lagrangian_virial(SystemSpec& spec, double m, std::string relation,
                           std::vector<VirialTerm> terms) {
  auto L = std::make_shared<const LagrangianModel>(*spec.lagrangian);
  auto g = std::make_shared<const LagrangianObservable>(virial_observable(std::vector<double>{m}));
  ChartVirial v;
  v.chart = Chart::lagrangian;
  v.relation = std::move(relation);
  v.virial = [g](const Sample& smp) { return g->value(unpack_lagrangian(smp.x, 1)); };
  v.rate = [L, g](const Sample& smp) {
    return apply_lagrangian_field(*L, *g, unpack_lagrangian(smp.x, 1));
  };
  v.rate_scale = 0.5;
  v.terms = std::move(terms);
  spec.virials.push_back(std::move(v));
}

void require_partials(const PartialsReport& report) {
  if (report.passed()) return;
  std::ostringstream msg;
  msg << "analytic partials of '" << report.model << "' fail the finite-difference oracle:";
  for (const auto& c : report.checks) {
    if (!c.passed) msg << ' ' << c.coordinate << " (rel " << c.rel_error << ")";
  }
  throw ParameterError(msg.str());
}

// Quadratic oscillator models shared by the harmonic and damped entries.
HamiltonianModel oscillator_hamiltonian(std::string name, double m, double omega, double gamma) {
  const double k = m * omega * omega;
  return {std::move(name),
          1,
          [=](const DarbouxPoint& x) {
            return x.p[0] * x.p[0] / (2.0 * m) + 0.5 * k * x.q[0] * x.q[0] + gamma * x.s;
          },
          [=](const DarbouxPoint&) { return gamma; },
          [=](const DarbouxPoint& x, std::size_t) { return k * x.q[0]; },
          [=](const DarbouxPoint& x, std::size_t) { return x.p[0] / m; }};
}

LagrangianModel oscillator_lagrangian(std::string name, double m, double omega, double gamma) {
  const double k = m * omega * omega;
  return {std::move(name),
          1,
          [=](const LagrangianPoint& z) {
            return 0.5 * m * z.qdot[0] * z.qdot[0] - 0.5 * k * z.q[0] * z.q[0] - gamma * z.s;
          },
          [=](const LagrangianPoint&) { return -gamma; },
          [=](const LagrangianPoint& z, std::size_t) { return -k * z.q[0]; },
          [=](const LagrangianPoint& z, std::size_t) { return m * z.qdot[0]; },
          [=](const LagrangianPoint&, std::size_t, std::size_t) { return m; },
          [](const LagrangianPoint&, std::size_t, std::size_t) { return 0.0; },
          [](const LagrangianPoint&, std::size_t) { return 0.0; }};
}

void build_oscillator(SystemSpec& spec, bool damped) {
  const double m = spec.param("m");
  const double omega = spec.param("omega");
  const double gamma = damped ? spec.param("gamma") : 0.0;
  const double k = m * omega * omega;

  spec.hamiltonian = oscillator_hamiltonian(spec.name, m, omega, gamma);
  spec.lagrangian = oscillator_lagrangian(spec.name, m, omega, gamma);
  spec.initial_state = DarbouxPoint(0.0, {1.0}, {0.0});
  spec.initial_lagrangian = LagrangianPoint({1.0}, {0.0}, 0.0);

  ChartVirial h;
  h.chart = Chart::hamiltonian;
  h.virial = darboux_virial();
  h.rate = contact_rate(*spec.hamiltonian, 1);
  h.rate_scale = 0.5;
  h.terms = {
      {"kinetic", 1.0, [=](const Sample& s) { return s.x[kP] * s.x[kP] / (2.0 * m); }},
      {"potential", -1.0, [=](const Sample& s) { return 0.5 * k * s.x[kQ] * s.x[kQ]; }},
  };
  if (damped) {
    h.relation = "<p^2/2m> = <m omega^2 q^2/2> + (1/2)<gamma p q>";
    h.terms.push_back(
        {"friction", -1.0, [=](const Sample& s) { return 0.5 * gamma * s.x[kP] * s.x[kQ]; }});
  } else {
    h.relation = "<p^2/2m> = <m omega^2 q^2/2>";
  }
  spec.virials.push_back(std::move(h));

  std::vector<VirialTerm> lt = {
      {"kinetic", 1.0, [=](const Sample& s) { return 0.5 * m * s.x[kLv] * s.x[kLv]; }},
      {"potential", -1.0, [=](const Sample& s) { return 0.5 * k * s.x[kLq] * s.x[kLq]; }},
  };
  std::string relation = "<m qdot^2/2> = <m omega^2 q^2/2>";
  if (damped) {
    relation += " + (1/2)<m gamma q qdot>";
    lt.push_back({"friction", -1.0,
                  [=](const Sample& s) { return 0.5 * m * gamma * s.x[kLq] * s.x[kLv]; }});
  }
  add_lagrangian_virial(spec, m, relation, std::move(lt));
}

void build_damped_particles(SystemSpec& spec) {
  const double m = spec.param("m");
  const double omega = spec.param("omega");
  const double gamma = spec.param("gamma");
  const double kappa = spec.param("kappa");
  const double c = spec.param("coupling");
  const auto n = static_cast<std::size_t>(spec.param("count"));
  const double k = m * omega * omega;

  auto potential = [=](std::span<const double> q) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v += 0.5 * k * q[i] * q[i] + 0.25 * kappa * q[i] * q[i] * q[i] * q[i];
      if (i + 1 < n) v += 0.5 * c * (q[i] - q[i + 1]) * (q[i] - q[i + 1]);
    }
    return v;
  };
  auto force_gradient = [=](std::span<const double> q, std::size_t i) {
    double g = k * q[i] + kappa * q[i] * q[i] * q[i];
    if (i + 1 < n) g += c * (q[i] - q[i + 1]);
    if (i > 0) g -= c * (q[i - 1] - q[i]);
    return g;
  };

  spec.hamiltonian = HamiltonianModel{
      spec.name, n,
      [=](const DarbouxPoint& x) {
        double ke = 0.0;
        for (double p : x.p) ke += p * p / (2.0 * m);
        return ke + potential(x.q) + gamma * x.s;
      },
      [=](const DarbouxPoint&) { return gamma; },
      [=](const DarbouxPoint& x, std::size_t i) { return force_gradient(x.q, i); },
      [=](const DarbouxPoint& x, std::size_t i) { return x.p[i] / m; }};

  std::vector<double> q0(n), p0(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q0[i] = std::pow(-0.5, static_cast<double>(i));
  spec.initial_state = DarbouxPoint(0.0, q0, p0);

  ChartVirial h;
  h.chart = Chart::hamiltonian;
  h.relation = "sum<p_i^2/2m> = (1/2) sum<q^i dV/dq^i> + (1/2) sum<gamma q^i p_i>";
  auto g = std::make_shared<const ObservableModel>(observables::virial(n));
  h.virial = [g, n](const Sample& s) { return g->value(unpack_darboux(s.x, n)); };
  h.rate = contact_rate(*spec.hamiltonian, n);
  h.rate_scale = 0.5;
  h.terms = {
      {"kinetic", 1.0,
       [=](const Sample& s) {
         double v = 0.0;
         for (std::size_t i = 0; i < n; ++i) v += s.x[1 + n + i] * s.x[1 + n + i] / (2.0 * m);
         return v;
       }},
      {"potential_virial", -1.0,
       [=](const Sample& s) {
         const auto q = s.x.subspan(1, n);
         double v = 0.0;
         for (std::size_t i = 0; i < n; ++i) v += q[i] * force_gradient(q, i);
         return 0.5 * v;
       }},
      {"friction", -1.0,
       [=](const Sample& s) {
         double v = 0.0;
         for (std::size_t i = 0; i < n; ++i) v += s.x[1 + i] * s.x[1 + n + i];
         return 0.5 * gamma * v;
       }},
  };
  spec.virials.push_back(std::move(h));
}

void build_parachute(SystemSpec& spec) {
  const double m = spec.param("m");
  const double g = spec.param("g");
  const double lam = spec.param("lambda");
  const double depth = m * g / (2.0 * lam);

  spec.hamiltonian = HamiltonianModel{
      spec.name, 1,
      [=](const DarbouxPoint& x) {
        const double u = x.p[0] - 2.0 * lam * x.s;
        return u * u / (2.0 * m) + depth * (std::exp(2.0 * lam * x.q[0]) - 1.0);
      },
      [=](const DarbouxPoint& x) { return -2.0 * lam * (x.p[0] - 2.0 * lam * x.s) / m; },
      [=](const DarbouxPoint& x, std::size_t) { return m * g * std::exp(2.0 * lam * x.q[0]); },
      [=](const DarbouxPoint& x, std::size_t) { return (x.p[0] - 2.0 * lam * x.s) / m; }};

  spec.lagrangian = LagrangianModel{
      spec.name, 1,
      [=](const LagrangianPoint& z) {
        return 0.5 * m * z.qdot[0] * z.qdot[0] - depth * (std::exp(2.0 * lam * z.q[0]) - 1.0) +
               2.0 * lam * z.qdot[0] * z.s;
      },
      [=](const LagrangianPoint& z) { return 2.0 * lam * z.qdot[0]; },
      [=](const LagrangianPoint& z, std::size_t) { return -m * g * std::exp(2.0 * lam * z.q[0]); },
      [=](const LagrangianPoint& z, std::size_t) { return m * z.qdot[0] + 2.0 * lam * z.s; },
      [=](const LagrangianPoint&, std::size_t, std::size_t) { return m; },
      [](const LagrangianPoint&, std::size_t, std::size_t) { return 0.0; },
      [=](const LagrangianPoint&, std::size_t) { return 2.0 * lam; }};

  spec.initial_state = DarbouxPoint(0.0, {0.0}, {0.0});
  spec.initial_lagrangian = LagrangianPoint({0.0}, {0.0}, 0.0);

  ChartVirial h;
  h.chart = Chart::hamiltonian;
  h.relation =
      "<p(p - 2 lambda s)/m> = -2 lambda <p q (p - 2 lambda s)/m> + m g <q exp(2 lambda q)>";
  h.virial = darboux_virial();
  h.rate = contact_rate(*spec.hamiltonian, 1);
  h.rate_scale = 1.0;
  h.terms = {
      {"momentum_flux", 1.0,
       [=](const Sample& s) { return s.x[kP] * (s.x[kP] - 2.0 * lam * s.x[kS]) / m; }},
      {"drag_virial", 1.0,
       [=](const Sample& s) {
         return 2.0 * lam * s.x[kP] * s.x[kQ] * (s.x[kP] - 2.0 * lam * s.x[kS]) / m;
       }},
      {"gravity_virial", -1.0,
       [=](const Sample& s) { return m * g * s.x[kQ] * std::exp(2.0 * lam * s.x[kQ]); }},
  };
  spec.virials.push_back(std::move(h));

  add_lagrangian_virial(
      spec, m, "<m qdot^2/2> = (1/2)<m g q> - (1/2)<m lambda q qdot^2>",
      {
          {"kinetic", 1.0, [=](const Sample& s) { return 0.5 * m * s.x[kLv] * s.x[kLv]; }},
          {"gravity", -1.0, [=](const Sample& s) { return 0.5 * m * g * s.x[kLq]; }},
          {"drag", 1.0,
           [=](const Sample& s) { return 0.5 * m * lam * s.x[kLq] * s.x[kLv] * s.x[kLv]; }},
      });
}

TimeDependentHamiltonianModel forced_model(std::string name, double m, double omega, double gamma,
                                           double f0, double big_omega) {
  const double k = m * omega * omega;
  return {std::move(name),
          1,
          [=](const ExtendedPoint& y) {
            const auto& x = y.base;
            return x.p[0] * x.p[0] / (2.0 * m) + 0.5 * k * x.q[0] * x.q[0] + gamma * x.s -
                   x.q[0] * f0 * std::cos(big_omega * y.t);
          },
          [=](const ExtendedPoint& y) {
            return y.base.q[0] * f0 * big_omega * std::sin(big_omega * y.t);
          },
          [=](const ExtendedPoint&) { return gamma; },
          [=](const ExtendedPoint& y, std::size_t) {
            return k * y.base.q[0] - f0 * std::cos(big_omega * y.t);
          },
          [=](const ExtendedPoint& y, std::size_t) { return y.base.p[0] / m; }};
}

void build_forced(SystemSpec& spec) {
  const double m = spec.param("m");
  const double omega = spec.param("omega");
  const double gamma = spec.param("gamma");
  const double f0 = spec.param("F0");
  const double big_omega = spec.param("Omega");
  const double k = m * omega * omega;

  spec.default_chart = Chart::extended;
  spec.extended = forced_model(spec.name, m, omega, gamma, f0, big_omega);
  spec.initial_state = DarbouxPoint(0.0, {1.0}, {0.0});

  ChartVirial v;
  v.chart = Chart::extended;
  v.relation = "<p^2/2m> = <m omega^2 q^2/2> - (1/2)<q[-gamma p + F0 cos(Omega t)]>";
  v.virial = darboux_virial();
  v.rate = extended_rate(*spec.extended);
  v.rate_scale = 0.5;
  v.terms = {
      {"kinetic", 1.0, [=](const Sample& s) { return s.x[kP] * s.x[kP] / (2.0 * m); }},
      {"potential", -1.0, [=](const Sample& s) { return 0.5 * k * s.x[kQ] * s.x[kQ]; }},
      {"nonpotential_force", 1.0,
       [=](const Sample& s) {
         return 0.5 * s.x[kQ] * (-gamma * s.x[kP] + f0 * std::cos(big_omega * s.t));
       }},
  };
  spec.virials.push_back(std::move(v));
}

void build_brownian(SystemSpec& spec) {
  const double m = spec.param("m");
  const double omega = spec.param("omega");
  const double gamma = spec.param("gamma");
  const double k = m * omega * omega;

  spec.default_chart = Chart::extended;
  // Deterministic part of the drift; the noise enters through NoiseSpec.
  spec.extended = forced_model(spec.name, m, omega, gamma, 0.0, 1.0);
  spec.noise = NoiseSpec{m, gamma, spec.param("kT"), 0};
  spec.initial_state = DarbouxPoint(0.0, {1.0}, {0.0});

  ChartVirial v;
  v.chart = Chart::extended;
  v.relation = "<p^2/2m> = <m omega^2 q^2/2> - (1/2)<q[-gamma p + eta(t)]>";
  v.virial = darboux_virial();
  auto drift_rate = extended_rate(*spec.extended);
  // Sample aux[0] is the realized noise force of the step starting there.
  v.rate = [drift_rate](const Sample& s) {
    return drift_rate(s) + s.x[kQ] * (s.aux.empty() ? 0.0 : s.aux[0]);
  };
  v.rate_scale = 0.5;
  v.terms = {
      {"kinetic", 1.0, [=](const Sample& s) { return s.x[kP] * s.x[kP] / (2.0 * m); }},
      {"potential", -1.0, [=](const Sample& s) { return 0.5 * k * s.x[kQ] * s.x[kQ]; }},
      {"friction_noise", 1.0,
       [=](const Sample& s) {
         const double eta = s.aux.empty() ? 0.0 : s.aux[0];
         return 0.5 * s.x[kQ] * (-gamma * s.x[kP] + eta);
       },
       Quadrature::left_point},
  };
  spec.virials.push_back(std::move(v));
}

void build_gierer_meinhardt(SystemSpec& spec) {
  const double A = spec.param("A");
  const double B = spec.param("B");
  const double C = spec.param("C");
  const double D = spec.param("D");
  const double K = spec.param("K");

  auto guard = [B](double y) {
    if (!(B + y > 0.0)) {
      std::ostringstream msg;
      msg << "Gierer-Meinhardt: y = " << y << " outside domain y > -B = " << -B;
      throw DomainError(msg.str());
    }
  };

  spec.hamiltonian = HamiltonianModel{
      spec.name, 1,
      [=](const DarbouxPoint& x) {
        guard(x.p[0]);
        return A * std::log(B + x.p[0]) - 0.5 * D * x.q[0] * x.q[0] +
               C * (x.s - x.q[0] * x.p[0]) + K * x.s;
      },
      [=](const DarbouxPoint&) { return C + K; },
      [=](const DarbouxPoint& x, std::size_t) { return -D * x.q[0] - C * x.p[0]; },
      [=](const DarbouxPoint& x, std::size_t) {
        guard(x.p[0]);
        return A / (B + x.p[0]) - C * x.q[0];
      }};

  spec.planar = PlanarConformalModel{
      spec.name + "_planar", -(C + K),
      [=](double x, double y) {
        guard(y);
        return A * std::log(B + y) - 0.5 * D * x * x - C * x * y;
      },
      [=](double x, double y) { return -D * x - C * y; },
      [=](double x, double y) {
        guard(y);
        return A / (B + y) - C * x;
      }};

  if (!(B + 0.2 > 0.0)) {
    throw ParameterError("gierer_meinhardt: default state y = 0.2 violates y > -B");
  }
  spec.initial_state = DarbouxPoint(0.0, {0.2}, {0.2});

  auto terms = [=](std::size_t ix, std::size_t iy) {
    return std::vector<VirialTerm>{
        {"saturation", 1.0, [=](const Sample& s) { return s.x[iy] / (B + s.x[iy]); }},
        {"a_x2", 1.0, [=](const Sample& s) { return D / A * s.x[ix] * s.x[ix]; }},
        {"b_xy", -1.0, [=](const Sample& s) { return (C + K) / A * s.x[ix] * s.x[iy]; }},
    };
  };
  const std::string relation = "<(1 + B/y)^-1> + a<x^2> = b<x y>,  a = D/A, b = (C + K)/A";

  ChartVirial contact;
  contact.chart = Chart::hamiltonian;
  contact.relation = relation;
  contact.virial = darboux_virial();
  contact.rate = contact_rate(*spec.hamiltonian, 1);
  contact.rate_scale = 1.0 / A;
  contact.terms = terms(kQ, kP);
  spec.virials.push_back(std::move(contact));

  auto planar = std::make_shared<const PlanarConformalModel>(*spec.planar);
  ChartVirial pv;
  pv.chart = Chart::planar;
  pv.relation = relation;
  pv.virial = [](const Sample& s) { return s.x[0] * s.x[1]; };
  pv.rate = [planar](const Sample& s) {
    const auto v = planar->field(s.x[0], s.x[1]);
    return v[0] * s.x[1] + s.x[0] * v[1];
  };
  pv.rate_scale = 1.0 / A;
  pv.terms = terms(0, 1);
  spec.virials.push_back(std::move(pv));
}

}  // namespace

SystemSpec make_system(std::string_view name, const ParameterSet& params) {
  const SystemInfo& info = system_info(name);
  SystemSpec spec;
  spec.name = info.name;
  spec.params = resolve_parameters(info, params);

  if (name == "harmonic_oscillator") build_oscillator(spec, false);
  else if (name == "damped_oscillator") build_oscillator(spec, true);
  else if (name == "damped_particles") build_damped_particles(spec);
  else if (name == "parachute") build_parachute(spec);
  else if (name == "forced_oscillator") build_forced(spec);
  else if (name == "brownian_oscillator") build_brownian(spec);
  else if (name == "gierer_meinhardt") build_gierer_meinhardt(spec);

  if (spec.hamiltonian) require_partials(check_partials(*spec.hamiltonian, spec.initial_state));
  if (spec.extended) {
    require_partials(check_partials(*spec.extended, ExtendedPoint{0.3, spec.initial_state}));
  }
  if (spec.lagrangian && spec.initial_lagrangian) {
    require_partials(check_partials(*spec.lagrangian, *spec.initial_lagrangian));
  }
  return spec;
}

ProjectionCheck conformal_projection_check(const SystemSpec& gm, double x, double y, double z) {
  if (gm.name != "gierer_meinhardt" || !gm.hamiltonian || !gm.planar) {
    throw ParameterError("conformal projection check needs the gierer_meinhardt system");
  }
  const double A = gm.param("A"), B = gm.param("B"), C = gm.param("C"), D = gm.param("D"),
               K = gm.param("K");
  if (!(B + y > 0.0)) {
    std::ostringstream msg;
    msg << "Gierer-Meinhardt: y = " << y << " outside domain y > -B = " << -B;
    throw DomainError(msg.str());
  }
  ProjectionCheck out;
  out.planar = gm.planar->field(x, y);
  const TangentVector v = contact_vector_field(*gm.hamiltonian, DarbouxPoint(z, {x}, {y}));
  out.projected = {v.dq[0], v.dp[0]};
  out.z_rate = v.ds;
  out.z_rate_closed = A * (y / (B + y) - std::log(B + y)) + 0.5 * D * x * x - (C + K) * z;
  out.max_abs_difference = std::max(std::abs(out.planar[0] - out.projected[0]),
                                    std::abs(out.planar[1] - out.projected[1]));
  return out;
}

}  // namespace contactdyn
