#include "contactdyn/report_io.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace contactdyn {

const char* version() { return CONTACTDYN_VERSION; }

namespace {

void kv(std::ostream& out, std::string_view key, std::string_view value) {
  out << key << " = " << value << '\n';
}

void kv(std::ostream& out, std::string_view key, double value) {
  kv(out, key, format_double(value));
}

void kv(std::ostream& out, std::string_view key, std::size_t value) {
  kv(out, key, std::to_string(value));
}

void stat(std::ostream& out, const std::string& prefix, const EnsembleStat& s) {
  kv(out, prefix + ".mean", s.mean);
  kv(out, prefix + ".stderr", s.standard_error);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void write_metadata(const TrajectoryMetadata& meta, std::ostream& out) {
  kv(out, "tool_version", version());
  kv(out, "system", meta.system);
  kv(out, "chart", meta.chart);
  for (const auto& [k, v] : meta.params) kv(out, "param." + k, v);
  kv(out, "integrator", meta.integrator);
  kv(out, "step", meta.step);
  if (meta.integrator == "dopri5") {
    kv(out, "rel_tol", meta.rel_tol);
    kv(out, "abs_tol", meta.abs_tol);
  }
  if (meta.seed) kv(out, "seed", std::to_string(*meta.seed));
}

void write_report(const VirialReport& r, std::ostream& out) {
  out << "# virial report\n";
  write_metadata(r.metadata, out);
  kv(out, "relation", r.relation);
  kv(out, "t_begin", r.t_begin);
  kv(out, "t_end", r.t_end);
  kv(out, "horizon", r.t_end - r.t_begin);
  kv(out, "samples", r.samples);
  kv(out, "stochastic", r.stochastic ? "true" : "false");
  for (const auto& t : r.terms) {
    kv(out, "term." + t.name + ".sign", t.sign);
    kv(out, "term." + t.name + ".average", t.average);
  }
  kv(out, "rate_scale", r.rate_scale);
  kv(out, "rate_average", r.rate_average);
  kv(out, "boundary_term", r.boundary);
  kv(out, "residual_exact", r.residual_exact);
  kv(out, "theorem_residual", r.theorem_residual);
  kv(out, "residual_tolerance", r.residual_tolerance);
  kv(out, "boundedness", to_string(r.boundedness.verdict));
  kv(out, "growth_rate", r.boundedness.growth_rate);
  kv(out, "max_abs_G", r.boundedness.max_abs);
}

void write_report(const EnsembleReport& r, std::ostream& out) {
  out << "# ensemble virial report\n";
  write_metadata(r.metadata, out);
  kv(out, "relation", r.relation);
  kv(out, "n_traj", r.n_traj);
  kv(out, "n_aborted", r.n_aborted);
  kv(out, "horizon", r.horizon);
  kv(out, "t_begin", r.t_begin);
  kv(out, "equipartition", r.equipartition);
  for (const auto& t : r.terms) stat(out, "term." + t.name, t);
  stat(out, "theorem_residual", r.theorem_residual);
  stat(out, "kinetic_minus_potential", r.kinetic_minus_potential);
  stat(out, "noise_virial", r.noise_virial);
  stat(out, "identity_residual", r.identity_residual);
}

void write_running_averages(const SystemSpec& system, const Trajectory& traj, Chart chart,
                            double t_begin, std::ostream& out, std::size_t stride) {
  const ChartVirial& cv = system.virial(chart);
  const std::size_t first = window_start(traj, t_begin);
  if (first + 1 >= traj.size()) {
    throw IntegrationError("averaging window contains fewer than two samples");
  }
  stride = std::max<std::size_t>(1, stride);
  bool any_left = false;
  out << 't';
  std::vector<AverageAccumulator> acc;
  for (const auto& t : cv.terms) {
    out << ',' << t.name;
    acc.emplace_back(t.rule);
    any_left = any_left || t.rule == Quadrature::left_point;
  }
  out << ",rate,boundary\n";
  AverageAccumulator rate(any_left ? Quadrature::left_point : Quadrature::trapezoid);

  const Sample s0 = traj.sample(first);
  const double g0 = cv.virial(s0);
  for (std::size_t i = first; i < traj.size(); ++i) {
    const Sample s = traj.sample(i);
    for (std::size_t k = 0; k < cv.terms.size(); ++k) acc[k].add(s.t, cv.terms[k].value(s));
    rate.add(s.t, cv.rate(s));
    const std::size_t j = i - first;
    if (j == 0 || (j % stride != 0 && i + 1 != traj.size())) continue;
    out << format_double(s.t);
    for (const auto& a : acc) out << ',' << format_double(a.average());
    out << ',' << format_double(rate.average()) << ','
        << format_double((cv.virial(s) - g0) / (s.t - s0.t)) << '\n';
  }
}

KeyValues read_key_values(std::istream& in) {
  KeyValues out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParameterError("report line without '=': " + t);
    out.emplace_back(trim(std::string_view(t).substr(0, eq)),
                     trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

const std::string& lookup(const KeyValues& kv, std::string_view key) {
  for (const auto& [k, v] : kv) {
    if (k == key) return v;
  }
  throw ParameterError("report has no key '" + std::string(key) + "'");
}

}  // namespace contactdyn
