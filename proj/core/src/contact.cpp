#include "contactdyn/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace contactdyn {

double require_finite(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw NonFiniteError(std::string("non-finite value for ") + what);
  }
  return value;
}

DarbouxPoint::DarbouxPoint(double s_, std::vector<double> q_, std::vector<double> p_)
    : s(s_), q(std::move(q_)), p(std::move(p_)) {
  validate();
}

void DarbouxPoint::validate() const {
  if (q.empty() || q.size() != p.size()) {
    throw DimensionError("DarbouxPoint: q and p must have the same length n >= 1 (got " +
                         std::to_string(q.size()) + " and " + std::to_string(p.size()) + ")");
  }
  require_finite(s, "s");
  for (double v : q) require_finite(v, "q");
  for (double v : p) require_finite(v, "p");
}

namespace {

void check_dim(const PhaseFunction& f, const DarbouxPoint& x) {
  if (f.n != x.dim()) {
    throw DimensionError("model '" + f.name + "' has n=" + std::to_string(f.n) +
                         " but point has n=" + std::to_string(x.dim()));
  }
}

}  // namespace

namespace observables {

ObservableModel constant(double c, std::size_t n) {
  return {"constant", n, [c](const DarbouxPoint&) { return c; },
          [](const DarbouxPoint&) { return 0.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; }};
}

ObservableModel coordinate_s(std::size_t n) {
  return {"s", n, [](const DarbouxPoint& x) { return x.s; },
          [](const DarbouxPoint&) { return 1.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; }};
}

ObservableModel coordinate_q(std::size_t i, std::size_t n) {
  return {"q" + std::to_string(i), n, [i](const DarbouxPoint& x) { return x.q[i]; },
          [](const DarbouxPoint&) { return 0.0; },
          [i](const DarbouxPoint&, std::size_t k) { return k == i ? 1.0 : 0.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; }};
}

ObservableModel coordinate_p(std::size_t i, std::size_t n) {
  return {"p" + std::to_string(i), n, [i](const DarbouxPoint& x) { return x.p[i]; },
          [](const DarbouxPoint&) { return 0.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; },
          [i](const DarbouxPoint&, std::size_t k) { return k == i ? 1.0 : 0.0; }};
}

ObservableModel virial(std::size_t n) {
  return {"G",
          n,
          [](const DarbouxPoint& x) {
            double g = 0.0;
            for (std::size_t i = 0; i < x.dim(); ++i) g += x.q[i] * x.p[i];
            return g;
          },
          [](const DarbouxPoint&) { return 0.0; },
          [](const DarbouxPoint& x, std::size_t i) { return x.p[i]; },
          [](const DarbouxPoint& x, std::size_t i) { return x.q[i]; }};
}

}  // namespace observables

TangentVector contact_vector_field(const HamiltonianModel& h, const DarbouxPoint& x) {
  check_dim(h, x);
  const std::size_t n = x.dim();
  const double hv = require_finite(h.value(x), "h");
  const double hs = require_finite(h.d_s(x), "dh/ds");

  TangentVector v;
  v.dq.resize(n);
  v.dp.resize(n);
  double p_dot_hp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double hp = require_finite(h.d_p(x, i), "dh/dp");
    const double hq = require_finite(h.d_q(x, i), "dh/dq");
    p_dot_hp += x.p[i] * hp;
    v.dq[i] = hp;
    v.dp[i] = -(hq + x.p[i] * hs);
  }
  v.ds = p_dot_hp - hv;
  return v;
}

double reeb_derivative(const HamiltonianModel& h, const DarbouxPoint& x) {
  check_dim(h, x);
  return require_finite(h.d_s(x), "dh/ds");
}

double lagrange_bracket(const ObservableModel& f, const ObservableModel& g,
                        const DarbouxPoint& x) {
  check_dim(f, x);
  check_dim(g, x);
  const double fv = require_finite(f.value(x), "f");
  const double gv = require_finite(g.value(x), "g");
  const double fs = require_finite(f.d_s(x), "df/ds");
  const double gs = require_finite(g.d_s(x), "dg/ds");

  double reeb_part = 0.0;
  double poisson_part = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double fp = require_finite(f.d_p(x, i), "df/dp");
    const double gp = require_finite(g.d_p(x, i), "dg/dp");
    const double fq = require_finite(f.d_q(x, i), "df/dq");
    const double gq = require_finite(g.d_q(x, i), "dg/dq");
    reeb_part += x.p[i] * (fs * gp - fp * gs);
    poisson_part += fq * gp - fp * gq;
  }
  return fv * gs - fs * gv + reeb_part + poisson_part;
}

double poisson_bracket(const ObservableModel& f, const ObservableModel& g,
                       const DarbouxPoint& x) {
  check_dim(f, x);
  check_dim(g, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    acc += require_finite(f.d_q(x, i), "df/dq") * require_finite(g.d_p(x, i), "dg/dp") -
           require_finite(f.d_p(x, i), "df/dp") * require_finite(g.d_q(x, i), "dg/dq");
  }
  return acc;
}

double apply_field_to_observable(const HamiltonianModel& h, const ObservableModel& f,
                                 const DarbouxPoint& x) {
  return lagrange_bracket(f, h, x) - require_finite(f.value(x), "f") * reeb_derivative(h, x);
}

double directional_derivative(const ObservableModel& f, const DarbouxPoint& x,
                              const TangentVector& v) {
  check_dim(f, x);
  if (v.dq.size() != x.dim() || v.dp.size() != x.dim()) {
    throw DimensionError("tangent vector dimension does not match point");
  }
  double acc = require_finite(f.d_s(x), "df/ds") * v.ds;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    acc += require_finite(f.d_q(x, i), "df/dq") * v.dq[i] +
           require_finite(f.d_p(x, i), "df/dp") * v.dp[i];
  }
  return acc;
}

double divergence(const HamiltonianModel& h, const DarbouxPoint& x) {
  return -static_cast<double>(x.dim() + 1) * reeb_derivative(h, x);
}

bool PartialsReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PartialCheck& c) { return c.passed; });
}

double PartialsReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.rel_error);
  return m;
}

PartialCheck compare_partial(std::string coordinate, const std::function<double()>& analytic,
                             const std::function<double(double)>& shifted_value, double step,
                             const FiniteDifferenceOptions& opts) {
  PartialCheck c;
  c.coordinate = std::move(coordinate);
  try {
    c.analytic = analytic();
    const double plus = shifted_value(step);
    const double minus = shifted_value(-step);
    c.numeric = (plus - minus) / (2.0 * step);
  } catch (const std::exception& e) {
    c.failure = e.what();
    c.rel_error = std::numeric_limits<double>::infinity();
    return c;
  }
  if (!std::isfinite(c.analytic) || !std::isfinite(c.numeric)) {
    c.failure = "non-finite evaluation";
    c.rel_error = std::numeric_limits<double>::infinity();
    return c;
  }
  c.abs_error = std::abs(c.analytic - c.numeric);
  const double scale = std::abs(c.numeric);
  c.rel_error = scale > 0.0 ? c.abs_error / scale
                            : (c.abs_error > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  c.passed = c.abs_error <= opts.abs_tol || c.rel_error <= opts.rel_tol;
  return c;
}

PartialsReport check_partials(const PhaseFunction& model, const DarbouxPoint& x,
                              const FiniteDifferenceOptions& opts) {
  check_dim(model, x);
  PartialsReport report;
  report.model = model.name;
  auto step_for = [&](double xi) { return opts.rel_step * std::max(1.0, std::abs(xi)); };

  report.checks.push_back(compare_partial(
      "s", [&] { return model.d_s(x); },
      [&](double d) {
        DarbouxPoint y = x;
        y.s += d;
        return model.value(y);
      },
      step_for(x.s), opts));
  for (std::size_t i = 0; i < x.dim(); ++i) {
    report.checks.push_back(compare_partial(
        "q" + std::to_string(i), [&] { return model.d_q(x, i); },
        [&](double d) {
          DarbouxPoint y = x;
          y.q[i] += d;
          return model.value(y);
        },
        step_for(x.q[i]), opts));
    report.checks.push_back(compare_partial(
        "p" + std::to_string(i), [&] { return model.d_p(x, i); },
        [&](double d) {
          DarbouxPoint y = x;
          y.p[i] += d;
          return model.value(y);
        },
        step_for(x.p[i]), opts));
  }
  return report;
}

}  // namespace contactdyn
