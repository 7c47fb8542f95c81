#include "contactdyn/herglotz.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace contactdyn {

LagrangianPoint::LagrangianPoint(std::vector<double> q_, std::vector<double> qdot_, double s_)
    : q(std::move(q_)), qdot(std::move(qdot_)), s(s_) {
  validate();
}

void LagrangianPoint::validate() const {
  if (q.empty() || q.size() != qdot.size()) {
    throw DimensionError("LagrangianPoint: q and qdot must have the same length n >= 1");
  }
  require_finite(s, "s");
  for (double v : q) require_finite(v, "q");
  for (double v : qdot) require_finite(v, "qdot");
}

namespace {

template <class Model>
void check_dim(const Model& m, const LagrangianPoint& z) {
  if (m.n != z.dim()) {
    throw DimensionError("model '" + m.name + "' has n=" + std::to_string(m.n) +
                         " but point has n=" + std::to_string(z.dim()));
  }
}

Eigen::MatrixXd velocity_hessian(const LagrangianModel& L, const LagrangianPoint& z) {
  const auto n = static_cast<Eigen::Index>(z.dim());
  Eigen::MatrixXd w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      w(i, j) = require_finite(L.hessian_qdot(z, static_cast<std::size_t>(i),
                                              static_cast<std::size_t>(j)),
                               "W");
    }
  }
  return w;
}

}  // namespace

double energy(const LagrangianModel& L, const LagrangianPoint& z) {
  check_dim(L, z);
  double e = -require_finite(L.value(z), "L");
  for (std::size_t i = 0; i < z.dim(); ++i) {
    e += z.qdot[i] * require_finite(L.d_qdot(z, i), "dL/dqdot");
  }
  return e;
}

double regularity_rcond(const LagrangianModel& L, const LagrangianPoint& z) {
  check_dim(L, z);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(velocity_hessian(L, z));
  return lu.rcond();
}

LagrangianTangent lagrangian_field(const LagrangianModel& L, const LagrangianPoint& z) {
  check_dim(L, z);
  const std::size_t n = z.dim();
  const Eigen::MatrixXd w = velocity_hessian(L, z);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(w);
  const double rcond = lu.rcond();
  if (!(rcond >= kRegularityThreshold)) {
    std::ostringstream msg;
    msg << "Lagrangian '" << L.name << "' is not regular: rcond(W) = " << rcond;
    throw RegularityError(msg.str(), rcond);
  }

  const double lv = require_finite(L.value(z), "L");
  const double ls = require_finite(L.d_s(z), "dL/ds");
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    double coupling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      coupling += require_finite(L.mixed_q_qdot(z, j, k), "d2L/dq dqdot") * z.qdot[j];
    }
    rhs(static_cast<Eigen::Index>(k)) =
        require_finite(L.d_q(z, k), "dL/dq") - coupling -
        lv * require_finite(L.mixed_s_qdot(z, k), "d2L/ds dqdot") +
        ls * require_finite(L.d_qdot(z, k), "dL/dqdot");
  }
  const Eigen::VectorXd accel = lu.solve(rhs);

  LagrangianTangent v;
  v.ds = lv;
  v.dq = z.qdot;
  v.dqdot.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    v.dqdot[i] = require_finite(accel(static_cast<Eigen::Index>(i)), "qddot");
  }
  return v;
}

DarbouxPoint legendre_map(const LagrangianModel& L, const LagrangianPoint& z) {
  check_dim(L, z);
  std::vector<double> p(z.dim());
  for (std::size_t i = 0; i < z.dim(); ++i) p[i] = require_finite(L.d_qdot(z, i), "dL/dqdot");
  return DarbouxPoint(z.s, z.q, std::move(p));
}

double apply_lagrangian_field(const LagrangianModel& L, const LagrangianObservable& f,
                              const LagrangianPoint& z) {
  check_dim(f, z);
  const LagrangianTangent v = lagrangian_field(L, z);
  double acc = require_finite(f.d_s(z), "df/ds") * v.ds;
  for (std::size_t i = 0; i < z.dim(); ++i) {
    acc += require_finite(f.d_q(z, i), "df/dq") * v.dq[i] +
           require_finite(f.d_qdot(z, i), "df/dqdot") * v.dqdot[i];
  }
  return acc;
}

namespace {

double step_for(const FiniteDifferenceOptions& opts, double x) {
  return opts.rel_step * std::max(1.0, std::abs(x));
}

// Shifts one coordinate of z: kind 0 = q, 1 = qdot, 2 = s.
LagrangianPoint shifted(const LagrangianPoint& z, int kind, std::size_t i, double d) {
  LagrangianPoint y = z;
  if (kind == 0) y.q[i] += d;
  if (kind == 1) y.qdot[i] += d;
  if (kind == 2) y.s += d;
  return y;
}

template <class Model>
void append_first_partials(PartialsReport& report, const Model& m, const LagrangianPoint& z,
                           const FiniteDifferenceOptions& opts) {
  report.checks.push_back(compare_partial(
      "s", [&] { return m.d_s(z); }, [&](double d) { return m.value(shifted(z, 2, 0, d)); },
      step_for(opts, z.s), opts));
  for (std::size_t i = 0; i < z.dim(); ++i) {
    const std::string idx = std::to_string(i);
    report.checks.push_back(compare_partial(
        "q" + idx, [&] { return m.d_q(z, i); },
        [&](double d) { return m.value(shifted(z, 0, i, d)); }, step_for(opts, z.q[i]), opts));
    report.checks.push_back(compare_partial(
        "qdot" + idx, [&] { return m.d_qdot(z, i); },
        [&](double d) { return m.value(shifted(z, 1, i, d)); }, step_for(opts, z.qdot[i]),
        opts));
  }
}

}  // namespace

PartialsReport check_partials(const LagrangianModel& L, const LagrangianPoint& z,
                              const FiniteDifferenceOptions& opts) {
  check_dim(L, z);
  PartialsReport report;
  report.model = L.name;
  append_first_partials(report, L, z, opts);

  const std::size_t n = z.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const std::string kk = std::to_string(k);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string ii = std::to_string(i);
      report.checks.push_back(compare_partial(
          "W" + ii + kk, [&] { return L.hessian_qdot(z, i, k); },
          [&](double d) { return L.d_qdot(shifted(z, 1, i, d), k); }, step_for(opts, z.qdot[i]),
          opts));
      report.checks.push_back(compare_partial(
          "Lq" + ii + "qdot" + kk, [&] { return L.mixed_q_qdot(z, i, k); },
          [&](double d) { return L.d_qdot(shifted(z, 0, i, d), k); }, step_for(opts, z.q[i]),
          opts));
    }
    report.checks.push_back(compare_partial(
        "Ls_qdot" + kk, [&] { return L.mixed_s_qdot(z, k); },
        [&](double d) { return L.d_qdot(shifted(z, 2, 0, d), k); }, step_for(opts, z.s), opts));
  }
  return report;
}

PartialsReport check_partials(const LagrangianObservable& f, const LagrangianPoint& z,
                              const FiniteDifferenceOptions& opts) {
  check_dim(f, z);
  PartialsReport report;
  report.model = f.name;
  append_first_partials(report, f, z, opts);
  return report;
}

}  // namespace contactdyn
