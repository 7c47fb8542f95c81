#include "contactdyn/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace contactdyn {

Trajectory::Trajectory(std::vector<std::string> components, std::vector<std::string> aux_names)
    : components_(std::move(components)), aux_names_(std::move(aux_names)) {
  if (components_.empty()) throw DimensionError("trajectory needs at least one component");
}

void Trajectory::reserve(std::size_t samples) {
  times_.reserve(samples);
  states_.reserve(samples * dim());
  aux_.reserve(samples * aux_dim());
}

void Trajectory::append(double t, std::span<const double> x, std::span<const double> aux) {
  if (x.size() != dim()) throw DimensionError("trajectory sample has wrong state dimension");
  if (!aux.empty() && aux.size() != aux_dim()) {
    throw DimensionError("trajectory sample has wrong auxiliary dimension");
  }
  if (!times_.empty() && !(t > times_.back())) {
    throw IntegrationError("trajectory times must be strictly increasing");
  }
  times_.push_back(t);
  states_.insert(states_.end(), x.begin(), x.end());
  if (aux.empty()) {
    aux_.insert(aux_.end(), aux_dim(), 0.0);
  } else {
    aux_.insert(aux_.end(), aux.begin(), aux.end());
  }
}

std::span<const double> Trajectory::state(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("trajectory sample index");
  return {states_.data() + i * dim(), dim()};
}

std::span<const double> Trajectory::aux(std::size_t i) const {
  if (i >= size()) throw std::out_of_range("trajectory sample index");
  return {aux_.data() + i * aux_dim(), aux_dim()};
}

std::size_t Trajectory::index_of(std::string_view component) const {
  const auto it = std::find(components_.begin(), components_.end(), component);
  if (it == components_.end()) {
    throw DimensionError("trajectory has no component '" + std::string(component) + "'");
  }
  return static_cast<std::size_t>(it - components_.begin());
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_start(const VectorField& field, std::span<const double> x0, double horizon) {
  if (x0.size() != field.dim()) {
    throw DimensionError("initial state has dimension " + std::to_string(x0.size()) +
                         " but field '" + field.name + "' has " + std::to_string(field.dim()));
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw IntegrationError("integration horizon must be positive and finite");
  }
  if (!all_finite(x0)) throw NonFiniteError("initial state is not finite");
}

Trajectory start_trajectory(const VectorField& field, std::span<const double> x0, double t0) {
  Trajectory traj(field.components);
  traj.metadata.system = field.name;
  traj.append(t0, x0);
  return traj;
}

}  // namespace

Trajectory integrate_fixed(const VectorField& field, std::span<const double> x0, double horizon,
                           double dt, const FixedStepOptions& opts) {
  check_start(field, x0, horizon);
  if (!(dt > 0.0) || dt > horizon) throw IntegrationError("step must satisfy 0 < dt <= horizon");
  const std::size_t every = std::max<std::size_t>(1, opts.sample_every);

  Trajectory traj = start_trajectory(field, x0, opts.t0);
  traj.metadata.integrator = "rk4";
  traj.metadata.step = dt;
  traj.reserve(static_cast<std::size_t>(horizon / dt) / every + 2);

  const std::size_t n = field.dim();
  std::vector<double> y(x0.begin(), x0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  const double t_end = opts.t0 + horizon;
  const double slack = 1e-9 * dt;

  double t = opts.t0;
  for (std::size_t k = 1;; ++k) {
    double t_next = opts.t0 + static_cast<double>(k) * dt;
    const bool last = t_next >= t_end - slack;
    if (last) t_next = t_end;
    const double h = t_next - t;

    try {
      field.eval(t, y, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      field.eval(t + 0.5 * h, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      field.eval(t + 0.5 * h, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
      field.eval(t_next, tmp, k4);
    } catch (const Error& e) {
      if (t > traj.times().back()) traj.append(t, y);
      traj.abort("field evaluation failed at t=" + format_double(t) + ": " + e.what());
      return traj;
    }
    for (std::size_t i = 0; i < n; ++i) {
      tmp[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    if (!all_finite(tmp)) {
      if (t > traj.times().back()) traj.append(t, y);
      traj.abort("non-finite state at t=" + format_double(t_next));
      return traj;
    }
    y.swap(tmp);
    t = t_next;
    if (last || k % every == 0) traj.append(t, y);
    if (last) break;
  }
  return traj;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

struct ScaledNorm {
  double rel, abs;
  double operator()(std::span<const double> v, std::span<const double> y1,
                    std::span<const double> y2) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double sc = abs + rel * std::max(std::abs(y1[i]), std::abs(y2[i]));
      acc += (v[i] / sc) * (v[i] / sc);
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
  }
};

}  // namespace

Trajectory integrate_adaptive(const VectorField& field, std::span<const double> x0,
                              double horizon, const AdaptiveOptions& opts) {
  check_start(field, x0, horizon);
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) {
    throw IntegrationError("tolerances must be positive");
  }
  if (opts.sample_interval < 0.0) throw IntegrationError("sample interval must be >= 0");

  Trajectory traj = start_trajectory(field, x0, opts.t0);
  traj.metadata.integrator = "dopri5";
  traj.metadata.rel_tol = opts.rel_tol;
  traj.metadata.abs_tol = opts.abs_tol;
  traj.metadata.step = opts.sample_interval;
  if (opts.sample_interval > 0.0) {
    traj.reserve(static_cast<std::size_t>(horizon / opts.sample_interval) + 2);
  }

  const std::size_t n = field.dim();
  const ScaledNorm norm{opts.rel_tol, opts.abs_tol};
  const double t_end = opts.t0 + horizon;
  const double h_min = 1e-12 * horizon;

  std::vector<double> y(x0.begin(), x0.end()), y_new(n), tmp(n), err(n), dense(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  double t = opts.t0;

  try {
    field.eval(t, y, k1);
  } catch (const Error& e) {
    traj.abort(std::string("field evaluation failed at start: ") + e.what());
    return traj;
  }

  double h = opts.initial_step;
  if (!(h > 0.0)) {
    const double d0 = norm(y, y, y);
    const double d1n = norm(k1, y, y);
    double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h0 = std::min(h0, horizon);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h0 * k1[i];
    try {
      field.eval(t + h0, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) err[i] = k2[i] - k1[i];
      const double d2 = norm(err, y, y) / h0;
      const double dm = std::max(d1n, d2);
      const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
      h = std::min(100.0 * h0, h1);
    } catch (const Error&) {
      h = h0 * 1e-3;
    }
  }
  h = std::min(h, horizon);

  std::size_t next_sample = 1;
  bool rejected_last = false;
  std::string last_failure;

  for (std::size_t step = 0; t < t_end; ++step) {
    if (step >= opts.max_steps) {
      traj.abort("maximum number of steps exceeded at t=" + format_double(t));
      return traj;
    }
    bool last = false;
    if (t + h >= t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
      h = t_end - t;
      last = true;
    }

    bool ok = true;
    double err_norm = 0.0;
    try {
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
      field.eval(t + c2 * h, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      field.eval(t + c3 * h, tmp, k3);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      field.eval(t + c4 * h, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      field.eval(t + c5 * h, tmp, k5);
      for (std::size_t i = 0; i < n; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      field.eval(t + h, tmp, k6);
      for (std::size_t i = 0; i < n; ++i)
        y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      field.eval(t + h, y_new, k7);
      for (std::size_t i = 0; i < n; ++i) {
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      }
      err_norm = norm(err, y, y_new);
      ok = std::isfinite(err_norm) && all_finite(y_new) && all_finite(k7);
      if (!ok) last_failure = "non-finite stage";
    } catch (const Error& e) {
      ok = false;
      last_failure = e.what();
    }

    if (ok && err_norm <= 1.0) {
      const double t_new = last ? t_end : t + h;
      if (opts.sample_interval > 0.0) {
        const double slack = 1e-12 * std::max(1.0, std::abs(t_new));
        for (;;) {
          const double ts = opts.t0 + static_cast<double>(next_sample) * opts.sample_interval;
          if (ts > t_new + slack) break;
          ++next_sample;
          if (std::abs(ts - t_new) <= slack) {
            traj.append(t_new, y_new);
            break;
          }
          const double theta = (ts - t) / h;
          const double theta1 = 1.0 - theta;
          for (std::size_t i = 0; i < n; ++i) {
            const double ydiff = y_new[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            const double r4 = ydiff - h * k7[i] - bspl;
            const double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                   d6 * k6[i] + d7 * k7[i]);
            dense[i] = y[i] + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
          }
          traj.append(ts, dense);
        }
        if (last && traj.times().back() < t_new) traj.append(t_new, y_new);
      } else {
        traj.append(t_new, y_new);
      }
      t = t_new;
      y.swap(y_new);
      k1.swap(k7);
      double fac = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
      fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 5.0);
      h *= fac;
      rejected_last = false;
    } else {
      const double fac =
          ok ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0) : 0.2;
      h *= fac;
      rejected_last = true;
    }
    if (t < t_end && (h < h_min || !(t + h > t))) {
      traj.abort("step underflow at t=" + format_double(t) +
                 (last_failure.empty() ? std::string() : " (" + last_failure + ")"));
      return traj;
    }
  }
  return traj;
}

void CompensatedSum::add(double v) noexcept {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

void AverageAccumulator::add(double t, double value) {
  if (count_ == 0) {
    first_t_ = t;
    first_v_ = value;
  } else {
    if (!(t > last_t_)) throw IntegrationError("average samples must have increasing times");
    const double dt = t - last_t_;
    if (rule_ == Quadrature::trapezoid) {
      integral_.add(0.5 * dt * (last_v_ + value));
    } else {
      integral_.add(dt * last_v_);
    }
  }
  last_t_ = t;
  last_v_ = value;
  ++count_;
}

void AverageAccumulator::merge(const AverageAccumulator& later) {
  if (later.count_ == 0) return;
  if (count_ == 0) {
    *this = later;
    return;
  }
  if (later.rule_ != rule_) throw IntegrationError("cannot merge accumulators with different rules");
  if (later.first_t_ != last_t_) {
    throw IntegrationError("merged accumulator segments must share their boundary sample");
  }
  integral_.add(later.integral());
  last_t_ = later.last_t_;
  last_v_ = later.last_v_;
  count_ += later.count_ - 1;
}

double AverageAccumulator::average() const {
  if (count_ == 0) throw IntegrationError("average of an empty accumulator");
  if (count_ == 1) return first_v_;
  return integral() / elapsed();
}

std::size_t window_start(const Trajectory& traj, double t_begin) {
  const auto& ts = traj.times();
  if (!std::isfinite(t_begin)) return 0;
  const double slack = 1e-9 * std::max(1.0, std::abs(t_begin));
  const auto it = std::lower_bound(ts.begin(), ts.end(), t_begin - slack);
  return static_cast<std::size_t>(it - ts.begin());
}

double time_average(const Trajectory& traj, const SampleFunction& f, const AverageWindow& window) {
  if (traj.empty()) throw IntegrationError("time average of an empty trajectory");
  if (traj.aborted() && !window.allow_aborted) {
    throw IntegrationError("time average of an aborted trajectory: " + *traj.abort_reason());
  }
  const std::size_t first = window_start(traj, window.t_begin);
  if (first + 1 >= traj.size()) {
    throw IntegrationError("averaging window contains fewer than two samples");
  }
  AverageAccumulator acc(window.rule);
  for (std::size_t i = first; i < traj.size(); ++i) {
    const Sample s = traj.sample(i);
    acc.add(s.t, f(s));
  }
  return acc.average();
}

void RunningStats::add(double v) noexcept {
  ++n_;
  const double delta = v - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (v - mean_);
}

void RunningStats::merge(const RunningStats& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double RunningStats::variance() const noexcept {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

double RunningStats::standard_error() const noexcept {
  return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const Trajectory& traj, std::ostream& out,
               const std::vector<NamedObservable>& observables, std::size_t stride) {
  stride = std::max<std::size_t>(1, stride);
  out << 't';
  for (const auto& c : traj.components()) out << ',' << c;
  for (const auto& c : traj.aux_names()) out << ',' << c;
  for (const auto& o : observables) out << ',' << o.name;
  out << '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    if (i % stride != 0 && i + 1 != traj.size()) continue;
    const Sample s = traj.sample(i);
    out << format_double(s.t);
    for (double v : s.x) out << ',' << format_double(v);
    for (double v : s.aux) out << ',' << format_double(v);
    for (const auto& o : observables) out << ',' << format_double(o.f(s));
    out << '\n';
  }
}

}  // namespace contactdyn
