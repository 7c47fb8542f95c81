#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contactdyn/errors.hpp"

namespace contactdyn {

// dy/dt = f(t, y) on a flat state vector with named components.
struct VectorField {
  using Eval = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

  std::string name;
  std::vector<std::string> components;
  Eval eval;

  std::size_t dim() const noexcept { return components.size(); }
};

struct TrajectoryMetadata {
  std::string system;
  std::string chart;
  std::map<std::string, double> params;
  std::string integrator;
  double step = 0.0;
  double rel_tol = 0.0;
  double abs_tol = 0.0;
  std::optional<std::uint64_t> seed;
};

// One recorded sample: time, state and auxiliary series (e.g. realized noise).
struct Sample {
  double t = 0.0;
  std::span<const double> x;
  std::span<const double> aux;
};

using SampleFunction = std::function<double(const Sample&)>;

// Time-ordered samples of a state vector, stored row-major.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<std::string> components,
                      std::vector<std::string> aux_names = {});

  // Times must be strictly increasing.
  void append(double t, std::span<const double> x, std::span<const double> aux = {});
  void reserve(std::size_t samples);

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  std::size_t dim() const noexcept { return components_.size(); }
  std::size_t aux_dim() const noexcept { return aux_names_.size(); }

  const std::vector<std::string>& components() const noexcept { return components_; }
  const std::vector<std::string>& aux_names() const noexcept { return aux_names_; }
  const std::vector<double>& times() const noexcept { return times_; }

  double time(std::size_t i) const { return times_.at(i); }
  std::span<const double> state(std::size_t i) const;
  std::span<const double> aux(std::size_t i) const;
  Sample sample(std::size_t i) const { return {time(i), state(i), aux(i)}; }
  Sample back() const { return sample(size() - 1); }

  // Index of a named state component; throws if absent.
  std::size_t index_of(std::string_view component) const;

  void abort(std::string reason) { abort_reason_ = std::move(reason); }
  bool aborted() const noexcept { return abort_reason_.has_value(); }
  const std::optional<std::string>& abort_reason() const noexcept { return abort_reason_; }

  TrajectoryMetadata metadata;

 private:
  std::vector<std::string> components_;
  std::vector<std::string> aux_names_;
  std::vector<double> times_;
  std::vector<double> states_;
  std::vector<double> aux_;
  std::optional<std::string> abort_reason_;
};

struct FixedStepOptions {
  double t0 = 0.0;
  // Record every k-th step; the final state is always recorded.
  std::size_t sample_every = 10;
};

// Classical RK4 over [t0, t0 + horizon]; the last step is shortened to land
// exactly on the horizon. Non-finite states truncate the trajectory and set
// its abort reason.
Trajectory integrate_fixed(const VectorField& field, std::span<const double> x0, double horizon,
                           double dt, const FixedStepOptions& opts = {});

struct AdaptiveOptions {
  double t0 = 0.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  // Dense-output spacing; 0 records every accepted step.
  double sample_interval = 0.0;
  double initial_step = 0.0;  // 0 picks a starting step automatically
  std::size_t max_steps = 50'000'000;
};

// Dormand-Prince 5(4) with a standard step-size controller and the
// method's 4th-order continuous extension for dense sampling.
Trajectory integrate_adaptive(const VectorField& field, std::span<const double> x0,
                              double horizon, const AdaptiveOptions& opts = {});

enum class Quadrature {
  trapezoid,
  left_point,  // sum f(t_i) (t_{i+1} - t_i); pairs a state with the increment that follows it
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Streaming (1/T) integral of a sampled signal.
class AverageAccumulator {
 public:
  explicit AverageAccumulator(Quadrature rule = Quadrature::trapezoid) : rule_(rule) {}

  void add(double t, double value);
  // Appends a later contiguous segment; its first time must equal this one's last.
  void merge(const AverageAccumulator& later);

  double integral() const noexcept { return integral_.value(); }
  double elapsed() const noexcept { return count_ > 0 ? last_t_ - first_t_ : 0.0; }
  std::size_t count() const noexcept { return count_; }
  // Single-sample accumulators report that sample's value.
  double average() const;

 private:
  Quadrature rule_;
  CompensatedSum integral_;
  std::size_t count_ = 0;
  double first_t_ = 0.0;
  double first_v_ = 0.0;
  double last_t_ = 0.0;
  double last_v_ = 0.0;
};

struct AverageWindow {
  double t_begin = -std::numeric_limits<double>::infinity();
  Quadrature rule = Quadrature::trapezoid;
  bool allow_aborted = false;
};

// First sample index with t >= t_begin (up to a relative rounding slack).
std::size_t window_start(const Trajectory& traj, double t_begin);

double time_average(const Trajectory& traj, const SampleFunction& f, const AverageWindow& window = {});

// Ensemble statistic with associative merge (Chan et al. pairwise update).
class RunningStats {
 public:
  void add(double v) noexcept;
  void merge(const RunningStats& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  double variance() const noexcept;  // unbiased
  double standard_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct NamedObservable {
  std::string name;
  SampleFunction f;
};

// Formats with 17 significant digits so every value round-trips.
std::string format_double(double v);

// CSV with header `t,<components>,<aux>,<observables>`; every `stride`-th
// sample plus the last one.
void write_csv(const Trajectory& traj, std::ostream& out,
               const std::vector<NamedObservable>& observables = {}, std::size_t stride = 1);

}  // namespace contactdyn
