#pragma once

// Contact geometry in a Darboux chart (s, q^1..q^n, p_1..p_n) with contact
// form eta = ds - p_i dq^i and Reeb field d/ds.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "contactdyn/errors.hpp"

namespace contactdyn {

struct DarbouxPoint {
  double s = 0.0;
  std::vector<double> q;
  std::vector<double> p;

  DarbouxPoint() = default;
  DarbouxPoint(double s_, std::vector<double> q_, std::vector<double> p_);

  std::size_t dim() const noexcept { return q.size(); }

  // Throws DimensionError / NonFiniteError if the invariants are broken.
  void validate() const;
};

struct TangentVector {
  double ds = 0.0;
  std::vector<double> dq;
  std::vector<double> dp;
};

// A smooth function on the contact phase space together with its analytic
// first partials. Used both for contact Hamiltonians and for observables.
struct PhaseFunction {
  using Scalar = std::function<double(const DarbouxPoint&)>;
  using Indexed = std::function<double(const DarbouxPoint&, std::size_t)>;

  std::string name;
  std::size_t n = 1;
  Scalar value;
  Scalar d_s;
  Indexed d_q;
  Indexed d_p;
};

using HamiltonianModel = PhaseFunction;
using ObservableModel = PhaseFunction;

namespace observables {

ObservableModel constant(double c, std::size_t n);
ObservableModel coordinate_s(std::size_t n);
ObservableModel coordinate_q(std::size_t i, std::size_t n);
ObservableModel coordinate_p(std::size_t i, std::size_t n);
// G = sum_i q^i p_i.
ObservableModel virial(std::size_t n);

}  // namespace observables

// X_h at x: ds = p_i dh/dp_i - h, dq^i = dh/dp_i, dp_i = -(dh/dq^i + p_i dh/ds).
TangentVector contact_vector_field(const HamiltonianModel& h, const DarbouxPoint& x);

// xi(h) = dh/ds.
double reeb_derivative(const HamiltonianModel& h, const DarbouxPoint& x);

// Jacobi bracket of the contact structure in Darboux coordinates.
double lagrange_bracket(const ObservableModel& f, const ObservableModel& g,
                        const DarbouxPoint& x);

double poisson_bracket(const ObservableModel& f, const ObservableModel& g,
                       const DarbouxPoint& x);

// X_h(f) = {f, h} - f xi(h).
double apply_field_to_observable(const HamiltonianModel& h, const ObservableModel& f,
                                 const DarbouxPoint& x);

// <grad f, v> through (ds, dq, dp).
double directional_derivative(const ObservableModel& f, const DarbouxPoint& x,
                              const TangentVector& v);

// div X_h = -(n + 1) xi(h).
double divergence(const HamiltonianModel& h, const DarbouxPoint& x);

// Finite-difference oracle for analytic partials.
struct PartialCheck {
  std::string coordinate;  // "s", "q0", "p1", "t", "qdot0", "W01", ...
  double analytic = 0.0;
  double numeric = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  bool passed = false;
  std::string failure;  // non-empty if the evaluation itself failed
};

struct PartialsReport {
  std::string model;
  std::vector<PartialCheck> checks;

  bool passed() const;
  double max_rel_error() const;
};

struct FiniteDifferenceOptions {
  // Per-coordinate step is rel_step * max(1, |x_i|).
  double rel_step = 1e-5;
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
};

// Builds one PartialCheck by comparing `analytic` against the central
// difference (shifted_value(+step) - shifted_value(-step)) / 2 step.
// Evaluation failures are reported in the check, not thrown.
PartialCheck compare_partial(std::string coordinate, const std::function<double()>& analytic,
                             const std::function<double(double)>& shifted_value, double step,
                             const FiniteDifferenceOptions& opts);

PartialsReport check_partials(const PhaseFunction& model, const DarbouxPoint& x,
                              const FiniteDifferenceOptions& opts = {});

}  // namespace contactdyn
