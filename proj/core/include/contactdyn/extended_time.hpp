#pragma once

// Time-dependent contact Hamiltonians on M_c x R with coordinates
// (t, s, q, p). The evolution field is d/dt + X_h with h frozen at t.

#include <cstddef>
#include <functional>
#include <string>

#include "contactdyn/contact.hpp"

namespace contactdyn {

struct ExtendedPoint {
  double t = 0.0;
  DarbouxPoint base;
};

struct TimeDependentHamiltonianModel {
  using Scalar = std::function<double(const ExtendedPoint&)>;
  using Indexed = std::function<double(const ExtendedPoint&, std::size_t)>;

  std::string name;
  std::size_t n = 1;
  Scalar value;
  Scalar d_t;
  Scalar d_s;
  Indexed d_q;
  Indexed d_p;
};

struct ExtendedTangent {
  double dt = 1.0;
  TangentVector base;
};

// The autonomous Hamiltonian x -> h(t, x).
HamiltonianModel freeze_time(const TimeDependentHamiltonianModel& h, double t);

ExtendedTangent evolution_field(const TimeDependentHamiltonianModel& h, const ExtendedPoint& y);

// X_h(f) with h frozen at y.t, for a time-independent observable f.
double apply_evolution_field(const TimeDependentHamiltonianModel& h, const ObservableModel& f,
                             const ExtendedPoint& y);

// Oracle check of all partials including d/dt.
PartialsReport check_partials(const TimeDependentHamiltonianModel& h, const ExtendedPoint& y,
                              const FiniteDifferenceOptions& opts = {});

}  // namespace contactdyn
