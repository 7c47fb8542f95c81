#pragma once

// Adapters from the geometric models to flat vector fields for the
// integrators, with the state layouts used throughout:
//   contact / extended : (s, q..., p...)   (time is the integrator's t)
//   herglotz           : (q..., qdot..., s)

#include <span>
#include <string>
#include <vector>

#include "contactdyn/contact.hpp"
#include "contactdyn/extended_time.hpp"
#include "contactdyn/herglotz.hpp"
#include "contactdyn/integrate.hpp"

namespace contactdyn {

std::vector<std::string> darboux_components(std::size_t n);
std::vector<std::string> lagrangian_components(std::size_t n);

std::vector<double> pack(const DarbouxPoint& x);
std::vector<double> pack(const LagrangianPoint& z);
DarbouxPoint unpack_darboux(std::span<const double> y, std::size_t n);
LagrangianPoint unpack_lagrangian(std::span<const double> y, std::size_t n);

// The models are copied into the returned field.
VectorField contact_field(const HamiltonianModel& h);
VectorField extended_contact_field(const TimeDependentHamiltonianModel& h);
VectorField herglotz_field(const LagrangianModel& L);

}  // namespace contactdyn
