#pragma once

// Contact Lagrangian (Herglotz) dynamics on TQ x R in the chart (q, qdot, s).
//
// A regular Lagrangian L(q, qdot, s) induces the contact form
// eta_L = ds - dL/dqdot^i dq^i. Its dynamical field is
//
//   X_L = L d/ds + qdot^i d/dq^i
//       + W^{ik} (L_{q^k} - L_{q^j qdot^k} qdot^j - L L_{s qdot^k} + L_s L_{qdot^k}) d/dqdot^i
//
// with W_{ij} = d^2 L / dqdot^i dqdot^j. Integral curves solve the
// generalized (action-dependent) Euler-Lagrange equations.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "contactdyn/contact.hpp"

namespace contactdyn {

struct LagrangianPoint {
  std::vector<double> q;
  std::vector<double> qdot;
  double s = 0.0;

  LagrangianPoint() = default;
  LagrangianPoint(std::vector<double> q_, std::vector<double> qdot_, double s_);

  std::size_t dim() const noexcept { return q.size(); }
  void validate() const;
};

struct LagrangianTangent {
  double ds = 0.0;
  std::vector<double> dq;
  std::vector<double> dqdot;
};

struct LagrangianModel {
  using Scalar = std::function<double(const LagrangianPoint&)>;
  using Indexed = std::function<double(const LagrangianPoint&, std::size_t)>;
  using Indexed2 = std::function<double(const LagrangianPoint&, std::size_t, std::size_t)>;

  std::string name;
  std::size_t n = 1;
  Scalar value;
  Scalar d_s;
  Indexed d_q;
  Indexed d_qdot;
  Indexed2 hessian_qdot;  // W_ij
  Indexed2 mixed_q_qdot;  // (j, k) -> d^2 L / dq^j dqdot^k
  Indexed mixed_s_qdot;   // k -> d^2 L / ds dqdot^k
};

// A function on TQ x R with analytic first partials.
struct LagrangianObservable {
  using Scalar = std::function<double(const LagrangianPoint&)>;
  using Indexed = std::function<double(const LagrangianPoint&, std::size_t)>;

  std::string name;
  std::size_t n = 1;
  Scalar value;
  Scalar d_s;
  Indexed d_q;
  Indexed d_qdot;
};

// Below this reciprocal condition number W is treated as singular.
inline constexpr double kRegularityThreshold = 1e-12;

// E_L = qdot^i dL/dqdot^i - L.
double energy(const LagrangianModel& L, const LagrangianPoint& z);

// Reciprocal condition estimate of W at z (1 = perfectly conditioned).
double regularity_rcond(const LagrangianModel& L, const LagrangianPoint& z);

// Throws RegularityError if W is singular at z.
LagrangianTangent lagrangian_field(const LagrangianModel& L, const LagrangianPoint& z);

// (s, q, p_i = dL/dqdot^i).
DarbouxPoint legendre_map(const LagrangianModel& L, const LagrangianPoint& z);

// X_L(f) through the chain rule.
double apply_lagrangian_field(const LagrangianModel& L, const LagrangianObservable& f,
                              const LagrangianPoint& z);

// Oracle check of first partials of L, W and the mixed second partials.
PartialsReport check_partials(const LagrangianModel& L, const LagrangianPoint& z,
                              const FiniteDifferenceOptions& opts = {});

PartialsReport check_partials(const LagrangianObservable& f, const LagrangianPoint& z,
                              const FiniteDifferenceOptions& opts = {});

}  // namespace contactdyn
