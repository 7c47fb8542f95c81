#include "contactdyn/fields.hpp"

#include <memory>

namespace contactdyn {

std::vector<std::string> darboux_components(std::size_t n) {
  if (n == 1) return {"s", "q", "p"};
  std::vector<std::string> names{"s"};
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return names;
}

std::vector<std::string> lagrangian_components(std::size_t n) {
  if (n == 1) return {"q", "qdot", "s"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("q" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) names.push_back("qdot" + std::to_string(i));
  names.push_back("s");
  return names;
}

std::vector<double> pack(const DarbouxPoint& x) {
  std::vector<double> y;
  y.reserve(2 * x.dim() + 1);
  y.push_back(x.s);
  y.insert(y.end(), x.q.begin(), x.q.end());
  y.insert(y.end(), x.p.begin(), x.p.end());
  return y;
}

std::vector<double> pack(const LagrangianPoint& z) {
  std::vector<double> y;
  y.reserve(2 * z.dim() + 1);
  y.insert(y.end(), z.q.begin(), z.q.end());
  y.insert(y.end(), z.qdot.begin(), z.qdot.end());
  y.push_back(z.s);
  return y;
}

DarbouxPoint unpack_darboux(std::span<const double> y, std::size_t n) {
  if (y.size() != 2 * n + 1) throw DimensionError("state does not match Darboux layout");
  DarbouxPoint x;
  x.s = y[0];
  x.q.assign(y.begin() + 1, y.begin() + 1 + static_cast<std::ptrdiff_t>(n));
  x.p.assign(y.begin() + 1 + static_cast<std::ptrdiff_t>(n), y.end());
  return x;
}

LagrangianPoint unpack_lagrangian(std::span<const double> y, std::size_t n) {
  if (y.size() != 2 * n + 1) throw DimensionError("state does not match Lagrangian layout");
  LagrangianPoint z;
  z.q.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
  z.qdot.assign(y.begin() + static_cast<std::ptrdiff_t>(n),
                y.begin() + static_cast<std::ptrdiff_t>(2 * n));
  z.s = y[2 * n];
  return z;
}

namespace {

void store(const TangentVector& v, std::span<double> dydt) {
  const std::size_t n = v.dq.size();
  dydt[0] = v.ds;
  for (std::size_t i = 0; i < n; ++i) {
    dydt[1 + i] = v.dq[i];
    dydt[1 + n + i] = v.dp[i];
  }
}

}  // namespace

VectorField contact_field(const HamiltonianModel& h) {
  auto model = std::make_shared<const HamiltonianModel>(h);
  return {h.name, darboux_components(h.n),
          [model](double, std::span<const double> y, std::span<double> dydt) {
            store(contact_vector_field(*model, unpack_darboux(y, model->n)), dydt);
          }};
}

VectorField extended_contact_field(const TimeDependentHamiltonianModel& h) {
  auto model = std::make_shared<const TimeDependentHamiltonianModel>(h);
  return {h.name, darboux_components(h.n),
          [model](double t, std::span<const double> y, std::span<double> dydt) {
            store(evolution_field(*model, ExtendedPoint{t, unpack_darboux(y, model->n)}).base,
                  dydt);
          }};
}

VectorField herglotz_field(const LagrangianModel& L) {
  auto model = std::make_shared<const LagrangianModel>(L);
  return {L.name, lagrangian_components(L.n),
          [model](double, std::span<const double> y, std::span<double> dydt) {
            const std::size_t n = model->n;
            const LagrangianTangent v = lagrangian_field(*model, unpack_lagrangian(y, n));
            for (std::size_t i = 0; i < n; ++i) {
              dydt[i] = v.dq[i];
              dydt[n + i] = v.dqdot[i];
            }
            dydt[2 * n] = v.ds;
          }};
}

}  // namespace contactdyn
