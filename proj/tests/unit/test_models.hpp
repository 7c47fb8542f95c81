#pragma once

// Small models and samplers shared by the unit tests.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <contactdyn/contact.hpp>
#include <contactdyn/systems.hpp>

namespace testing_models {

using contactdyn::DarbouxPoint;
using contactdyn::HamiltonianModel;
using contactdyn::ObservableModel;

inline HamiltonianModel free_particle(double m = 1.0) {
  return {"free_particle", 1,
          [m](const DarbouxPoint& x) { return x.p[0] * x.p[0] / (2.0 * m); },
          [](const DarbouxPoint&) { return 0.0; },
          [](const DarbouxPoint&, std::size_t) { return 0.0; },
          [m](const DarbouxPoint& x, std::size_t) { return x.p[0] / m; }};
}

// f = c0 + c1 s + sum_i (c2 q_i + c3 p_i + c4 s q_i + c5 q_i p_i^2 + c6 s^2 p_i + c7 q_i^3)
struct Polynomial {
  std::vector<double> c;

  ObservableModel model(std::size_t n) const {
    const auto k = c;
    return {"polynomial", n,
            [k](const DarbouxPoint& x) {
              double f = k[0] + k[1] * x.s;
              for (std::size_t i = 0; i < x.dim(); ++i) {
                const double q = x.q[i], p = x.p[i];
                f += k[2] * q + k[3] * p + k[4] * x.s * q + k[5] * q * p * p +
                     k[6] * x.s * x.s * p + k[7] * q * q * q;
              }
              return f;
            },
            [k](const DarbouxPoint& x) {
              double f = k[1];
              for (std::size_t i = 0; i < x.dim(); ++i) {
                f += k[4] * x.q[i] + 2.0 * k[6] * x.s * x.p[i];
              }
              return f;
            },
            [k](const DarbouxPoint& x, std::size_t i) {
              const double q = x.q[i], p = x.p[i];
              return k[2] + k[4] * x.s + k[5] * p * p + 3.0 * k[7] * q * q;
            },
            [k](const DarbouxPoint& x, std::size_t i) {
              return k[3] + 2.0 * k[5] * x.q[i] * x.p[i] + k[6] * x.s * x.s;
            }};
  }
};

inline Polynomial random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Polynomial poly;
  for (int i = 0; i < 8; ++i) poly.c.push_back(u(rng));
  return poly;
}

// Uniform perturbation of a base point by up to `spread` in every coordinate.
inline DarbouxPoint jitter(const DarbouxPoint& base, std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  DarbouxPoint x = base;
  x.s += u(rng);
  for (double& v : x.q) v += u(rng);
  for (double& v : x.p) v += u(rng);
  return x;
}

// Every catalog system with an autonomous contact Hamiltonian.
inline std::vector<contactdyn::SystemSpec> hamiltonian_systems() {
  std::vector<contactdyn::SystemSpec> out;
  for (const auto& info : contactdyn::catalog()) {
    auto spec = contactdyn::make_system(info.name);
    if (spec.hamiltonian) out.push_back(std::move(spec));
  }
  return out;
}

inline bool close_rel(double a, double b, double rel, double scale = 0.0) {
  const double ref = std::max({std::abs(a), std::abs(b), scale});
  return std::abs(a - b) <= rel * ref || a == b;
}

}  // namespace testing_models
