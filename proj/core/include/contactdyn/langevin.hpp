#pragma once

// Euler-Maruyama for the Brownian oscillator in the extended contact chart:
//
//   qdot = p/m,  pdot = -gamma p - m omega^2 q + eta(t),
//   sdot = p^2/2m - m omega^2 q^2/2 - gamma s + q eta(t),
//
// with <eta(t) eta(t')> = 2 m gamma kT delta(t - t').

#include <cstdint>

#include "contactdyn/contact.hpp"
#include "contactdyn/integrate.hpp"

namespace contactdyn {

struct NoiseSpec {
  double mass = 1.0;
  double damping = 1.0;
  double kT = 1.0;  // kT = 0 switches the noise off
  std::uint64_t seed = 0;

  // sqrt(2 m gamma kT).
  double amplitude() const;
  void validate() const;
};

struct LangevinOptions {
  double t0 = 0.0;
  // Noise averages need every step recorded; see the "eta" auxiliary series.
  std::size_t sample_every = 1;
};

// State layout (s, q, p) for n = 1. Each recorded sample carries the
// auxiliary value "eta": the realized noise force dW/dt of the step that
// starts at that sample (0 on the final sample). The same increment drives
// p and the q*eta term of s.
Trajectory euler_maruyama_langevin(double omega, const NoiseSpec& noise, const DarbouxPoint& x0,
                                   double horizon, double dt, const LangevinOptions& opts = {});

}  // namespace contactdyn
