#include "contactdyn/langevin.hpp"

#include <cmath>
#include <random>

namespace contactdyn {

double NoiseSpec::amplitude() const { return std::sqrt(2.0 * mass * damping * kT); }

void NoiseSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("noise: mass must be > 0");
  if (!(damping > 0.0) || !std::isfinite(damping)) {
    throw ParameterError("noise: damping must be > 0");
  }
  if (!(kT >= 0.0) || !std::isfinite(kT)) throw ParameterError("noise: kT must be >= 0");
}

Trajectory euler_maruyama_langevin(double omega, const NoiseSpec& noise, const DarbouxPoint& x0,
                                   double horizon, double dt, const LangevinOptions& opts) {
  noise.validate();
  x0.validate();
  if (x0.dim() != 1) throw DimensionError("Brownian oscillator is one-dimensional");
  if (!(omega > 0.0)) throw ParameterError("omega must be > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw IntegrationError("integration horizon must be positive and finite");
  }
  if (!(dt > 0.0) || dt > horizon) throw IntegrationError("step must satisfy 0 < dt <= horizon");
  if (!(noise.damping * dt < 0.1)) {
    throw IntegrationError("Euler-Maruyama guard violated: gamma * dt must be < 0.1");
  }

  const double m = noise.mass;
  const double gamma = noise.damping;
  const double k = m * omega * omega;
  const double sigma = noise.amplitude();
  const std::size_t every = std::max<std::size_t>(1, opts.sample_every);

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Trajectory traj({"s", "q", "p"}, {"eta"});
  traj.metadata.integrator = "euler-maruyama";
  traj.metadata.step = dt;
  traj.metadata.seed = noise.seed;
  traj.reserve(static_cast<std::size_t>(horizon / dt) / every + 2);

  double s = x0.s, q = x0.q[0], p = x0.p[0];
  double t = opts.t0;
  const double t_end = opts.t0 + horizon;
  const double slack = 1e-9 * dt;
  double pending_t = t;
  double pending[3] = {s, q, p};

  for (std::size_t step = 1;; ++step) {
    double t_next = opts.t0 + static_cast<double>(step) * dt;
    const bool last = t_next >= t_end - slack;
    if (last) t_next = t_end;
    const double h = t_next - t;

    const double dw = sigma * std::sqrt(h) * normal(rng);
    const double eta = dw / h;
    if ((step - 1) % every == 0) {
      const double aux[1] = {eta};
      traj.append(pending_t, pending, aux);
    }

    const double s_new = s + h * (p * p / (2.0 * m) - 0.5 * k * q * q - gamma * s) + q * dw;
    const double q_new = q + h * p / m;
    const double p_new = p + h * (-gamma * p - k * q) + dw;
    if (!std::isfinite(s_new) || !std::isfinite(q_new) || !std::isfinite(p_new)) {
      traj.abort("non-finite state at t=" + format_double(t_next));
      return traj;
    }
    s = s_new;
    q = q_new;
    p = p_new;
    t = t_next;
    pending_t = t;
    pending[0] = s;
    pending[1] = q;
    pending[2] = p;
    if (last) {
      const double aux[1] = {0.0};
      traj.append(t, pending, aux);
      break;
    }
  }
  return traj;
}

}  // namespace contactdyn
