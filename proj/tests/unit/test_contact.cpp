#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include <contactdyn/contact.hpp>
#include <contactdyn/systems.hpp>

#include "test_models.hpp"

using namespace contactdyn;
using testing_models::close_rel;

namespace {

const SystemSpec& damped() {
  static const SystemSpec s = make_system("damped_oscillator", {{"m", 1}, {"omega", 1}, {"gamma", 0.1}});
  return s;
}

const SystemSpec& parachute() {
  static const SystemSpec s = make_system("parachute", {{"m", 1}, {"g", 10}, {"lambda", 0.5}});
  return s;
}

// Trace of the central-difference Jacobian of X_h.
double jacobian_trace(const HamiltonianModel& h, const DarbouxPoint& x, double step = 1e-5) {
  const std::size_t n = x.dim();
  double trace = 0.0;
  auto component = [&](const DarbouxPoint& y, std::size_t k) {
    const TangentVector v = contact_vector_field(h, y);
    if (k == 0) return v.ds;
    if (k <= n) return v.dq[k - 1];
    return v.dp[k - 1 - n];
  };
  for (std::size_t k = 0; k < 2 * n + 1; ++k) {
    DarbouxPoint plus = x, minus = x;
    auto coord = [&](DarbouxPoint& y) -> double& {
      if (k == 0) return y.s;
      if (k <= n) return y.q[k - 1];
      return y.p[k - 1 - n];
    };
    coord(plus) += step;
    coord(minus) -= step;
    trace += (component(plus, k) - component(minus, k)) / (2.0 * step);
  }
  return trace;
}

}  // namespace

TEST(DarbouxPoint, RejectsMismatchedAndNonFinite) {
  EXPECT_THROW(DarbouxPoint(0.0, {1.0, 2.0}, {1.0}), DimensionError);
  EXPECT_THROW(DarbouxPoint(0.0, {}, {}), DimensionError);
  EXPECT_THROW(DarbouxPoint(std::nan(""), {1.0}, {1.0}), NonFiniteError);
  EXPECT_THROW(DarbouxPoint(0.0, {std::numeric_limits<double>::infinity()}, {1.0}),
               NonFiniteError);
  EXPECT_EQ(DarbouxPoint(0.0, {1.0, 2.0}, {3.0, 4.0}).dim(), 2u);
}

TEST(ContactVectorField, FreeParticle) {
  const auto v = contact_vector_field(testing_models::free_particle(), {0.0, {0.0}, {1.0}});
  EXPECT_DOUBLE_EQ(v.ds, 0.5);
  EXPECT_DOUBLE_EQ(v.dq[0], 1.0);
  EXPECT_DOUBLE_EQ(v.dp[0], 0.0);
}

TEST(ContactVectorField, DampedOscillator) {
  const auto v = contact_vector_field(*damped().hamiltonian, {0.0, {1.0}, {2.0}});
  EXPECT_NEAR(v.ds, 1.5, 1e-15);
  EXPECT_NEAR(v.dq[0], 2.0, 1e-15);
  EXPECT_NEAR(v.dp[0], -1.2, 1e-15);
}

TEST(ContactVectorField, ParachuteFreeFallOnset) {
  const auto v = contact_vector_field(*parachute().hamiltonian, {0.0, {0.0}, {0.0}});
  EXPECT_NEAR(v.ds, 0.0, 1e-15);
  EXPECT_NEAR(v.dq[0], 0.0, 1e-15);
  EXPECT_NEAR(v.dp[0], -10.0, 1e-14);
}

TEST(ContactVectorField, DimensionMismatchThrows) {
  EXPECT_THROW(contact_vector_field(*damped().hamiltonian, {0.0, {1.0, 2.0}, {0.0, 0.0}}),
               DimensionError);
}

TEST(ContactVectorField, NonFinitePartialThrows) {
  HamiltonianModel bad = testing_models::free_particle();
  bad.d_p = [](const DarbouxPoint&, std::size_t) { return std::nan(""); };
  EXPECT_THROW(contact_vector_field(bad, {0.0, {0.0}, {1.0}}), NonFiniteError);
}

TEST(ContactVectorField, GiererMeinhardtDomainGuard) {
  const auto gm = make_system("gierer_meinhardt");
  EXPECT_THROW(contact_vector_field(*gm.hamiltonian, {0.0, {0.5}, {-1.0}}), DomainError);
  EXPECT_THROW(contact_vector_field(*gm.hamiltonian, {0.0, {0.5}, {-2.0}}), DomainError);
}

TEST(ReebDerivative, Examples) {
  EXPECT_EQ(reeb_derivative(testing_models::free_particle(), {3.0, {1.0}, {2.0}}), 0.0);
  EXPECT_DOUBLE_EQ(reeb_derivative(*damped().hamiltonian, {5.0, {-1.0}, {7.0}}), 0.1);
  EXPECT_NEAR(reeb_derivative(*parachute().hamiltonian, {0.0, {0.0}, {1.0}}), -1.0, 1e-15);
}

TEST(LagrangeBracket, Examples) {
  const DarbouxPoint x(0.0, {1.0}, {2.0});
  EXPECT_DOUBLE_EQ(lagrange_bracket(observables::coordinate_q(0, 1),
                                    observables::coordinate_p(0, 1), x),
                   1.0);
  EXPECT_DOUBLE_EQ(lagrange_bracket(observables::constant(1.0, 1), observables::coordinate_s(1),
                                    {0.3, {-0.4}, {0.9}}),
                   1.0);
  EXPECT_DOUBLE_EQ(lagrange_bracket(observables::coordinate_s(1), observables::coordinate_q(0, 1), x),
                   -1.0);
}

TEST(PoissonBracket, Examples) {
  const DarbouxPoint x(0.0, {1.0}, {2.0});
  EXPECT_DOUBLE_EQ(
      poisson_bracket(observables::coordinate_q(0, 1), observables::coordinate_p(0, 1), x), 1.0);
  EXPECT_NEAR(poisson_bracket(observables::virial(1), *damped().hamiltonian, x), 3.0, 1e-15);
  EXPECT_EQ(poisson_bracket(observables::coordinate_p(0, 1), testing_models::free_particle(), x),
            0.0);
}

TEST(ApplyFieldToObservable, Examples) {
  const DarbouxPoint x(0.0, {1.0}, {2.0});
  const auto& h = *damped().hamiltonian;
  EXPECT_EQ(apply_field_to_observable(h, observables::constant(1.0, 1), x), 0.0);
  EXPECT_NEAR(apply_field_to_observable(h, observables::virial(1), x), 2.8, 1e-15);
  EXPECT_NEAR(apply_field_to_observable(h, h, x), -0.25, 1e-15);
}

TEST(Divergence, Examples) {
  EXPECT_EQ(divergence(testing_models::free_particle(), {0.0, {1.0}, {1.0}}), 0.0);
  EXPECT_DOUBLE_EQ(divergence(*damped().hamiltonian, {4.0, {1.0}, {-3.0}}), -0.2);
  EXPECT_NEAR(divergence(*parachute().hamiltonian, {0.0, {0.0}, {1.0}}), 2.0, 1e-15);
}

TEST(CheckPartials, DampedOscillatorPasses) {
  const auto rep = check_partials(*damped().hamiltonian, {0.0, {1.0}, {2.0}});
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.checks.size(), 3u);
}

TEST(CheckPartials, CorruptedPartialIsFlagged) {
  HamiltonianModel h = *damped().hamiltonian;
  const auto good = h.d_q;
  h.d_q = [good](const DarbouxPoint& x, std::size_t i) { return good(x, i) + 1.0; };
  const auto rep = check_partials(h, {0.0, {1.0}, {2.0}});
  EXPECT_FALSE(rep.passed());
  for (const auto& c : rep.checks) {
    if (c.coordinate == "q0") {
      EXPECT_FALSE(c.passed);
      EXPECT_NEAR(c.rel_error, 1.0, 1e-6);
    } else {
      EXPECT_TRUE(c.passed) << c.coordinate;
    }
  }
}

TEST(CheckPartials, ParachuteExponentialTerm) {
  EXPECT_TRUE(check_partials(*parachute().hamiltonian, {0.0, {1.0}, {1.0}}).passed());
}

TEST(CheckPartials, EvaluationFailureIsReportedNotThrown) {
  const auto gm = make_system("gierer_meinhardt");
  // y sits just inside the domain; the -step probe crosses y = -B.
  const DarbouxPoint x(0.0, {0.5}, {-1.0 + 1e-7});
  PartialsReport rep;
  ASSERT_NO_THROW(rep = check_partials(*gm.hamiltonian, x));
  bool saw_failure = false;
  for (const auto& c : rep.checks) {
    if (c.coordinate == "p0") {
      EXPECT_FALSE(c.passed);
      EXPECT_FALSE(c.failure.empty());
      saw_failure = true;
    }
  }
  EXPECT_TRUE(saw_failure);
}

TEST(ContactProperties, FieldActionEqualsDirectionalDerivative) {
  std::mt19937_64 rng(11);
  for (const auto& sys : testing_models::hamiltonian_systems()) {
    const auto& h = *sys.hamiltonian;
    for (int k = 0; k < 200; ++k) {
      const DarbouxPoint x = testing_models::jitter(sys.initial_state, rng, 0.5);
      const auto f = testing_models::random_polynomial(rng).model(x.dim());
      const double a = apply_field_to_observable(h, f, x);
      const double b = directional_derivative(f, x, contact_vector_field(h, x));
      EXPECT_TRUE(close_rel(a, b, 1e-10, 1e-12)) << sys.name << ": " << a << " vs " << b;
    }
  }
}

TEST(ContactProperties, BracketAntisymmetry) {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 500; ++k) {
    const DarbouxPoint x = testing_models::jitter({0.0, {0.0, 0.0}, {0.0, 0.0}}, rng, 2.0);
    const auto f = testing_models::random_polynomial(rng).model(2);
    const auto g = testing_models::random_polynomial(rng).model(2);
    const double fg = lagrange_bracket(f, g, x);
    const double gf = lagrange_bracket(g, f, x);
    EXPECT_TRUE(close_rel(fg, -gf, 1e-13, 1e-12)) << fg << " vs " << gf;
  }
}

TEST(ContactProperties, PoissonReductionForSIndependentFunctions) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 500; ++k) {
    auto pf = testing_models::random_polynomial(rng);
    auto pg = testing_models::random_polynomial(rng);
    for (auto* poly : {&pf, &pg}) poly->c[1] = poly->c[4] = poly->c[6] = 0.0;
    const DarbouxPoint x = testing_models::jitter({0.0, {0.0}, {0.0}}, rng, 2.0);
    const auto f = pf.model(1), g = pg.model(1);
    EXPECT_EQ(lagrange_bracket(f, g, x), poisson_bracket(f, g, x));
  }
}

TEST(ContactProperties, VirialBracketReducesToPoisson) {
  std::mt19937_64 rng(14);
  for (const auto& sys : testing_models::hamiltonian_systems()) {
    const auto& h = *sys.hamiltonian;
    const auto G = observables::virial(h.n);
    for (int k = 0; k < 200; ++k) {
      const DarbouxPoint x = testing_models::jitter(sys.initial_state, rng, 0.5);
      const double lb = lagrange_bracket(G, h, x);
      const double pb = poisson_bracket(G, h, x);
      EXPECT_TRUE(close_rel(lb, pb, 1e-12, 1e-12)) << sys.name;
    }
  }
}

TEST(ContactProperties, EtaPairingIsMinusH) {
  std::mt19937_64 rng(15);
  for (const auto& sys : testing_models::hamiltonian_systems()) {
    const auto& h = *sys.hamiltonian;
    for (int k = 0; k < 200; ++k) {
      const DarbouxPoint x = testing_models::jitter(sys.initial_state, rng, 0.5);
      const TangentVector v = contact_vector_field(h, x);
      double eta = v.ds;
      double scale = std::abs(v.ds);
      for (std::size_t i = 0; i < x.dim(); ++i) {
        eta -= x.p[i] * v.dq[i];
        scale += std::abs(x.p[i] * v.dq[i]);
      }
      EXPECT_TRUE(close_rel(eta, -h.value(x), 1e-12, scale)) << sys.name;
    }
  }
}

TEST(ContactProperties, HamiltonianNotConserved) {
  // X_h(h) = -h dh/ds, read through the chain rule.
  std::mt19937_64 rng(16);
  for (const auto& sys : testing_models::hamiltonian_systems()) {
    const auto& h = *sys.hamiltonian;
    for (int k = 0; k < 50; ++k) {
      const DarbouxPoint x = testing_models::jitter(sys.initial_state, rng, 0.5);
      const double lhs = directional_derivative(h, x, contact_vector_field(h, x));
      EXPECT_TRUE(close_rel(lhs, -h.value(x) * h.d_s(x), 1e-10, 1e-12)) << sys.name;
    }
  }
}

TEST(ContactProperties, DivergenceMatchesJacobianTrace) {
  std::mt19937_64 rng(17);
  for (const auto& sys : testing_models::hamiltonian_systems()) {
    const auto& h = *sys.hamiltonian;
    for (int k = 0; k < 20; ++k) {
      const DarbouxPoint x = testing_models::jitter(sys.initial_state, rng, 0.5);
      EXPECT_NEAR(divergence(h, x), jacobian_trace(h, x), 1e-6) << sys.name;
    }
  }
}
