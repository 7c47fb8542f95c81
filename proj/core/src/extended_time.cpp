#include "contactdyn/extended_time.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace contactdyn {

namespace {

// Non-owning view; `h` must outlive the returned model.
HamiltonianModel frozen_view(const TimeDependentHamiltonianModel& h, double t) {
  const auto* m = &h;
  return {h.name,
          h.n,
          [m, t](const DarbouxPoint& x) { return m->value(ExtendedPoint{t, x}); },
          [m, t](const DarbouxPoint& x) { return m->d_s(ExtendedPoint{t, x}); },
          [m, t](const DarbouxPoint& x, std::size_t i) { return m->d_q(ExtendedPoint{t, x}, i); },
          [m, t](const DarbouxPoint& x, std::size_t i) { return m->d_p(ExtendedPoint{t, x}, i); }};
}

}  // namespace

HamiltonianModel freeze_time(const TimeDependentHamiltonianModel& h, double t) {
  auto owned = std::make_shared<const TimeDependentHamiltonianModel>(h);
  HamiltonianModel view = frozen_view(*owned, t);
  return {view.name,
          view.n,
          [owned, v = view.value](const DarbouxPoint& x) { return v(x); },
          [owned, v = view.d_s](const DarbouxPoint& x) { return v(x); },
          [owned, v = view.d_q](const DarbouxPoint& x, std::size_t i) { return v(x, i); },
          [owned, v = view.d_p](const DarbouxPoint& x, std::size_t i) { return v(x, i); }};
}

ExtendedTangent evolution_field(const TimeDependentHamiltonianModel& h, const ExtendedPoint& y) {
  require_finite(y.t, "t");
  return {1.0, contact_vector_field(frozen_view(h, y.t), y.base)};
}

double apply_evolution_field(const TimeDependentHamiltonianModel& h, const ObservableModel& f,
                             const ExtendedPoint& y) {
  require_finite(y.t, "t");
  return apply_field_to_observable(frozen_view(h, y.t), f, y.base);
}

PartialsReport check_partials(const TimeDependentHamiltonianModel& h, const ExtendedPoint& y,
                              const FiniteDifferenceOptions& opts) {
  PartialsReport report = check_partials(frozen_view(h, y.t), y.base, opts);
  report.model = h.name;
  const double step = opts.rel_step * std::max(1.0, std::abs(y.t));
  report.checks.insert(report.checks.begin(),
                       compare_partial(
                           "t", [&] { return h.d_t(y); },
                           [&](double d) {
                             ExtendedPoint z = y;
                             z.t += d;
                             return h.value(z);
                           },
                           step, opts));
  return report;
}

}  // namespace contactdyn
