#include <doctest.h>

#include <cmath>

#include "conetrace/amplitude.hpp"
#include "conetrace/composition.hpp"
#include "conetrace/errors.hpp"

using namespace conetrace;

namespace {
CompositionProblem flat_problem() {
  CompositionProblem p;
  p.leg1_distance = [](double r, double phi) { return std::hypot(r * std::cos(phi) - 2.0, r * std::sin(phi)); };
  p.leg1_amplitude = [](double d) { return interior_amplitude(d, 0, 1.0, 2).scalar; };
  p.leg2_amplitude = p.leg1_amplitude;
  p.area_density = [](double r) { return r; };
  p.t1 = p.t2 = 1.0;
  return p;
}
}  // namespace

TEST_CASE("composition requires a critical point") {
  CompositionProblem p = flat_problem();
  p.phi_star = 0.3;
  try {
    brute_force_composition(p, 100.0);
    FAIL("expected NoCriticalPoint");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCriticalPoint);
  }
  p.phi_star = 0.0;
  p.t1 = 1.2;
  CHECK_THROWS_AS(brute_force_composition(p, 100.0), Error);
}

TEST_CASE("flat composition reproduces the interior amplitude") {
  const double xi = 200.0;
  const CompositionResult r = brute_force_composition(flat_problem(), xi);
  const cplx want = interior_amplitude(2.0, 0, 1.0, 2).scalar * std::sqrt(xi);
  CHECK(std::abs(r.value / want - 1.0) <= 0.02);
  CHECK(r.hessian == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(r.quadrature_error <= 1e-6 * std::abs(r.value));
}
