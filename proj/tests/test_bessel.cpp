#include <doctest.h>

#include <cmath>

#include "bessel_reference.inc"
#include "conetrace/bessel.hpp"

using namespace conetrace;

namespace {
struct Value {
  double nu, x, j;
};
struct Zero {
  double nu;
  int m;
  double z;
};
const Value kValues[] = {BESSEL_J_VALUES};
const Zero kZeros[] = {BESSEL_J_ZEROS};
}  // namespace

TEST_CASE("J_nu against high-precision references") {
  for (const Value& v : kValues) {
    CAPTURE(v.nu);
    CAPTURE(v.x);
    CHECK(std::abs(bessel_j(v.nu, v.x) - v.j) <= 1e-10 * std::abs(v.j) + 1e-13);
  }
}

TEST_CASE("derivative matches a central difference") {
  for (double nu : {0.0, 4.0 / 3, 20.0}) {
    for (double x : {0.8, 7.5, 40.0}) {
      const double h = 1e-5;
      const double fd = (bessel_j(nu, x + h) - bessel_j(nu, x - h)) / (2 * h);
      CHECK(bessel_j_with_derivative(nu, x).jp == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
  }
}

TEST_CASE("zeros against references") {
  for (const Zero& z : kZeros) {
    CAPTURE(z.nu);
    CAPTURE(z.m);
    const auto zs = bessel_j_zeros(z.nu, z.m);
    REQUIRE(zs.size() == static_cast<std::size_t>(z.m));
    CHECK(std::abs(zs.back() - z.z) <= 1e-10 * z.z);
  }
}

TEST_CASE("zeros below a bound are complete and ascending") {
  const auto zs = bessel_j_zeros_below(4.0 / 3, 160.0);
  REQUIRE(zs.size() == 50);
  for (std::size_t i = 1; i < zs.size(); ++i) CHECK(zs[i] > zs[i - 1]);
  for (double z : zs) CHECK(std::abs(bessel_j(4.0 / 3, z)) < 1e-12);
  CHECK(bessel_j_zeros_below(100.0, 100.0).empty());
}
