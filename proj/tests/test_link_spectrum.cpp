#include <doctest.h>

#include <cmath>
#include <vector>

#include "conetrace/errors.hpp"
#include "conetrace/link_spectrum.hpp"

using namespace conetrace;

namespace {
constexpr double kPi = 3.14159265358979323846;

void check_vec(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));
}

// Plain Romberg on the original integrand, with the finite limit at s = pi.
double romberg_nu(double nu) {
  auto f = [nu](double s) {
    const double c = std::cos(s / 2);
    if (std::abs(kPi - s) < 1e-12) return nu * std::sin(kPi * nu);
    return (std::cos(s * nu) - std::cos(kPi * nu)) / (2 * c);
  };
  const int levels = 18;
  std::vector<std::vector<double>> R(levels, std::vector<double>(levels));
  double h = kPi;
  R[0][0] = 0.5 * h * (f(0) + f(kPi));
  for (int i = 1; i < levels; ++i) {
    h /= 2;
    double s = 0;
    for (long k = 1; k < (1L << i); k += 2) s += f(k * h);
    R[i][0] = 0.5 * R[i - 1][0] + h * s;
    for (int j = 1; j <= i; ++j) R[i][j] = R[i][j - 1] + (R[i][j - 1] - R[i - 1][j - 1]) / (std::pow(4.0, j) - 1);
  }
  return R[levels - 1][levels - 1];
}
}  // namespace

TEST_CASE("nu values on circles") {
  check_vec(nu_values(LinkSpectrum::circle(2 * kPi), 2, 3), {0, 1, 1, 2, 2});
  check_vec(nu_values(LinkSpectrum::circle(kPi), 2, 3), {0, 2, 2, 4, 4});
  CHECK(nu_values(LinkSpectrum::circle(2 * kPi), 4, 1).front() == doctest::Approx(1.0));
  CHECK_THROWS_AS(nu_values(LinkSpectrum::circle(kPi), 2, 0), Error);
}

TEST_CASE("tabulated links use their own eigenvalues") {
  std::vector<TabulatedMode> modes{{0.0, [](const LinkPoint&) { return 1.0; }},
                                   {3.0, [](const LinkPoint& y) { return y[0]; }}};
  const auto L = LinkSpectrum::tabulated(modes, 2);
  check_vec(nu_values(L, 3, 5), {0.5, std::sqrt(3.25)});
  CHECK_THROWS_AS(diffraction_kernel(L, 3, {0.0}, {1.0}, SummationPolicy::closed_form()), Error);
}

TEST_CASE("orbifold circles have no diffraction") {
  for (int N = 1; N <= 4; ++N) {
    const double rho = 2 * kPi / N;
    const auto link = LinkSpectrum::circle(rho);
    for (int i = 0; i < 100; ++i) {
      const double u = -rho / 2 + rho * (i + 0.5) / 100;
      if (geometric_offset(link, kPi, {0.0}, {u}) < 1e-3) continue;
      CHECK(std::abs(diffraction_kernel(link, 2, {0.0}, {u}, SummationPolicy::closed_form()).value) <= 1e-12);
    }
  }
}

TEST_CASE("closed form agrees with the Abel series") {
  const double rho = 1.5 * kPi;
  const auto link = LinkSpectrum::circle(rho);
  const cplx closed = diffraction_kernel(link, 2, {0.0}, {kPi / 3}, SummationPolicy::closed_form()).value;
  CHECK(std::abs(closed - abel_extrapolated_circle(rho, kPi, kPi / 3)) <= 1e-6);
  CHECK(std::abs(closed) > 0.05);
  // t = 2 pi on the flat link, away from the geometric set
  const cplx h = half_kg_kernel(LinkSpectrum::circle(2 * kPi), 2, 2 * kPi, {0.0}, {kPi / 2},
                                SummationPolicy::closed_form());
  CHECK(std::abs(h - abel_extrapolated_circle(2 * kPi, 2 * kPi, kPi / 2)) <= 1e-6);
}

TEST_CASE("geometric set guard") {
  const auto link = LinkSpectrum::circle(1.5 * kPi);
  // u = +-t mod rho: pi mod 3pi/2 puts the singular points at u = +-pi/2
  CHECK(geometric_offset(link, kPi, {0.0}, {kPi / 2}) < 1e-12);
  try {
    diffraction_kernel(link, 2, {0.0}, {kPi / 2}, SummationPolicy::closed_form());
    FAIL("expected GeometricSet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GeometricSet);
  }
  const auto d = diffraction_kernel(link, 2, {0.0}, {kPi / 2}, SummationPolicy::abel(0.999));
  CHECK_FALSE(d.regular);
  CHECK(std::isfinite(std::abs(d.value)));
}

TEST_CASE("t = 0 Gaussian kernel approximates the identity") {
  const auto link = LinkSpectrum::circle(2 * kPi);
  const double on10 = std::abs(half_kg_kernel(link, 2, 0.0, {0.0}, {0.0}, SummationPolicy::gaussian(10)));
  const double on40 = std::abs(half_kg_kernel(link, 2, 0.0, {0.0}, {0.0}, SummationPolicy::gaussian(40)));
  const double off40 = std::abs(half_kg_kernel(link, 2, 0.0, {0.0}, {kPi}, SummationPolicy::gaussian(40)));
  CHECK(on40 > 3.5 * on10);
  CHECK(off40 < 1e-6);
}

TEST_CASE("Hermitian symmetry and mode-wise group law") {
  const auto link = LinkSpectrum::circle(1.5 * kPi);
  const auto pol = SummationPolicy::gaussian(30);
  const LinkPoint y{0.3}, yp{1.9};
  const cplx a = functional_kernel(link, 2, [](double nu) { return std::polar(1.0, -kPi * nu); }, y, yp, pol);
  const cplx b = functional_kernel(link, 2, [](double nu) { return std::polar(1.0, kPi * nu); }, yp, y, pol);
  CHECK(std::abs(a - std::conj(b)) <= 1e-12);
  for (double nu : nu_values(link, 2, 20)) {
    const cplx lhs = std::polar(1.0, -0.7 * nu) * std::polar(1.0, -1.1 * nu);
    CHECK(std::abs(lhs - std::polar(1.0, -1.8 * nu)) <= 1e-12);
  }
  auto [c, s] = cos_sin_pi_nu_kernels(link, 2, y, yp, pol);
  const cplx ep = functional_kernel(link, 2, [](double nu) { return std::polar(1.0, kPi * nu); }, y, yp, pol);
  CHECK(std::abs(c + cplx(0, 1) * s - ep) <= 1e-12);
}

TEST_CASE("cos and sin kernels match the Abel oracle") {
  const double rho = 1.5 * kPi, u = kPi / 3;
  auto [c, s] = cos_sin_pi_nu_kernels(LinkSpectrum::circle(rho), 2, {0.0}, {u}, SummationPolicy::closed_form());
  // K[e^{-i pi nu}](0, u) and K[e^{+i pi nu}](0, u) = conj(K[e^{-i pi nu}](u, 0))
  const cplx em = abel_extrapolated_circle(rho, kPi, -u);
  const cplx ep = std::conj(abel_extrapolated_circle(rho, kPi, u));
  CHECK(std::abs(c - 0.5 * (em + ep)) <= 1e-6);
  CHECK(std::abs(s - (ep - em) / cplx(0, 2)) <= 1e-6);
}

TEST_CASE("front coefficients") {
  const auto pi_link = LinkSpectrum::circle(kPi);
  const auto f0 = sine_front_coefficients(pi_link, 2, 0.5, 0.5, {0.0}, {1.0}, SummationPolicy::closed_form());
  CHECK(std::abs(f0.c_H) <= 1e-12);
  CHECK(std::abs(f0.c_log) <= 1e-12);
  const auto link = LinkSpectrum::circle(1.5 * kPi);
  const auto f = sine_front_coefficients(link, 2, 0.5, 0.5, {0.0}, {kPi / 3}, SummationPolicy::closed_form());
  CHECK(f.c_H.real() == doctest::Approx(0.27281).epsilon(1e-4));
  CHECK(std::abs(f.c_log) <= 1e-12);
  CHECK_THROWS_AS(sine_front_coefficients(link, 2, 0.0, 0.5, {0.0}, {1.0}, SummationPolicy::closed_form()), Error);
}

TEST_CASE("nu integral") {
  CHECK(nu_integral(0.0) == 0.0);
  for (double nu : {4.0 / 3, 8.0 / 3, 0.5, 5.25}) CHECK(std::abs(nu_integral(nu) - romberg_nu(nu)) <= 1e-9);
}

TEST_CASE("a0, b0 and their relation to the front coefficients") {
  const auto link = LinkSpectrum::circle(1.5 * kPi);
  const auto pol = SummationPolicy::abel(1 - 1e-3);
  const double x = 0.4, xp = 0.7;
  const LinkPoint y{0.0}, yp{1.1};
  const auto post = a0_b0_coefficients(link, 2, x, xp, y, yp, +1, pol);
  const auto pre = a0_b0_coefficients(link, 2, x, xp, y, yp, -1, pol);
  const auto fc = sine_front_coefficients(link, 2, x, xp, y, yp, pol);
  CHECK(std::abs(post.b0 - 2.0 * fc.c_log) <= 1e-12);
  CHECK(std::abs((post.a0 - pre.a0) - fc.c_H) <= 1e-12);
  CHECK(std::abs(post.b0 - pre.b0) == 0.0);
  CHECK_THROWS_AS(a0_b0_coefficients(link, 2, x, xp, y, yp, 1, SummationPolicy::closed_form()), Error);
}
