#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "conetrace/errors.hpp"
#include "conetrace/oracle.hpp"

using namespace conetrace;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> grid(double a, double b, double h) {
  std::vector<double> t;
  for (int i = 0; a + i * h <= b + 1e-12; ++i) t.push_back(a + i * h);
  return t;
}

double cone_distance(double rho, double x, double y, double xp, double yp) {
  double a = std::fmod(std::abs(y - yp), rho);
  a = std::min(a, rho - a);
  return a >= kPi ? x + xp : std::sqrt(x * x + xp * xp - 2 * x * xp * std::cos(a));
}
}  // namespace

TEST_CASE("front fit recovers synthetic jump and log coefficients") {
  const double t0 = 1.0;
  const auto t = grid(0.85, 1.15, 0.001);
  std::vector<cplx> v;
  std::vector<double> smooth_only;
  for (double s : t) {
    const double u = s - t0;
    const double smooth = 0.3 + 0.1 * u - 0.7 * u * u;
    const cplx jump = u > 0 ? cplx(2, 1) : cplx(0);
    const double lg = u != 0 ? std::log(std::abs(u)) : 0.0;
    v.push_back(smooth + jump - 0.5 * lg);
    smooth_only.push_back(smooth + std::sin(3 * u));
  }
  FrontFitOptions opt;
  opt.t0 = t0;
  const ComplexFrontFit f = extract_front_coefficients(t, v, opt);
  CHECK(std::abs(f.c_H - cplx(2, 1)) <= 1e-3);
  CHECK(std::abs(f.c_log - cplx(-0.5)) <= 1e-3);

  const FrontFit s = extract_front_coefficients(t, smooth_only, opt);
  CHECK(std::abs(s.c_H) <= 1e-3);
  CHECK(std::abs(s.c_log) <= 1e-3);
  CHECK(front_basis_size(opt) == 4 + 1 + 1 + 6 + 1);
}

TEST_CASE("doubled square multiplicities") {
  const auto ev = doubled_square_spectrum(5.0);
  auto count = [&](double v) { return std::count_if(ev.begin(), ev.end(), [&](double l) { return std::abs(l - v) < 1e-12; }); };
  CHECK(count(0.0) == 1);
  CHECK(count(kPi) == 2);
  CHECK(count(kPi * std::sqrt(2.0)) == 2);
  CHECK(std::is_sorted(ev.begin(), ev.end()));
  CHECK(ev.size() == 5);
}

TEST_CASE("smoothed wave trace of a single eigenvalue") {
  const double lam = 7.0, sigma = 5.0;
  const std::vector<double> t{-0.4, 0.0, 0.3, 0.3 + 2 * kPi / lam, 0.4};
  const SmoothedTrace tr = smoothed_wave_trace({lam}, sigma, t);
  const double w = std::exp(-0.5 * lam * lam / (sigma * sigma));
  CHECK(std::abs(tr.samples[2] - std::polar(w, -0.3 * lam)) <= 1e-15);
  CHECK(std::abs(tr.samples[3] - tr.samples[2]) <= 1e-14);
  CHECK(tr.samples[1].real() == doctest::Approx(w));

  const SmoothedTrace sym = smoothed_wave_trace({1.0, 2.5, 4.0}, 3.0, {-0.4, 0.4});
  CHECK(std::abs(sym.samples[0] - std::conj(sym.samples[1])) <= 1e-15);
  CHECK_THROWS_AS(smoothed_wave_trace({1.0}, 0.0, {0.0}), Error);
}

TEST_CASE("trace fit recovers a planted coefficient") {
  const double L = 2.0;
  SmoothedTrace tr;
  tr.t = grid(1.8, 2.2, 0.0025);
  std::vector<cplx> model;
  for (double s : tr.t) {
    const double u = s - L;
    model.emplace_back(-std::log(std::abs(u) + 0.01), -0.5 * std::atan(u / 0.01));
  }
  const cplx C(0.4, -1.3);
  for (std::size_t i = 0; i < tr.t.size(); ++i) tr.samples.push_back(C * model[i] + cplx(0.2, 0.1) + 0.3 * (tr.t[i] - L));
  const TraceFit f = fit_trace_singularity(tr, L, model, 0.15);
  CHECK(std::abs(f.C - C) <= 0.01 * std::abs(C));
  CHECK(f.residual <= 1e-10);
  CHECK_THROWS_AS(fit_trace_singularity(tr, L, std::vector<cplx>(3), 0.15), Error);
}

TEST_CASE("flat cone series is causal") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int tested = 0;
  while (tested < 20) {
    FlatConeSeriesConfig c;
    c.rho = kPi + 2 * kPi * U(rng);
    c.wall_R = 1.5;
    c.x = 0.2 + 0.4 * U(rng);
    c.x_prime = 0.2 + 0.4 * U(rng);
    c.y = c.rho * U(rng);
    c.y_prime = c.rho * U(rng);
    c.Lambda = 40.0;
    const double d = cone_distance(c.rho, c.x, c.y, c.x_prime, c.y_prime);
    if (d < 0.4) continue;
    const FlatConeSineSeries S(c);
    const double before = std::abs(S(d - 0.3));
    const double after = std::abs(S(c.x + c.x_prime + 0.1));
    CAPTURE(d);
    CHECK(before <= 1e-6);
    CHECK(after > 1e3 * before);
    ++tested;
  }
}

TEST_CASE("wall reflections are refused") {
  FlatConeSeriesConfig c;
  c.rho = 1.5 * kPi;
  c.wall_R = 1.2;
  c.x = c.x_prime = 0.5;
  c.Lambda = 40.0;
  const FlatConeSineSeries S(c);
  try {
    S(2.0);
    FAIL("expected WallInfluence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::WallInfluence);
  }
  CHECK_NOTHROW(S(0.9));
}
