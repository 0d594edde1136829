#include "conetrace/bessel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "conetrace/errors.hpp"

namespace conetrace {

namespace {

constexpr double kPi = std::numbers::pi;

// Ascending series; used while x^2/4 < nu + 1 so that terms decrease from the start.
BesselJ series(double nu, double x) {
  if (x == 0.0) {
    if (nu == 0.0) return {1.0, 0.0};
    if (nu == 1.0) return {0.0, 0.5};
    return {0.0, nu < 1.0 ? std::numeric_limits<double>::infinity() : 0.0};
  }
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0, dsum = nu;  // d/dx of (x/2)^(nu+2k) gives (nu+2k)/x
  for (int k = 1; k < 500; ++k) {
    term *= q / (double(k) * (nu + k));
    sum += term;
    dsum += term * (nu + 2.0 * k);
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  const double lead = std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 1.0));
  return {lead * sum, lead * dsum / x};
}

// Steed's method: continued fraction for J'/J, downward recurrence to
// |mu| <= 1/2, complex continued fraction for (p + iq) fixing the scale.
BesselJ steed(double nu, double x) {
  constexpr int kMaxIt = 200000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const int nl = std::max(0, static_cast<int>(nu - x + 1.5));
  const double xmu = nu - nl;
  const double xmu2 = xmu * xmu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  const double w = xi2 / kPi;

  int isign = 1;
  double h = std::max(nu * xi, kTiny);
  double b = xi2 * nu, d = 0.0, c = h;
  int i = 0;
  for (; i < kMaxIt; ++i) {
    b += xi2;
    d = b - d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b - 1.0 / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (d < 0.0) isign = -isign;
    if (std::abs(del - 1.0) <= kEps) break;
  }
  if (i == kMaxIt) throw Error(ErrorKind::BesselFailure, "ratio continued fraction did not converge");

  double rjl = isign * 1e-30;
  double rjpl = h * rjl;
  const double rjl1 = rjl, rjp1 = rjpl;
  double log_scale = 0.0;
  double fact = nu * xi;
  for (int l = nl - 1; l >= 0; --l) {
    const double tmp = fact * rjl + rjpl;
    fact -= xi;
    rjpl = fact * tmp - rjl;
    rjl = tmp;
    if (std::abs(rjl) > 1e200) {
      rjl *= 1e-200;
      rjpl *= 1e-200;
      log_scale += 200.0 * std::log(10.0);
    }
  }
  if (rjl == 0.0) rjl = kEps;
  const double f = rjpl / rjl;

  double a = 0.25 - xmu2;
  double p = -0.5 * xi, q = 1.0;
  const double br = 2.0 * x;
  double bi = 2.0;
  fact = a * xi / (p * p + q * q);
  double cr = br + q * fact, ci = bi + p * fact;
  double den = br * br + bi * bi;
  double dr = br / den, di = -bi / den;
  double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
  double tmp = p * dlr - q * dli;
  q = p * dli + q * dlr;
  p = tmp;
  for (i = 1; i < kMaxIt; ++i) {
    a += 2.0 * i;
    bi += 2.0;
    dr = a * dr + br;
    di = a * di + bi;
    if (std::abs(dr) + std::abs(di) < kTiny) dr = kTiny;
    fact = a / (cr * cr + ci * ci);
    cr = br + cr * fact;
    ci = bi - ci * fact;
    if (std::abs(cr) + std::abs(ci) < kTiny) cr = kTiny;
    den = dr * dr + di * di;
    dr /= den;
    di /= -den;
    dlr = cr * dr - ci * di;
    dli = cr * di + ci * dr;
    tmp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = tmp;
    if (std::abs(dlr - 1.0) + std::abs(dli) <= kEps) break;
  }
  if (i == kMaxIt) throw Error(ErrorKind::BesselFailure, "phase continued fraction did not converge");
  const double gam = (p - f) / q;
  double rjmu = std::sqrt(w / ((p - f) * gam + q));
  rjmu = std::copysign(rjmu, rjl);
  const double ratio = rjmu / rjl;
  const double scale = std::exp(-log_scale);
  return {rjl1 * ratio * scale, rjp1 * ratio * scale};
}

}  // namespace

BesselJ bessel_j_with_derivative(double nu, double x) {
  if (!(nu >= 0.0) || !(x >= 0.0)) throw Error(ErrorKind::BesselFailure, "need nu >= 0 and x >= 0");
  if (x < 2.0 || 0.25 * x * x < nu + 1.0) return series(nu, x);
  return steed(nu, x);
}

double bessel_j(double nu, double x) { return bessel_j_with_derivative(nu, x).j; }

namespace {

double refine_zero(double nu, double lo, double hi, double flo) {
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const BesselJ v = bessel_j_with_derivative(nu, x);
    if (v.j == 0.0) return x;
    if ((v.j < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = v.j;
    } else {
      hi = x;
    }
    double nx = x - v.j / v.jp;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-15 * x) return nx;
    x = nx;
    if (hi - lo <= 1e-15 * x) return x;
  }
  throw Error(ErrorKind::BesselFailure, "zero refinement did not converge");
}

template <class Stop>
std::vector<double> scan_zeros(double nu, Stop stop) {
  std::vector<double> out;
  // j_{nu,1} > nu; consecutive zeros are more than 3 apart for every nu >= 0.
  double step = 1.0;
  double a = std::max(nu, 1e-3);
  double fa = bessel_j(nu, a);
  while (true) {
    double b = a + step;
    double fb = bessel_j(nu, b);
    if ((fa < 0.0) != (fb < 0.0) && fa != 0.0) {
      double z = refine_zero(nu, a, b, fa);
      if (stop(out.size(), z)) break;
      out.push_back(z);
      if (out.size() >= 2) {
        // spacing is monotone, so jumping ahead by a fraction of it stays below the next zero
        double sp = out.back() - out[out.size() - 2];
        step = std::max(1.0, 0.45 * sp);
      }
    } else if (fb == 0.0) {
      if (stop(out.size(), b)) break;
      out.push_back(b);
      b += 1e-9;
      fb = bessel_j(nu, b);
    }
    a = b;
    fa = fb;
  }
  return out;
}

}  // namespace

std::vector<double> bessel_j_zeros_below(double nu, double upper) {
  return scan_zeros(nu, [upper](std::size_t, double z) { return z >= upper; });
}

std::vector<double> bessel_j_zeros(double nu, int count) {
  return scan_zeros(nu, [count](std::size_t n, double) { return n >= static_cast<std::size_t>(count); });
}

}  // namespace conetrace
