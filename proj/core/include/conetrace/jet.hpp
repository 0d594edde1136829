#pragma once

#include <cmath>

namespace conetrace {

// Second-order forward-mode jet in two variables: value, gradient and the
// three independent Hessian entries (00, 01, 11).
struct Jet {
  double v = 0.0;
  double d0 = 0.0, d1 = 0.0;
  double h00 = 0.0, h01 = 0.0, h11 = 0.0;

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT: constants promote implicitly
  Jet(double v_, double a, double b, double c00, double c01, double c11)
      : v(v_), d0(a), d1(b), h00(c00), h01(c01), h11(c11) {}
  static Jet variable(double value, int which) {
    Jet j(value);
    (which == 0 ? j.d0 : j.d1) = 1.0;
    return j;
  }
};

// Apply a scalar function with derivatives f, f', f'' to a jet.
inline Jet chain(const Jet& a, double f, double fp, double fpp) {
  Jet r;
  r.v = f;
  r.d0 = fp * a.d0;
  r.d1 = fp * a.d1;
  r.h00 = fp * a.h00 + fpp * a.d0 * a.d0;
  r.h01 = fp * a.h01 + fpp * a.d0 * a.d1;
  r.h11 = fp * a.h11 + fpp * a.d1 * a.d1;
  return r;
}

inline Jet operator+(const Jet& a, const Jet& b) {
  return {a.v + b.v, a.d0 + b.d0, a.d1 + b.d1, a.h00 + b.h00, a.h01 + b.h01, a.h11 + b.h11};
}
inline Jet operator-(const Jet& a, const Jet& b) {
  return {a.v - b.v, a.d0 - b.d0, a.d1 - b.d1, a.h00 - b.h00, a.h01 - b.h01, a.h11 - b.h11};
}
inline Jet operator-(const Jet& a) { return {-a.v, -a.d0, -a.d1, -a.h00, -a.h01, -a.h11}; }
inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  r.d0 = a.d0 * b.v + a.v * b.d0;
  r.d1 = a.d1 * b.v + a.v * b.d1;
  r.h00 = a.h00 * b.v + 2.0 * a.d0 * b.d0 + a.v * b.h00;
  r.h01 = a.h01 * b.v + a.d0 * b.d1 + a.d1 * b.d0 + a.v * b.h01;
  r.h11 = a.h11 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.h11;
  return r;
}
inline Jet reciprocal(const Jet& a) {
  const double iv = 1.0 / a.v;
  return chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet log(const Jet& a) { return chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v)); }
inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
inline Jet pow(const Jet& a, double p) {
  if (p == 0.0) return Jet(1.0);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  const double f = std::pow(a.v, p);
  const double fp = p * std::pow(a.v, p - 1.0);
  const double fpp = p * (p - 1.0) * std::pow(a.v, p - 2.0);
  return chain(a, f, fp, fpp);
}
inline Jet pow(const Jet& a, const Jet& b) {
  if (b.d0 == 0.0 && b.d1 == 0.0 && b.h00 == 0.0 && b.h01 == 0.0 && b.h11 == 0.0) return pow(a, b.v);
  return exp(b * log(a));
}

}  // namespace conetrace
