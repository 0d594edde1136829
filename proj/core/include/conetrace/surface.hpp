#pragma once

#include <array>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "conetrace/expression.hpp"
#include "conetrace/jet.hpp"
#include "conetrace/link_spectrum.hpp"

namespace conetrace {

struct MetricJets {
  Jet E, F, G;  // g = E du0^2 + 2F du0 du1 + G du1^2
};

using MetricFn = std::function<MetricJets(const Jet& u0, const Jet& u1)>;

// A cone point sitting at u0 = r0 of a polar-type chart whose second
// coordinate is the angle. Near the tip the chart is in designer form with
// x = orientation * (u0 - r0) and G / x^2 -> a^2; the link is a circle of
// circumference 2 pi a parameterized by arclength y = a * u1.
struct TipChart {
  int id = 0;
  double r0 = 0.0;
  int orientation = 1;
  double cone_factor = 1.0;
  double designer_limit = 0.0;  // designer form holds for x < designer_limit

  double circumference() const;
  LinkSpectrum link() const { return LinkSpectrum::circle(circumference()); }
  double x_of(double u0) const { return orientation * (u0 - r0); }
  double u0_of(double x) const { return r0 + orientation * x; }
  double link_point(double u1) const;
  double angle_of(double y) const { return y / cone_factor; }
};

struct Christoffel {
  // gamma[k][i][j]
  double g[2][2][2];
};

struct MetricValue {
  double E, F, G;
  double det() const { return E * G - F * F; }
};

class SurfaceModel {
 public:
  std::string name;
  MetricFn metric;
  double period1 = 0.0;  // 0: second coordinate not periodic
  double lo0 = -std::numeric_limits<double>::infinity();
  double hi0 = std::numeric_limits<double>::infinity();
  std::vector<TipChart> tips;

  MetricValue metric_at(double u0, double u1) const;
  Christoffel christoffel(double u0, double u1) const;
  double gauss_curvature(double u0, double u1) const;
  // Christoffel symbols and curvature from a single jet evaluation.
  void geometry_at(double u0, double u1, Christoffel& gam, double* curvature) const;

  const TipChart& tip(int id) const;
  bool inside(double u0) const { return u0 > lo0 && u0 < hi0; }

  static SurfaceModel flat();
  static SurfaceModel sphere();
  static SurfaceModel flat_cone(double rho);
  // f = a sin r on r in (0, pi); cone angles 2 pi a at both ends.
  static SurfaceModel spindle(double a);
  // g = (1 + eps s(r) cos th) dr^2 + f^2 dth^2, f = a sin r (1 + beta sin r sin th),
  // s a smooth bump supported on (r_pad, pi - r_pad). Defaults give two tips
  // of circumference 3 pi / 2 and no conjugate tip pairs along meridians.
  static SurfaceModel perturbed_spindle(double a = 0.75, double beta = 0.1, double eps = 0.3,
                                        double r_pad = 0.6);
  // Metric given by expressions in (u0, u1).
  static SurfaceModel from_expressions(const std::string& name, const Expression& E,
                                       const Expression& F, const Expression& G, double period1,
                                       double lo0, double hi0, std::vector<TipChart> tips);
};

}  // namespace conetrace
