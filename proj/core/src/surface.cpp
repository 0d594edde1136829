#include "conetrace/surface.hpp"

#include <cmath>
#include <numbers>

#include "conetrace/errors.hpp"

namespace conetrace {

namespace {
constexpr double kPi = std::numbers::pi;
}

double TipChart::circumference() const { return 2.0 * kPi * cone_factor; }

double TipChart::link_point(double u1) const {
  const double c = circumference();
  double y = std::fmod(cone_factor * u1, c);
  if (y < 0.0) y += c;
  return y;
}

MetricValue SurfaceModel::metric_at(double u0, double u1) const {
  MetricJets m = metric(Jet(u0), Jet(u1));
  return {m.E.v, m.F.v, m.G.v};
}

void SurfaceModel::geometry_at(double u0, double u1, Christoffel& gam, double* curvature) const {
  const MetricJets m = metric(Jet::variable(u0, 0), Jet::variable(u1, 1));
  const Jet& E = m.E;
  const Jet& F = m.F;
  const Jet& G = m.G;
  const double det = E.v * G.v - F.v * F.v;
  if (!(det > 0.0) || !std::isfinite(det))
    throw Error(ErrorKind::CurvatureEvaluationFailure, "metric degenerate at (" + std::to_string(u0) +
                                                           ", " + std::to_string(u1) + ")");
  const double inv[2][2] = {{G.v / det, -F.v / det}, {-F.v / det, E.v / det}};
  // dg[l][i][j] = d_l g_ij
  double dg[2][2][2];
  dg[0][0][0] = E.d0, dg[0][0][1] = dg[0][1][0] = F.d0, dg[0][1][1] = G.d0;
  dg[1][0][0] = E.d1, dg[1][0][1] = dg[1][1][0] = F.d1, dg[1][1][1] = G.d1;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) s += inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gam.g[k][i][j] = 0.5 * s;
      }
  if (curvature) {
    // Brioschi
    const double a11 = -0.5 * E.h11 + F.h01 - 0.5 * G.h00;
    const double a12 = 0.5 * E.d0, a13 = F.d0 - 0.5 * E.d1;
    const double a21 = F.d1 - 0.5 * G.d0, a31 = 0.5 * G.d1;
    const double det1 = a11 * (E.v * G.v - F.v * F.v) - a12 * (a21 * G.v - F.v * a31) +
                        a13 * (a21 * F.v - E.v * a31);
    const double b12 = 0.5 * E.d1, b13 = 0.5 * G.d0;
    const double det2 = -b12 * (b12 * G.v - F.v * b13) + b13 * (b12 * F.v - E.v * b13);
    const double k = (det1 - det2) / (det * det);
    if (!std::isfinite(k))
      throw Error(ErrorKind::CurvatureEvaluationFailure, "non-finite curvature");
    *curvature = k;
  }
}

Christoffel SurfaceModel::christoffel(double u0, double u1) const {
  Christoffel c{};
  geometry_at(u0, u1, c, nullptr);
  return c;
}

double SurfaceModel::gauss_curvature(double u0, double u1) const {
  Christoffel c{};
  double k = 0.0;
  geometry_at(u0, u1, c, &k);
  return k;
}

const TipChart& SurfaceModel::tip(int id) const {
  for (const auto& t : tips)
    if (t.id == id) return t;
  throw Error(ErrorKind::InvalidArgument, "surface '" + name + "' has no tip " + std::to_string(id));
}

SurfaceModel SurfaceModel::flat() {
  SurfaceModel s;
  s.name = "flat";
  s.metric = [](const Jet&, const Jet&) { return MetricJets{Jet(1.0), Jet(0.0), Jet(1.0)}; };
  return s;
}

SurfaceModel SurfaceModel::sphere() {
  SurfaceModel s;
  s.name = "sphere";
  s.metric = [](const Jet& r, const Jet&) {
    Jet f = sin(r);
    return MetricJets{Jet(1.0), Jet(0.0), f * f};
  };
  s.period1 = 2.0 * kPi;
  s.lo0 = 0.0;
  s.hi0 = kPi;
  return s;
}

SurfaceModel SurfaceModel::flat_cone(double rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidArgument, "cone circumference must be positive");
  SurfaceModel s;
  s.name = "flat_cone";
  const double a = rho / (2.0 * kPi);
  s.metric = [a](const Jet& x, const Jet&) { return MetricJets{Jet(1.0), Jet(0.0), a * a * x * x}; };
  s.period1 = 2.0 * kPi;
  s.lo0 = 0.0;
  s.tips.push_back({0, 0.0, 1, a, std::numeric_limits<double>::infinity()});
  return s;
}

SurfaceModel SurfaceModel::spindle(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "cone factor must be positive");
  SurfaceModel s;
  s.name = "spindle";
  s.metric = [a](const Jet& r, const Jet&) {
    Jet f = a * sin(r);
    return MetricJets{Jet(1.0), Jet(0.0), f * f};
  };
  s.period1 = 2.0 * kPi;
  s.lo0 = 0.0;
  s.hi0 = kPi;
  s.tips.push_back({0, 0.0, 1, a, kPi / 2});
  s.tips.push_back({1, kPi, -1, a, kPi / 2});
  return s;
}

SurfaceModel SurfaceModel::perturbed_spindle(double a, double beta, double eps, double r_pad) {
  if (!(a > 0.0) || !(r_pad > 0.0) || !(r_pad < kPi / 2))
    throw Error(ErrorKind::InvalidArgument, "bad perturbed spindle parameters");
  if (!(std::abs(eps) < 1.0)) throw Error(ErrorKind::InvalidArgument, "|eps| must be below 1");
  SurfaceModel s;
  s.name = "perturbed_spindle";
  const double r1 = r_pad, r2 = kPi - r_pad;
  const double half2 = 0.25 * (r2 - r1) * (r2 - r1);
  s.metric = [=](const Jet& r, const Jet& th) {
    Jet E(1.0);
    if (r.v > r1 && r.v < r2 && eps != 0.0) {
      Jet q = (r - r1) * (r2 - r) / half2;
      Jet q2 = q * q;
      E = 1.0 + eps * (q2 * q2 * q2) * cos(th);
    }
    Jet sr = sin(r);
    Jet f = a * sr * (1.0 + beta * sr * sin(th));
    return MetricJets{E, Jet(0.0), f * f};
  };
  s.period1 = 2.0 * kPi;
  s.lo0 = 0.0;
  s.hi0 = kPi;
  s.tips.push_back({0, 0.0, 1, a, r1});
  s.tips.push_back({1, kPi, -1, a, r1});
  return s;
}

SurfaceModel SurfaceModel::from_expressions(const std::string& name, const Expression& E,
                                            const Expression& F, const Expression& G,
                                            double period1, double lo0, double hi0,
                                            std::vector<TipChart> tips) {
  SurfaceModel s;
  s.name = name;
  s.metric = [E, F, G](const Jet& u0, const Jet& u1) {
    return MetricJets{E.eval(u0, u1), F.eval(u0, u1), G.eval(u0, u1)};
  };
  s.period1 = period1;
  s.lo0 = lo0;
  s.hi0 = hi0;
  s.tips = std::move(tips);
  for (const auto& t : s.tips) {
    if (!(t.cone_factor > 0.0) || !(t.designer_limit > 0.0) || (t.orientation != 1 && t.orientation != -1))
      throw Error(ErrorKind::ConfigError, "tip " + std::to_string(t.id) + " has invalid parameters");
    // Designer form check just off the tip.
    const double x = std::min(1e-4, 0.5 * t.designer_limit);
    MetricValue m = s.metric_at(t.u0_of(x), 0.3);
    if (std::abs(m.E - 1.0) > 1e-8 || std::abs(m.F) > 1e-8 ||
        std::abs(std::sqrt(m.G) / x - t.cone_factor) > 1e-3 * t.cone_factor)
      throw Error(ErrorKind::SeriesStartFailure,
                  "metric is not in designer form at tip " + std::to_string(t.id));
  }
  return s;
}

}  // namespace conetrace
