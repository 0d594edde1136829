#include "conetrace/composition.hpp"

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "conetrace/errors.hpp"

namespace conetrace {

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

struct Nodes {
  std::vector<double> x, w;
};

Nodes composite(double a, double b, int panels) {
  Nodes n;
  const auto& ab = GL::abscissa();
  const auto& wt = GL::weights();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h, r = 0.5 * h;
    for (std::size_t i = 0; i < ab.size(); ++i) {
      if (ab[i] == 0.0) {
        n.x.push_back(c);
        n.w.push_back(wt[i] * r);
      } else {
        n.x.push_back(c - r * ab[i]);
        n.w.push_back(wt[i] * r);
        n.x.push_back(c + r * ab[i]);
        n.w.push_back(wt[i] * r);
      }
    }
  }
  return n;
}

// C-infinity step from 0 (x <= 0) to 1 (x >= 1).
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

cplx integrate(const CompositionProblem& p, double xi, const CompositionOptions& opt, int refine) {
  const double s = opt.eta_frac * xi;
  const double span = 9.0;
  const double half_order = (p.n - 1) / 2.0;
  // G(A) = int e^{i A zeta} g(zeta) (xi (xi + zeta))^{(n-1)/2} dzeta
  const Nodes zeta = composite(-span * s, span * s, opt.panels_eta * refine);
  auto G = [&](double A) {
    cplx v = 0.0;
    for (std::size_t i = 0; i < zeta.x.size(); ++i) {
      const double z = zeta.x[i];
      const double amp = std::exp(-0.5 * z * z / (s * s)) * std::pow(xi * (xi + z), half_order);
      v += zeta.w[i] * std::polar(amp, A * z);
    }
    return v;
  };
  const double rho_lo = std::max(1e-9, p.t2 - span / s), rho_hi = p.t2 + span / s;
  const Nodes rho = composite(rho_lo, rho_hi, opt.panels_rho * refine);
  const Nodes phi = composite(p.phi_star - 2.0 * p.phi_flat, p.phi_star + 2.0 * p.phi_flat, opt.panels_phi * refine);
  const double t = p.t1 + p.t2;
  cplx total = 0.0;
  for (std::size_t i = 0; i < rho.x.size(); ++i) {
    const double r = rho.x[i];
    const cplx g = G(r - p.t2) * p.leg2_amplitude(r) * p.area_density(r) * rho.w[i];
    cplx row = 0.0;
    for (std::size_t k = 0; k < phi.x.size(); ++k) {
      const double off = std::abs(phi.x[k] - p.phi_star);
      const double win = 1.0 - smooth_step((off - p.phi_flat) / p.phi_flat);
      if (win == 0.0) continue;
      const double d1 = p.leg1_distance(r, phi.x[k]);
      row += phi.w[k] * win * p.leg1_amplitude(d1) * std::polar(1.0, xi * (d1 + r - t));
    }
    total += g * row;
  }
  return total;
}

}  // namespace

CompositionResult brute_force_composition(const CompositionProblem& p, double xi, const CompositionOptions& opt) {
  if (!(xi > 0.0) || !(p.t1 > 0.0) || !(p.t2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "composition needs positive frequency and leg lengths");
  // Stationarity of d1 + rho at (t2, phi*) and nondegeneracy across the geodesic.
  const double h = 1e-4;
  const double c = p.leg1_distance(p.t2, p.phi_star);
  const double dphi = (p.leg1_distance(p.t2, p.phi_star + h) - p.leg1_distance(p.t2, p.phi_star - h)) / (2 * h);
  const double drho = (p.leg1_distance(p.t2 + h, p.phi_star) - p.leg1_distance(p.t2 - h, p.phi_star)) / (2 * h) + 1.0;
  if (std::abs(c - p.t1) > 1e-8 || std::abs(dphi) > 1e-6 || std::abs(drho) > 1e-6)
    throw Error(ErrorKind::NoCriticalPoint, "w* is not a critical point of the composed phase");
  CompositionResult res;
  res.hessian =
      (p.leg1_distance(p.t2, p.phi_star + h) - 2 * c + p.leg1_distance(p.t2, p.phi_star - h)) / (h * h);
  if (std::abs(res.hessian) < 1e-8)
    throw Error(ErrorKind::NoCriticalPoint, "degenerate critical point (conjugate endpoints)");
  const cplx coarse = integrate(p, xi, opt, 1);
  const cplx fine = integrate(p, xi, opt, 2);
  res.value = fine;
  res.quadrature_error = std::abs(fine - coarse);
  if (!(res.quadrature_error <= opt.rel_tol * std::abs(fine)))
    throw Error(ErrorKind::QuadratureDivergence, "composition quadrature did not settle");
  return res;
}

}  // namespace conetrace
