#pragma once

#include <functional>

#include "conetrace/link_spectrum.hpp"

namespace conetrace {

// Composition of two interior half-wave pieces through an intermediate point
// w, written in geodesic polar coordinates (rho, phi) centred at the far
// endpoint z2 of leg 2, so that leg 2's distance is rho. The relative
// frequency eta is localized by exp(-(eta - xi)^2 / (2 s^2)), s = eta_frac xi.
struct CompositionProblem {
  std::function<double(double rho, double phi)> leg1_distance;
  std::function<cplx(double d)> leg1_amplitude;
  std::function<cplx(double d)> leg2_amplitude;
  std::function<double(double rho)> area_density;  // sqrt(det g) in (rho, phi)
  double t1 = 0.0, t2 = 0.0;  // leg lengths through the critical point
  double phi_star = 0.0;      // direction of the critical point seen from z2
  double phi_flat = 0.4;      // window equals 1 for |phi - phi_star| <= phi_flat, 0 beyond 2 phi_flat
  int n = 2;
};

struct CompositionOptions {
  double eta_frac = 0.1;
  int panels_phi = 24;
  int panels_rho = 16;
  int panels_eta = 24;
  double rel_tol = 1e-6;  // agreement required between the two panel counts
};

struct CompositionResult {
  cplx value{};
  double quadrature_error = 0.0;
  double hessian = 0.0;  // second derivative of d1 + rho across the geodesic at w*
};

// Direct quadrature of the (w, eta) integral at output frequency xi with
// t = t1 + t2. Throws NoCriticalPoint if w* is not stationary and
// QuadratureDivergence if refinement changes the value by more than rel_tol.
CompositionResult brute_force_composition(const CompositionProblem& p, double xi,
                                          const CompositionOptions& opt = {});

}  // namespace conetrace
