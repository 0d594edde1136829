#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace conetrace {

using cplx = std::complex<double>;
using LinkPoint = std::vector<double>;

struct TabulatedMode {
  double mu = 0.0;
  std::function<double(const LinkPoint&)> phi;
};

struct LinkSpectrum {
  enum class Kind { Circle, Tabulated };

  Kind kind = Kind::Circle;
  double circumference = 0.0;
  std::vector<TabulatedMode> modes;
  int dim_link = 1;
  // Riemannian distance on the link; only used by the geometric-set guard for
  // tabulated links. Circles compute it directly.
  std::function<double(const LinkPoint&, const LinkPoint&)> distance;

  static LinkSpectrum circle(double circumference);
  static LinkSpectrum tabulated(std::vector<TabulatedMode> modes, int dim_link,
                                std::function<double(const LinkPoint&, const LinkPoint&)> distance = {});
};

struct SummationPolicy {
  enum class Kind { ClosedForm, Abel, Gaussian };

  Kind kind = Kind::ClosedForm;
  double r = 0.0;
  double sigma = 0.0;
  // 0 selects a cutoff at which the damping weight drops below 1e-17.
  long mode_cutoff = 0;

  static SummationPolicy closed_form() { return {}; }
  static SummationPolicy abel(double r, long cutoff = 0) { return {Kind::Abel, r, 0.0, cutoff}; }
  static SummationPolicy gaussian(double sigma, long cutoff = 0) {
    return {Kind::Gaussian, 0.0, sigma, cutoff};
  }
};

struct DiffractionValue {
  cplx value{};
  LinkPoint y;
  LinkPoint y_prime;
  bool regular = true;
};

struct LinkOptions {
  double geometric_tol = 1e-6;
};

// Square root of mu + ((2 - n)/2)^2, one per listed mode. For circles the
// modes are k with |k| < cutoff; for tabulated links the first `cutoff` modes.
std::vector<double> nu_values(const LinkSpectrum& link, int n, long cutoff);

// Signed separation y - y' reduced to (-rho/2, rho/2].
double circle_separation(double rho, double y, double y_prime);
double link_distance(const LinkSpectrum& link, const LinkPoint& y, const LinkPoint& y_prime);
// How far (y, y') is from being joined by a link geodesic of length |t|. On a
// circle such geodesics need not be minimizing: u = +-t mod circumference.
double geometric_offset(const LinkSpectrum& link, double t, const LinkPoint& y,
                        const LinkPoint& y_prime);

// Kernel of exp(-i t nu). ClosedForm (circle, n = 2) throws GeometricSet on
// the singular set; regularized policies always return the damped sum.
cplx half_kg_kernel(const LinkSpectrum& link, int n, double t, const LinkPoint& y,
                    const LinkPoint& y_prime, const SummationPolicy& policy,
                    const LinkOptions& opt = {});

DiffractionValue diffraction_kernel(const LinkSpectrum& link, int n, const LinkPoint& y,
                                    const LinkPoint& y_prime, const SummationPolicy& policy,
                                    const LinkOptions& opt = {});

// Regularized mode sum of f(nu_k) phi_k(y) conj(phi_k(y')). Not available
// under ClosedForm.
cplx functional_kernel(const LinkSpectrum& link, int n, const std::function<cplx(double)>& f,
                       const LinkPoint& y, const LinkPoint& y_prime,
                       const SummationPolicy& policy);

// (K[cos(pi nu)], K[sin(pi nu)])
std::pair<cplx, cplx> cos_sin_pi_nu_kernels(const LinkSpectrum& link, int n, const LinkPoint& y,
                                            const LinkPoint& y_prime,
                                            const SummationPolicy& policy,
                                            const LinkOptions& opt = {});

struct FrontCoefficients {
  cplx c_H;    // multiplies the indicator of the post-front side t > x + x'
  cplx c_log;  // multiplies log|x + x' - t|
};

FrontCoefficients sine_front_coefficients(const LinkSpectrum& link, int n, double x,
                                          double x_prime, const LinkPoint& y,
                                          const LinkPoint& y_prime,
                                          const SummationPolicy& policy,
                                          const LinkOptions& opt = {});

// Integral over s in [0, pi] of (cos(s nu) - cos(pi nu)) / (2 cos(s/2)).
double nu_integral(double nu);

struct A0B0 {
  cplx a0;
  cplx b0;
};

// sign_delta = +1 selects the post-front side t > x + x', where the jump term
// is active. Requires a regularizing policy.
A0B0 a0_b0_coefficients(const LinkSpectrum& link, int n, double x, double x_prime,
                        const LinkPoint& y, const LinkPoint& y_prime, int sign_delta,
                        const SummationPolicy& policy, const LinkOptions& opt = {});

// Abel-summed circle series at the given r values, extrapolated to r -> 1 by
// polynomial interpolation in (1 - r). Independent of the cotangent form.
cplx abel_extrapolated_circle(double rho, double t, double u,
                              const std::vector<double>& rs = {1 - 1e-3, 1 - 1e-4, 1 - 1e-5});

// Brute-force Abel sum for a single r (weights r^nu), n = 2 circle.
cplx abel_circle_sum(double rho, double t, double u, double r, long cutoff = 0);

// Closed form (i/(2 rho)) [cot(pi (u - t)/rho) - cot(pi (u + t)/rho)].
cplx circle_closed_form(double rho, double t, double u);

}  // namespace conetrace
