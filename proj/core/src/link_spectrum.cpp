#include "conetrace/link_spectrum.hpp"

#include <algorithm>
#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>

#include "conetrace/errors.hpp"
#include "numeric_util.hpp"

namespace conetrace {

namespace {

constexpr double kPi = std::numbers::pi;
// -log(1e-17): damping weights below this are dropped.
constexpr double kTailLog = 39.2;

double nu_shift_sq(int n) {
  double s = (2.0 - n) / 2.0;
  return s * s;
}

double circle_alpha(const LinkSpectrum& link) { return 2.0 * kPi / link.circumference; }

void check_link(const LinkSpectrum& link) {
  if (link.kind == LinkSpectrum::Kind::Circle && !(link.circumference > 0.0))
    throw Error(ErrorKind::InvalidArgument, "circle circumference must be positive");
}

double policy_weight(const SummationPolicy& p, double nu) {
  switch (p.kind) {
    case SummationPolicy::Kind::Abel: return std::pow(p.r, nu);
    case SummationPolicy::Kind::Gaussian: return std::exp(-nu * nu / (2.0 * p.sigma * p.sigma));
    case SummationPolicy::Kind::ClosedForm: break;
  }
  return 1.0;
}

double policy_nu_max(const SummationPolicy& p) {
  switch (p.kind) {
    case SummationPolicy::Kind::Abel:
      if (!(p.r > 0.0 && p.r < 1.0)) throw Error(ErrorKind::InvalidArgument, "Abel r must lie in (0,1)");
      return kTailLog / -std::log(p.r);
    case SummationPolicy::Kind::Gaussian:
      if (!(p.sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "Gaussian sigma must be positive");
      return p.sigma * std::sqrt(2.0 * kTailLog);
    case SummationPolicy::Kind::ClosedForm: break;
  }
  return 0.0;
}

// Offset of u from the singular set {u = +-t mod rho}.
double circle_singular_offset(double rho, double t, double u) {
  double a = std::abs(detail::wrap_symmetric(u - t, rho));
  double b = std::abs(detail::wrap_symmetric(u + t, rho));
  return std::min(a, b);
}

double scalar_point(const LinkPoint& p) {
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, "empty link point");
  return p[0];
}

bool is_geometric(const LinkSpectrum& link, double t, const LinkPoint& y, const LinkPoint& yp,
                  double tol) {
  if (link.kind == LinkSpectrum::Kind::Tabulated && !link.distance) return false;
  return geometric_offset(link, t, y, yp) < tol;
}

}  // namespace

LinkSpectrum LinkSpectrum::circle(double circumference) {
  LinkSpectrum l;
  l.kind = Kind::Circle;
  l.circumference = circumference;
  l.dim_link = 1;
  check_link(l);
  return l;
}

LinkSpectrum LinkSpectrum::tabulated(std::vector<TabulatedMode> modes, int dim_link,
                                     std::function<double(const LinkPoint&, const LinkPoint&)> distance) {
  for (std::size_t i = 1; i < modes.size(); ++i)
    if (modes[i].mu < modes[i - 1].mu)
      throw Error(ErrorKind::InvalidArgument, "tabulated eigenvalues must be nondecreasing");
  if (!modes.empty() && modes.front().mu != 0.0)
    throw Error(ErrorKind::InvalidArgument, "first tabulated eigenvalue must be zero");
  LinkSpectrum l;
  l.kind = Kind::Tabulated;
  l.modes = std::move(modes);
  l.dim_link = dim_link;
  l.distance = std::move(distance);
  return l;
}

std::vector<double> nu_values(const LinkSpectrum& link, int n, long cutoff) {
  if (cutoff < 1) throw Error(ErrorKind::InvalidArgument, "cutoff must be >= 1");
  check_link(link);
  const double shift = nu_shift_sq(n);
  std::vector<double> out;
  if (link.kind == LinkSpectrum::Kind::Circle) {
    const double alpha = circle_alpha(link);
    for (long k = -(cutoff - 1); k <= cutoff - 1; ++k) {
      double mu = alpha * alpha * double(k) * double(k);
      out.push_back(std::sqrt(mu + shift));
    }
  } else {
    long m = std::min<long>(cutoff, static_cast<long>(link.modes.size()));
    for (long i = 0; i < m; ++i) out.push_back(std::sqrt(link.modes[i].mu + shift));
  }
  std::sort(out.begin(), out.end());
  return out;
}

double circle_separation(double rho, double y, double y_prime) {
  return detail::wrap_symmetric(y - y_prime, rho);
}

double geometric_offset(const LinkSpectrum& link, double t, const LinkPoint& y,
                        const LinkPoint& y_prime) {
  if (link.kind == LinkSpectrum::Kind::Circle)
    return circle_singular_offset(
        link.circumference, t, circle_separation(link.circumference, scalar_point(y), scalar_point(y_prime)));
  return std::abs(link_distance(link, y, y_prime) - std::abs(t));
}

double link_distance(const LinkSpectrum& link, const LinkPoint& y, const LinkPoint& y_prime) {
  if (link.kind == LinkSpectrum::Kind::Circle)
    return std::abs(circle_separation(link.circumference, scalar_point(y), scalar_point(y_prime)));
  if (!link.distance) throw Error(ErrorKind::InvalidArgument, "tabulated link has no distance function");
  return link.distance(y, y_prime);
}

cplx circle_closed_form(double rho, double t, double u) {
  const double a = kPi / rho;
  // cot A - cot B = sin(B - A) / (sin A sin B); avoids cancelling two large cotangents
  return cplx(0.0, 1.0 / (2.0 * rho)) * std::sin(2.0 * a * t) / (std::sin(a * (u - t)) * std::sin(a * (u + t)));
}

cplx abel_circle_sum(double rho, double t, double u, double r, long cutoff) {
  const double alpha = 2.0 * kPi / rho;
  const double q = std::pow(r, alpha);
  if (cutoff <= 0) cutoff = static_cast<long>(std::ceil(kTailLog / -std::log(q))) + 1;
  const double th1 = alpha * (u - t);
  const double th2 = -alpha * (u + t);
  const cplx z1 = std::polar(q, th1);
  const cplx z2 = std::polar(q, th2);
  detail::CompensatedSum<cplx> acc;
  acc.add(1.0);
  cplx p1 = z1, p2 = z2;
  for (long k = 1; k <= cutoff; ++k) {
    acc.add(p1 + p2);
    if ((k & 1023) == 0) {
      // resynchronise the recurrence to keep the phase error at rounding level
      double qk = std::pow(q, double(k + 1));
      p1 = std::polar(qk, th1 * double(k + 1));
      p2 = std::polar(qk, th2 * double(k + 1));
    } else {
      p1 *= z1;
      p2 *= z2;
    }
  }
  return acc.value() / rho;
}

cplx abel_extrapolated_circle(double rho, double t, double u, const std::vector<double>& rs) {
  const std::size_t m = rs.size();
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "no Abel radii");
  std::vector<double> h(m);
  std::vector<cplx> v(m);
  for (std::size_t i = 0; i < m; ++i) {
    h[i] = 1.0 - rs[i];
    v[i] = abel_circle_sum(rho, t, u, rs[i]);
  }
  // Neville evaluation of the interpolating polynomial at h = 0.
  for (std::size_t level = 1; level < m; ++level)
    for (std::size_t i = 0; i + level < m; ++i)
      v[i] = (h[i + level] * v[i] - h[i] * v[i + 1]) / (h[i + level] - h[i]);
  return v[0];
}

cplx functional_kernel(const LinkSpectrum& link, int n, const std::function<cplx(double)>& f,
                       const LinkPoint& y, const LinkPoint& y_prime, const SummationPolicy& policy) {
  check_link(link);
  if (policy.kind == SummationPolicy::Kind::ClosedForm)
    throw Error(ErrorKind::PolicyMismatch, "generic mode sums need a regularizing policy");
  const double shift = nu_shift_sq(n);
  const double nu_max = policy_nu_max(policy);
  detail::CompensatedSum<cplx> acc;
  if (link.kind == LinkSpectrum::Kind::Circle) {
    const double rho = link.circumference;
    const double alpha = circle_alpha(link);
    const double u = circle_separation(rho, scalar_point(y), scalar_point(y_prime));
    long kmax = policy.mode_cutoff > 0 ? policy.mode_cutoff
                                       : static_cast<long>(std::ceil(nu_max / alpha)) + 1;
    for (long k = 0; k <= kmax; ++k) {
      double nu = std::sqrt(alpha * alpha * double(k) * double(k) + shift);
      cplx fw = f(nu) * policy_weight(policy, nu);
      if (k == 0) {
        acc.add(fw);
      } else {
        acc.add(fw * (2.0 * std::cos(double(k) * alpha * u)));
      }
    }
    return acc.value() / rho;
  }
  long m = static_cast<long>(link.modes.size());
  if (policy.mode_cutoff > 0) m = std::min(m, policy.mode_cutoff);
  for (long i = 0; i < m; ++i) {
    const auto& md = link.modes[i];
    double nu = std::sqrt(md.mu + shift);
    acc.add(f(nu) * policy_weight(policy, nu) * (md.phi(y) * md.phi(y_prime)));
  }
  return acc.value();
}

cplx half_kg_kernel(const LinkSpectrum& link, int n, double t, const LinkPoint& y,
                    const LinkPoint& y_prime, const SummationPolicy& policy, const LinkOptions& opt) {
  check_link(link);
  if (policy.kind == SummationPolicy::Kind::ClosedForm) {
    if (link.kind != LinkSpectrum::Kind::Circle || n != 2)
      throw Error(ErrorKind::PolicyMismatch, "closed form exists only for circle links with n = 2");
    if (is_geometric(link, t, y, y_prime, opt.geometric_tol))
      throw Error(ErrorKind::GeometricSet, "link points separated by a geodesic of length |t|");
    const double rho = link.circumference;
    return circle_closed_form(rho, t, circle_separation(rho, y[0], y_prime[0]));
  }
  if (link.kind == LinkSpectrum::Kind::Circle && n == 2 &&
      policy.kind == SummationPolicy::Kind::Abel) {
    const double rho = link.circumference;
    // weights r^nu with nu = alpha |k|: the same series as the generic path
    return abel_circle_sum(rho, t, circle_separation(rho, y[0], y_prime[0]), policy.r,
                           policy.mode_cutoff);
  }
  return functional_kernel(
      link, n, [t](double nu) { return std::polar(1.0, -t * nu); }, y, y_prime, policy);
}

DiffractionValue diffraction_kernel(const LinkSpectrum& link, int n, const LinkPoint& y,
                                    const LinkPoint& y_prime, const SummationPolicy& policy,
                                    const LinkOptions& opt) {
  if (link.kind == LinkSpectrum::Kind::Tabulated && policy.kind == SummationPolicy::Kind::ClosedForm)
    throw Error(ErrorKind::PolicyMismatch, "closed form requested for a tabulated link");
  DiffractionValue d;
  d.y = y;
  d.y_prime = y_prime;
  d.regular = !is_geometric(link, kPi, y, y_prime, opt.geometric_tol);
  if (!d.regular && policy.kind == SummationPolicy::Kind::ClosedForm)
    throw Error(ErrorKind::GeometricSet, "junction lies on the geometric set");
  d.value = half_kg_kernel(link, n, kPi, y, y_prime, policy, opt);
  return d;
}

std::pair<cplx, cplx> cos_sin_pi_nu_kernels(const LinkSpectrum& link, int n, const LinkPoint& y,
                                            const LinkPoint& y_prime, const SummationPolicy& policy,
                                            const LinkOptions& opt) {
  if (policy.kind == SummationPolicy::Kind::ClosedForm &&
      is_geometric(link, kPi, y, y_prime, opt.geometric_tol))
    throw Error(ErrorKind::GeometricSet, "link points on the geometric set");
  const cplx em = half_kg_kernel(link, n, kPi, y, y_prime, policy, opt);
  // K[e^{+i pi nu}](y,y') = conj(K[e^{-i pi nu}](y',y)) for a self-adjoint nu
  const cplx ep = std::conj(half_kg_kernel(link, n, kPi, y_prime, y, policy, opt));
  const cplx c = 0.5 * (em + ep);
  const cplx s = (ep - em) / cplx(0.0, 2.0);
  return {c, s};
}

FrontCoefficients sine_front_coefficients(const LinkSpectrum& link, int n, double x, double x_prime,
                                          const LinkPoint& y, const LinkPoint& y_prime,
                                          const SummationPolicy& policy, const LinkOptions& opt) {
  if (!(x > 0.0) || !(x_prime > 0.0))
    throw Error(ErrorKind::NonPositiveRadius, "radial coordinates must be positive");
  auto [kc, ks] = cos_sin_pi_nu_kernels(link, n, y, y_prime, policy, opt);
  const double scale = std::pow(x * x_prime, -(n - 1) / 2.0);
  return {-0.5 * scale * ks, -scale * kc / (2.0 * kPi)};
}

double nu_integral(double nu) {
  if (nu == 0.0) return 0.0;
  // Termwise against the cosine series of 1 / (2 cos(s/2)); the sum telescopes into digammas.
  return std::cos(kPi * nu) * (boost::math::digamma(0.5) - boost::math::digamma(0.5 + nu)) +
         0.5 * kPi * std::sin(kPi * nu);
}

A0B0 a0_b0_coefficients(const LinkSpectrum& link, int n, double x, double x_prime, const LinkPoint& y,
                        const LinkPoint& y_prime, int sign_delta, const SummationPolicy& policy,
                        const LinkOptions& opt) {
  if (!(x > 0.0) || !(x_prime > 0.0))
    throw Error(ErrorKind::NonPositiveRadius, "radial coordinates must be positive");
  if (policy.kind == SummationPolicy::Kind::ClosedForm)
    throw Error(ErrorKind::PolicyMismatch, "the nu-integral term needs a regularizing policy");
  if (is_geometric(link, kPi, y, y_prime, opt.geometric_tol))
    throw Error(ErrorKind::GeometricSet, "link points on the geometric set");
  const double pre = 1.0 / (kPi * std::pow(x * x_prime, (n - 1) / 2.0));
  const bool jump = sign_delta > 0;
  auto f = [jump](double nu) {
    double v = std::log(2.0 * std::sqrt(2.0)) * std::cos(kPi * nu) + nu_integral(nu);
    if (jump) v -= 0.5 * kPi * std::sin(kPi * nu);
    return cplx(v, 0.0);
  };
  cplx a0 = pre * functional_kernel(link, n, f, y, y_prime, policy);
  cplx b0 = -pre * functional_kernel(
                       link, n, [](double nu) { return cplx(std::cos(kPi * nu), 0.0); }, y, y_prime,
                       policy);
  return {a0, b0};
}

}  // namespace conetrace
