#include "conetrace/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "conetrace/errors.hpp"

namespace conetrace {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

cplx i_pow(int m) {
  switch (((m % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return I;
    case 2: return -1.0;
    default: return -I;
  }
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must be positive and finite");
}

void check_regular(const DiffractionValue& D) {
  if (!D.regular) throw Error(ErrorKind::GeometricSet, "diffraction coefficient taken on the geometric set");
}

}  // namespace

double CutoffSpec::operator()(double xi) const {
  if (xi <= lower) return 0.0;
  if (xi >= upper) return 1.0;
  const double s = (xi - lower) / (upper - lower);
  return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
}

AmplitudeValue single_diffraction_amplitude(const DiffractionValue& D, double x, double x_prime,
                                            double theta_in, double theta_out, int n) {
  if (!(x > 0.0) || !(x_prime > 0.0)) throw Error(ErrorKind::NonPositiveRadius, "radii must be positive");
  check_positive(theta_in, "theta_in");
  check_positive(theta_out, "theta_out");
  check_regular(D);
  AmplitudeValue a;
  a.scalar = std::pow(x * x_prime, -(n - 1) / 2.0) / (2.0 * kPi * I) * D.value / std::sqrt(theta_in * theta_out);
  a.frequency_order = 0.0;
  return a;
}

AmplitudeValue interior_amplitude(double d, int morse, double theta, int n) {
  check_positive(d, "distance");
  check_positive(theta, "theta");
  AmplitudeValue a;
  a.scalar = std::polar(1.0, -kPi * (n - 1) / 4.0) * i_pow(-morse) * std::pow(2.0 * kPi, -(n + 1) / 2.0) *
             std::pow(d, -(n - 1) / 2.0) / std::sqrt(theta);
  a.frequency_order = (n - 1) / 2.0;
  return a;
}

ShortTimeAmplitude short_time_amplitude(double d, double t, int n, double theta) {
  check_positive(d, "distance");
  check_positive(t, "time");
  check_positive(theta, "theta");
  const cplx ph = std::polar(1.0, -kPi * (n - 1) / 4.0) / std::sqrt(theta);
  ShortTimeAmplitude r;
  r.full.scalar = t * ph * std::pow(kPi, -(n + 1) / 2.0) * std::pow(d + t, -(n + 1) / 2.0);
  r.full.frequency_order = (n - 1) / 2.0;
  r.reduced.scalar = ph * std::pow(d, -(n - 1) / 2.0) * std::pow(2.0 * kPi, -(n + 1) / 2.0);
  r.reduced.frequency_order = (n - 1) / 2.0;
  return r;
}

AmplitudeValue multi_diffraction_amplitude(const std::vector<SegmentInvariants>& segments,
                                           const std::vector<DiffractionValue>& diffractions, int n,
                                           cplx microlocalizer) {
  const std::size_t k = diffractions.size();
  if (k == 0 || (segments.size() != k + 1 && segments.size() != k))
    throw Error(ErrorKind::ChainMismatch, "need k diffractions with k or k + 1 segments");
  const double kk = static_cast<double>(k);
  cplx v = microlocalizer * std::polar(1.0, kPi * (n - 1) * (kk - 1) / 4.0) *
           std::pow(2.0 * kPi, (n + 1) * (kk - 1) / 2.0) / std::pow(2.0 * kPi * I, static_cast<int>(k));
  for (const auto& seg : segments) {
    check_positive(seg.length, "segment length");
    check_positive(seg.theta, "theta");
    v *= i_pow(-seg.morse_index) * std::pow(seg.length, -(n - 1) / 2.0) / std::sqrt(seg.theta);
  }
  for (const auto& D : diffractions) {
    check_regular(D);
    v *= D.value;
  }
  AmplitudeValue a;
  a.scalar = v;
  a.frequency_order = -kk * (n - 1) / 2.0;
  return a;
}

const char* model_name(TraceSingularityPrediction::Model m) {
  switch (m) {
    case TraceSingularityPrediction::Model::InverseSqrt: return "InverseSqrt";
    case TraceSingularityPrediction::Model::Log: return "Log";
    case TraceSingularityPrediction::Model::GeneralPower: return "GeneralPower";
  }
  return "?";
}

TraceSingularityPrediction trace_singularity(const std::vector<SegmentInvariants>& segments,
                                             const std::vector<DiffractionValue>& diffractions, double L,
                                             double L0, int n, LengthConvention conv) {
  const std::size_t k = segments.size();
  if (k == 0 || diffractions.size() != k)
    throw Error(ErrorKind::ChainMismatch, "closed chain needs one diffraction per segment");
  check_positive(L, "L");
  check_positive(L0, "L0");
  for (const auto& D : diffractions)
    if (!D.regular) throw Error(ErrorKind::NotStrictlyDiffractive, "a junction lies on the geometric set");
  TraceSingularityPrediction p;
  p.L = L;
  p.L0 = L0;
  p.k = static_cast<int>(k);
  p.n = n;
  p.order = p.k * (n - 1) / 2.0;
  p.convention = conv;
  p.segments = segments;
  p.diffractions = diffractions;
  const double kk = static_cast<double>(k);
  cplx c = (conv == LengthConvention::Primitive ? L0 : L) * std::pow(2.0 * kPi, kk * n / 2.0) *
           std::polar(1.0, kk * kPi * (n - 3) / 4.0);
  for (std::size_t j = 0; j < k; ++j) {
    check_positive(segments[j].theta, "theta");
    c *= i_pow(-segments[j].morse_index) * diffractions[j].value *
         std::pow(segments[j].length, -(n - 1) / 2.0) / std::sqrt(segments[j].theta);
  }
  p.coefficient = c;
  if (p.order == 0.5) p.model = TraceSingularityPrediction::Model::InverseSqrt;
  else if (p.order == 1.0) p.model = TraceSingularityPrediction::Model::Log;
  else p.model = TraceSingularityPrediction::Model::GeneralPower;
  return p;
}

TraceSingularityPrediction trace_singularity(const SurfaceModel& s, const DiffractiveGeodesic& g,
                                             LengthConvention conv, const JacobiOptions& jopt) {
  if (!g.strictly_diffractive)
    throw Error(ErrorKind::NotStrictlyDiffractive, "closed geodesic has a geometric junction");
  std::vector<SegmentInvariants> inv;
  std::vector<DiffractionValue> dif;
  for (std::size_t j = 0; j < g.segments.size(); ++j) {
    try {
      inv.push_back(segment_invariants(s, g.segments[j], jopt));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ConjugateDegeneracy)
        throw Error(ErrorKind::ConjugateDegeneracy, "segment " + std::to_string(j) + ": " + e.what());
      throw;
    }
    const Junction& jn = g.junctions[j];
    dif.push_back(diffraction_kernel(s.tip(jn.tip_id).link(), 2, {jn.q_out}, {jn.q_in},
                                     SummationPolicy::closed_form()));
  }
  return trace_singularity(inv, dif, g.L, g.L0, 2, conv);
}

cplx morse_bott_trace_coefficient(const TraceSingularityPrediction& p) {
  const int n = p.n;
  const AmplitudeValue b = multi_diffraction_amplitude(p.segments, p.diffractions, n);
  return b.scalar * std::polar(1.0, kPi * (n - 1) / 4.0) * std::pow(2.0 * kPi, (n + 1) / 2.0) * p.L0;
}

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

// Integral of f over [a, b] with 20-point Gauss-Legendre panels whose width
// at xi is at most width(xi).
template <class F, class W>
cplx panels(F&& f, double a, double b, W&& width) {
  const auto& x = GL::abscissa();
  const auto& wt = GL::weights();
  cplx sum = 0.0;
  double lo = a;
  while (lo < b) {
    const double hi = std::min(b, lo + width(lo));
    const double c = 0.5 * (lo + hi), r = 0.5 * (hi - lo);
    cplx ps = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0.0) ps += wt[i] * f(c);
      else ps += wt[i] * (f(c - r * x[i]) + f(c + r * x[i]));
    }
    sum += ps * r;
    lo = hi;
  }
  return sum;
}

// Integral from X to infinity of e^{-i tau xi} xi^{-s}, by the asymptotic
// series from repeated integration by parts; requires |tau| X large.
cplx oscillatory_tail(double tau, double s, double X) {
  const cplx z = I * tau * X;
  cplx term = 1.0, sum = 1.0;
  for (int k = 0; k < 200; ++k) {
    term *= -(s + k) / z;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::exp(-I * tau * X) * std::pow(X, -s) / (I * tau) * sum;
}

}  // namespace

std::vector<cplx> model_kernel(double order, double L, const CutoffSpec& cutoff, const std::vector<double>& t_grid,
                               const ModelKernelOptions& opt) {
  if (!(order > 0.0)) throw Error(ErrorKind::InvalidArgument, "model order must be positive");
  if (!(cutoff.lower > 0.0) || !(cutoff.upper > cutoff.lower))
    throw Error(ErrorKind::InvalidArgument, "bad cutoff");
  std::vector<cplx> out;
  out.reserve(t_grid.size());
  const double sig = opt.smoothing_sigma;
  for (double t : t_grid) {
    const double tau = t - L;
    auto f = [&](double xi) {
      double a = cutoff(xi) * std::pow(xi, -order);
      if (sig > 0.0) a *= std::exp(-0.5 * xi * xi / (sig * sig));
      return std::polar(a, -tau * xi);
    };
    const double osc = 1.0 / std::max(std::abs(tau), 1e-300);
    const double cap = sig > 0.0 ? 0.5 * sig : std::numeric_limits<double>::infinity();
    auto width = [&](double xi) { return std::min({osc, 0.5 * xi, cap}); };
    cplx v = panels(f, cutoff.lower, cutoff.upper, [&](double xi) { return std::min(width(xi), 0.25); });
    if (sig > 0.0) {
      v += panels(f, cutoff.upper, cutoff.upper + sig * std::sqrt(2.0 * 45.0), width);
    } else {
      if (tau == 0.0)
        throw Error(ErrorKind::QuadratureFailure, "unsmoothed model kernel diverges at t = L");
      const double X = std::max(cutoff.upper, 60.0 / std::abs(tau));
      v += panels(f, cutoff.upper, X, width);
      v += oscillatory_tail(tau, order, X);
    }
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorKind::QuadratureFailure, "model kernel not finite");
    out.push_back(v);
  }
  return out;
}

std::vector<cplx> model_kernel(const TraceSingularityPrediction& p, const CutoffSpec& cutoff,
                               const std::vector<double>& t_grid, const ModelKernelOptions& opt) {
  auto v = model_kernel(p.order, p.L, cutoff, t_grid, opt);
  for (auto& x : v) x *= p.coefficient;
  return v;
}

}  // namespace conetrace
