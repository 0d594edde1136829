#include "conetrace/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "conetrace/errors.hpp"
#include "flow.hpp"

namespace conetrace {

namespace {

JacobiSolution solve(const SurfaceModel& s, const GeodesicPath& path, double j0, double j0p,
                     const JacobiOptions& opt) {
  if (path.samples.size() < 2) throw Error(ErrorKind::InvalidArgument, "path has no extent");
  GeometryOptions go;
  go.ode_tol = opt.ode_tol;
  const double t0 = path.t_begin();
  const double t1 = path.t_end();
  auto run = detail::run_flow(s, detail::to_state6(path.front(), j0, j0p), t0, t1, true, go);
  JacobiSolution sol;
  sol.length = path.length;
  sol.t = std::move(run.t);
  for (const auto& x : run.x) {
    sol.j.push_back(x[4]);
    sol.jp.push_back(x[5]);
    sol.K.push_back(s.gauss_curvature(x[0], x[1]));
  }
  return sol;
}

}  // namespace

double JacobiSolution::value(double tq) const {
  if (tq <= t.front()) return j.front();
  if (tq >= t.back()) return j.back();
  std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), tq) - t.begin()) - 1;
  const double h = t[i + 1] - t[i];
  const double s = (tq - t[i]) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double H0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double H1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double H2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
  const double H3 = 0.5 * s3 - s4 + 0.5 * s5;
  const double H4 = -4 * s3 + 7 * s4 - 3 * s5;
  const double H5 = 10 * s3 - 15 * s4 + 6 * s5;
  const double a0 = -K[i] * j[i], a1 = -K[i + 1] * j[i + 1];
  return H0 * j[i] + H1 * h * jp[i] + H2 * h * h * a0 + H3 * h * h * a1 + H4 * h * jp[i + 1] +
         H5 * j[i + 1];
}

double JacobiSolution::at_end() const { return j.back() + jp.back() * (length - t.back()); }

JacobiSolution integrate_jacobi(const SurfaceModel& s, const GeodesicPath& path, double j0, double j0p,
                                const JacobiOptions& opt) {
  return solve(s, path, j0, j0p, opt);
}

JacobiSolution b_jacobi_from_tip(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  if (path.start.kind != Endpoint::Kind::Tip)
    throw Error(ErrorKind::InvalidArgument, "path does not start at a tip");
  const TipChart& tip = s.tip(path.start.tip_id);
  const GeodesicState& st = path.front();
  const double x = tip.x_of(st.u0);
  const MetricJets m = s.metric(Jet::variable(st.u0, 0), Jet(st.u1));
  const double sg = std::sqrt(m.G.v);
  // First-order expansion of sqrt(G) = a x (1 + c x + ...); the field is
  // sqrt(G)/a in designer coordinates.
  if (!(sg > 0.0) || !std::isfinite(m.G.d0) || std::abs(sg / x - tip.cone_factor) > 1e-3 * tip.cone_factor)
    throw Error(ErrorKind::SeriesStartFailure, "no first-order expansion of the link metric at the tip");
  const double j0 = sg / tip.cone_factor;
  const double j0p = tip.orientation * m.G.d0 / (2.0 * sg) / tip.cone_factor;  // d/dx
  return solve(s, path, j0, j0p, opt);
}

JacobiSolution vanishing_jacobi(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  if (path.start.kind == Endpoint::Kind::Tip) return b_jacobi_from_tip(s, path, opt);
  return solve(s, path, 0.0, 1.0, opt);
}

namespace {

void check_nonconjugate(const JacobiSolution& sol, const JacobiOptions& opt) {
  if (std::abs(sol.at_end()) < opt.conjugacy * sol.length)
    throw Error(ErrorKind::ConjugateDegeneracy, "segment endpoints are conjugate");
}

}  // namespace

double theta(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  JacobiSolution sol = vanishing_jacobi(s, path, opt);
  check_nonconjugate(sol, opt);
  return std::abs(sol.at_end()) / sol.length;
}

std::pair<double, double> theta_symmetric_check(const SurfaceModel& s, const GeodesicPath& path,
                                                const JacobiOptions& opt) {
  return {theta(s, path, opt), theta(s, reversed(path), opt)};
}

std::vector<double> conjugate_points(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  JacobiSolution sol = vanishing_jacobi(s, path, opt);
  check_nonconjugate(sol, opt);
  std::vector<double> zeros;
  // Skip the starting zero itself.
  for (std::size_t i = 1; i < sol.t.size(); ++i) {
    const double a = sol.j[i - 1], b = sol.j[i];
    if (i == 1 && a == 0.0) continue;
    if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) {
      double lo = sol.t[i - 1], hi = sol.t[i];
      const double sa = a;
      while (hi - lo > opt.root_tol) {
        const double mid = 0.5 * (lo + hi);
        const double v = sol.value(mid);
        ((v > 0.0) == (sa > 0.0) ? lo : hi) = mid;
      }
      zeros.push_back(0.5 * (lo + hi));
    }
  }
  return zeros;
}

int morse_index(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  return static_cast<int>(conjugate_points(s, path, opt).size());
}

double broken_hessian(const SurfaceModel& s, const GeodesicPath& leg1, const GeodesicPath& leg2,
                      const JacobiOptions& opt) {
  JacobiSolution a = vanishing_jacobi(s, leg1, opt);
  JacobiSolution b = vanishing_jacobi(s, reversed(leg2), opt);
  check_nonconjugate(a, opt);
  check_nonconjugate(b, opt);
  if (leg1.end.kind == Endpoint::Kind::Tip || leg2.start.kind == Endpoint::Kind::Tip)
    throw Error(ErrorKind::InvalidArgument, "break point must be interior");
  return a.derivative_at_end() / a.at_end() + b.derivative_at_end() / b.at_end();
}

int broken_hessian_index(const SurfaceModel& s, const GeodesicPath& leg1, const GeodesicPath& leg2,
                         const JacobiOptions& opt) {
  return broken_hessian(s, leg1, leg2, opt) < 0.0 ? 1 : 0;
}

double wronskian_drift(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  JacobiSolution a = solve(s, path, 1.0, 0.0, opt);
  JacobiSolution b = solve(s, path, 0.0, 1.0, opt);
  // Both runs end at the same parameter even if their steps differ.
  const double w = a.j.back() * b.jp.back() - a.jp.back() * b.j.back();
  return std::abs(w - 1.0);
}

SegmentInvariants segment_invariants(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt) {
  SegmentInvariants inv;
  inv.length = path.length;
  inv.morse_index = morse_index(s, path, opt);
  inv.theta = theta(s, path, opt);
  inv.start = path.start;
  inv.end = path.end;
  return inv;
}

}  // namespace conetrace
