#include "conetrace/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "conetrace/errors.hpp"
#include "flow.hpp"

namespace conetrace {

namespace odeint = boost::numeric::odeint;
using detail::State6;

namespace detail {

State6 to_state6(const GeodesicState& g, double j, double jp) { return {g.u0, g.u1, g.v0, g.v1, j, jp}; }
GeodesicState to_geodesic(const State6& x) { return {x[0], x[1], x[2], x[3]}; }

namespace {

struct Rhs {
  const SurfaceModel* s;
  bool jacobi;
  void operator()(const State6& x, State6& dx, double) const {
    Christoffel c{};
    double k = 0.0;
    s->geometry_at(x[0], x[1], c, jacobi ? &k : nullptr);
    dx[0] = x[2];
    dx[1] = x[3];
    for (int m = 0; m < 2; ++m) {
      dx[2 + m] = -(c.g[m][0][0] * x[2] * x[2] + 2.0 * c.g[m][0][1] * x[2] * x[3] +
                    c.g[m][1][1] * x[3] * x[3]);
    }
    if (jacobi) {
      dx[4] = x[5];
      dx[5] = -k * x[4];
    } else {
      dx[4] = dx[5] = 0.0;
    }
  }
};

constexpr double kExitMargin = 1e-6;

}  // namespace

FlowRun run_flow(const SurfaceModel& s, const State6& x0, double t0, double t_max, bool jacobi,
                 const GeometryOptions& opt, const FlowEvent* event) {
  FlowRun run;
  run.t.push_back(t0);
  run.x.push_back(x0);
  if (!(t_max > t0)) return run;

  Rhs rhs{&s, jacobi};
  auto stepper = odeint::make_dense_output(opt.ode_tol, opt.ode_tol, opt.max_step,
                                           odeint::runge_kutta_dopri5<State6>());
  stepper.initialize(x0, t0, std::min(1e-3, 0.5 * (t_max - t0)));

  // Event functions: positive inside, crossing to <= 0 stops the flow.
  struct Ev {
    int tip_id;  // -1 chart exit, -2 custom
    std::function<double(const State6&)> f;
    double after;
  };
  std::vector<Ev> events;
  for (const auto& tip : s.tips)
    events.push_back({tip.id, [&tip, &opt](const State6& x) { return tip.x_of(x[0]) - opt.tip_hit; }, 0.0});
  if (std::isfinite(s.lo0))
    events.push_back({-1, [&s](const State6& x) { return x[0] - s.lo0 - kExitMargin; }, 0.0});
  if (std::isfinite(s.hi0))
    events.push_back({-1, [&s](const State6& x) { return s.hi0 - kExitMargin - x[0]; }, 0.0});
  if (event) events.push_back({-2, event->value, event->active_after});

  std::vector<double> prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) prev[i] = events[i].f(x0);

  State6 xi{};
  for (int guard = 0;; ++guard) {
    if (guard > 2000000) throw Error(ErrorKind::StepFailure, "step budget exhausted");
    auto [ta, tb] = stepper.do_step(rhs);
    const State6& xb = stepper.current_state();
    for (double v : xb)
      if (!std::isfinite(v)) throw Error(ErrorKind::StepFailure, "non-finite state");
    if (tb - ta < 1e-14 * std::max(1.0, std::abs(tb)))
      throw Error(ErrorKind::StepFailure, "step size underflow");

    // Earliest event inside (ta, min(tb, t_max)].
    const double tcap = std::min(tb, t_max);
    int hit = -1;
    double thit = tcap;
    for (std::size_t i = 0; i < events.size(); ++i) {
      double vb;
      if (tcap < tb) {
        stepper.calc_state(tcap, xi);
        vb = events[i].f(xi);
      } else {
        vb = events[i].f(xb);
      }
      const bool armed = tcap >= events[i].after;
      if (armed && prev[i] > 0.0 && vb <= 0.0) {
        double lo = std::max(ta, events[i].after), hi = tcap;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
          double mid = 0.5 * (lo + hi);
          stepper.calc_state(mid, xi);
          (events[i].f(xi) > 0.0 ? lo : hi) = mid;
        }
        if (hi < thit || hit < 0) {
          thit = hi;
          hit = static_cast<int>(i);
        }
      }
      prev[i] = vb;
    }
    if (hit >= 0) {
      stepper.calc_state(thit, xi);
      run.t.push_back(thit);
      run.x.push_back(xi);
      const int id = events[hit].tip_id;
      if (id == -1) throw Error(ErrorKind::LeftAtlas, "geodesic left the chart domain");
      run.stop = id == -2 ? FlowRun::Stop::Event : FlowRun::Stop::Tip;
      run.tip_id = id;
      return run;
    }
    if (tb >= t_max) {
      stepper.calc_state(t_max, xi);
      run.t.push_back(t_max);
      run.x.push_back(xi);
      run.stop = FlowRun::Stop::Length;
      return run;
    }
    run.t.push_back(tb);
    run.x.push_back(xb);
  }
}

}  // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;

double lower_dot(const MetricValue& g, const double a[2], const double b[2]) {
  return g.E * a[0] * b[0] + g.F * (a[0] * b[1] + a[1] * b[0]) + g.G * a[1] * b[1];
}

GeodesicPath path_from_run(const detail::FlowRun& run) {
  GeodesicPath p;
  p.samples.reserve(run.t.size());
  for (std::size_t i = 0; i < run.t.size(); ++i) p.samples.push_back({run.t[i], detail::to_geodesic(run.x[i])});
  p.length = run.t.back();
  return p;
}

void mark_tip_end(const SurfaceModel& s, const detail::FlowRun& run, GeodesicPath& p) {
  if (run.stop != detail::FlowRun::Stop::Tip) return;
  const TipChart& tip = s.tip(run.tip_id);
  p.end.kind = Endpoint::Kind::Tip;
  p.end.tip_id = tip.id;
  p.length = p.t_end() + tip.x_of(p.back().u0);
  // The final approach is radial, so the angle is constant there in exact
  // arithmetic; close to the tip a residual angular momentum makes it drift.
  // Read it where the approach is still well resolved.
  const double x_ref = std::min(0.5 * tip.designer_limit, 0.25 * p.length);
  double u1 = p.back().u1;
  for (auto it = p.samples.rbegin(); it != p.samples.rend(); ++it) {
    if (tip.x_of(it->s.u0) >= x_ref) break;
    u1 = it->s.u1;
  }
  p.end.link_point = tip.link_point(u1);
}

}  // namespace

double speed(const SurfaceModel& s, const GeodesicState& st) {
  const MetricValue g = s.metric_at(st.u0, st.u1);
  const double v[2] = {st.v0, st.v1};
  return std::sqrt(lower_dot(g, v, v));
}

GeodesicState normalized(const SurfaceModel& s, GeodesicState st) {
  const double sp = speed(s, st);
  if (!(sp > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero initial velocity");
  st.v0 /= sp;
  st.v1 /= sp;
  return st;
}

std::array<double, 2> unit_normal(const SurfaceModel& s, const GeodesicState& st) {
  const MetricValue g = s.metric_at(st.u0, st.u1);
  const double lo0 = g.E * st.v0 + g.F * st.v1;
  const double lo1 = g.F * st.v0 + g.G * st.v1;
  const double r = std::sqrt(g.det());
  return {-lo1 / r, lo0 / r};
}

GeodesicState GeodesicPath::at(double t) const {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  if (t <= samples.front().t) return samples.front().s;
  if (t >= samples.back().t) return samples.back().s;
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const GeodesicSample& s) { return v < s.t; });
  const GeodesicSample& b = *it;
  const GeodesicSample& a = *(it - 1);
  const double h = b.t - a.t;
  const double s = (t - a.t) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double d00 = 6 * s * s - 6 * s, d10 = 3 * s * s - 4 * s + 1;
  const double d01 = -d00, d11 = 3 * s * s - 2 * s;
  GeodesicState r;
  r.u0 = h00 * a.s.u0 + h10 * h * a.s.v0 + h01 * b.s.u0 + h11 * h * b.s.v0;
  r.u1 = h00 * a.s.u1 + h10 * h * a.s.v1 + h01 * b.s.u1 + h11 * h * b.s.v1;
  r.v0 = (d00 * a.s.u0 + d01 * b.s.u0) / h + d10 * a.s.v0 + d11 * b.s.v0;
  r.v1 = (d00 * a.s.u1 + d01 * b.s.u1) / h + d10 * a.s.v1 + d11 * b.s.v1;
  return r;
}

GeodesicPath geodesic_flow(const SurfaceModel& s, GeodesicState start, double T,
                           const GeometryOptions& opt) {
  if (!(T > 0.0)) throw Error(ErrorKind::InvalidArgument, "flow length must be positive");
  if (!s.inside(start.u0)) throw Error(ErrorKind::LeftAtlas, "start point outside the chart");
  start = normalized(s, start);
  auto run = detail::run_flow(s, detail::to_state6(start), 0.0, T, false, opt);
  GeodesicPath p = path_from_run(run);
  mark_tip_end(s, run, p);
  return p;
}

GeodesicPath shoot_from_tip(const SurfaceModel& s, int tip_id, double y0, double length,
                            const GeometryOptions& opt) {
  const TipChart& tip = s.tip(tip_id);
  const double eps = opt.tip_start;
  if (!(length > eps)) throw Error(ErrorKind::InvalidArgument, "shot shorter than the start offset");
  GeodesicState st{tip.u0_of(eps), tip.angle_of(y0), double(tip.orientation), 0.0};
  st = normalized(s, st);
  auto run = detail::run_flow(s, detail::to_state6(st), eps, length, false, opt);
  GeodesicPath p = path_from_run(run);
  p.start.kind = Endpoint::Kind::Tip;
  p.start.tip_id = tip_id;
  p.start.link_point = tip.link_point(st.u1);
  mark_tip_end(s, run, p);
  return p;
}

GeodesicPath reversed(const GeodesicPath& p) {
  GeodesicPath r;
  r.length = p.length;
  r.start = p.end;
  r.end = p.start;
  r.samples.reserve(p.samples.size());
  for (auto it = p.samples.rbegin(); it != p.samples.rend(); ++it) {
    GeodesicState s = it->s;
    s.v0 = -s.v0;
    s.v1 = -s.v1;
    r.samples.push_back({p.length - it->t, s});
  }
  return r;
}

MissEvaluation tip_miss(const SurfaceModel& s, int tipA, int tipB, double yA, const ConnectOptions& opt) {
  const TipChart& A = s.tip(tipA);
  const TipChart& B = s.tip(tipB);
  const double eps = opt.geo.tip_start;
  GeodesicState st = normalized(s, {A.u0_of(eps), A.angle_of(yA), double(A.orientation), 0.0});
  // b-Jacobi field for a unit change of link arclength: the radial variation
  // has g-length sqrt(G)/a, measured here against the positively oriented normal.
  const MetricJets mj = s.metric(Jet::variable(st.u0, 0), Jet(st.u1));
  const double sg = std::sqrt(mj.G.v);
  const double j0 = A.orientation * sg / A.cone_factor;
  const double j0p = mj.G.d0 / (2.0 * sg) / A.cone_factor;  // d/dx with x = orientation (u0 - r0)
  const double xc = 0.5 * B.designer_limit;
  detail::FlowEvent ev{[&B, xc](const State6& x) { return B.x_of(x[0]) - xc; }, opt.min_length};
  MissEvaluation out;
  detail::FlowRun run;
  try {
    run = detail::run_flow(s, detail::to_state6(st, j0, j0p), eps, opt.max_length, true, opt.geo, &ev);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::LeftAtlas) return out;
    throw;
  }
  if (run.stop != detail::FlowRun::Stop::Event) return out;
  const State6& x = run.x.back();
  const GeodesicState g = detail::to_geodesic(x);
  const MetricValue gv = s.metric_at(g.u0, g.u1);
  const double v[2] = {g.v0, g.v1};
  const double e1[2] = {0.0, 1.0};
  const auto N = unit_normal(s, g);
  const double n[2] = {N[0], N[1]};
  const Christoffel c = s.christoffel(g.u0, g.u1);
  double nabla[2];  // nabla_N d/du1
  for (int k = 0; k < 2; ++k) nabla[k] = N[0] * c.g[k][0][1] + N[1] * c.g[k][1][1];
  out.arrived = true;
  out.miss = lower_dot(gv, v, e1);
  out.derivative = x[5] * lower_dot(gv, n, e1) + x[4] * lower_dot(gv, v, nabla);
  out.t_cross = run.t.back();
  out.jb = x[4];
  return out;
}

TipConnection connect_tips(const SurfaceModel& s, int tipA, int tipB, double seed_y,
                           const ConnectOptions& opt) {
  const TipChart& A = s.tip(tipA);
  const TipChart& B = s.tip(tipB);
  const double circ = A.circumference();
  const double max_step = 0.1 * circ;
  double y = seed_y;
  MissEvaluation m = tip_miss(s, tipA, tipB, y, opt);
  if (!m.arrived)
    throw Error(ErrorKind::NoConvergence, "seed geodesic does not reach the target tip region");
  int it = 0;
  auto degenerate = [&](const MissEvaluation& e) {
    // The derivative approximates a_B times the b-Jacobi scalar at the target.
    const double d = e.t_cross + 0.5 * B.designer_limit;
    return std::abs(e.derivative) < 1e-8 * B.cone_factor * d;
  };
  while (std::abs(m.miss) >= opt.geo.root_tol) {
    if (++it > opt.geo.max_newton) throw Error(ErrorKind::NoConvergence, "Newton iteration cap reached");
    if (degenerate(m))
      throw Error(ErrorKind::ConjugateDegeneracy, "tips are conjugate along the connecting geodesic");
    double step = -m.miss / m.derivative;
    step = std::clamp(step, -max_step, max_step);
    // Backtrack until the miss decreases and the target region is reached.
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      MissEvaluation trial = tip_miss(s, tipA, tipB, y + step, opt);
      if (trial.arrived && std::abs(trial.miss) < std::abs(m.miss)) {
        y += step;
        m = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw Error(ErrorKind::NoConvergence, "line search failed in tip connection");
  }
  if (degenerate(m))
    throw Error(ErrorKind::ConjugateDegeneracy, "tips are conjugate along the connecting geodesic");

  GeodesicPath p = shoot_from_tip(s, tipA, y, opt.max_length, opt.geo);
  if (p.end.kind != Endpoint::Kind::Tip || p.end.tip_id != tipB || p.length < opt.min_length)
    throw Error(ErrorKind::NoConvergence, "converged shot did not end at the target tip");
  TipConnection c;
  c.yA = p.start.link_point;
  c.yB = p.end.link_point;
  c.length = p.length;
  c.path = std::move(p);
  c.newton_derivative = m.derivative;
  c.iterations = it;
  return c;
}

Continuation classify_continuation(const LinkSpectrum& link, double q_in, double q_out, double tol) {
  return geometric_offset(link, kPi, {q_in}, {q_out}) < tol ? Continuation::Geometric
                                                              : Continuation::StrictlyDiffractive;
}

DiffractiveGeodesic assemble_closed_diffractive(const SurfaceModel& s, std::vector<GeodesicPath> segments,
                                                double classify_tol) {
  if (segments.empty()) throw Error(ErrorKind::ChainMismatch, "no segments");
  DiffractiveGeodesic g;
  const std::size_t N = segments.size();
  for (std::size_t j = 0; j < N; ++j) {
    const GeodesicPath& a = segments[j];
    const GeodesicPath& b = segments[(j + 1) % N];
    if (a.start.kind != Endpoint::Kind::Tip || a.end.kind != Endpoint::Kind::Tip)
      throw Error(ErrorKind::ChainMismatch, "segment " + std::to_string(j) + " is not tip to tip");
    if (a.end.tip_id != b.start.tip_id)
      throw Error(ErrorKind::ChainMismatch, "segment " + std::to_string(j) + " ends at a different tip");
    const TipChart& tip = s.tip(a.end.tip_id);
    Junction jn;
    jn.tip_id = tip.id;
    jn.q_in = a.end.link_point;
    jn.q_out = b.start.link_point;
    const LinkSpectrum link = tip.link();
    jn.link_distance = link_distance(link, {jn.q_in}, {jn.q_out});
    jn.kind = classify_continuation(link, jn.q_in, jn.q_out, classify_tol);
    if (jn.kind == Continuation::Geometric) g.strictly_diffractive = false;
    g.junctions.push_back(jn);
    g.L += a.length;
  }
  // Primitive period of the segment sequence.
  auto same = [&](const GeodesicPath& a, const GeodesicPath& b) {
    const double tol = 1e-6;
    auto close = [&](double p, double q, int tip) {
      return std::abs(circle_separation(s.tip(tip).circumference(), p, q)) < tol;
    };
    return a.start.tip_id == b.start.tip_id && a.end.tip_id == b.end.tip_id &&
           std::abs(a.length - b.length) < tol && close(a.start.link_point, b.start.link_point, a.start.tip_id) &&
           close(a.end.link_point, b.end.link_point, a.end.tip_id);
  };
  std::size_t period = N;
  for (std::size_t p = 1; p < N; ++p) {
    if (N % p) continue;
    bool ok = true;
    for (std::size_t j = 0; j < N && ok; ++j) ok = same(segments[j], segments[(j + p) % N]);
    if (ok) {
      period = p;
      break;
    }
  }
  g.iterates = static_cast<int>(N / period);
  g.L0 = g.L / g.iterates;
  g.segments = std::move(segments);
  return g;
}

DiffractiveGeodesic build_closed_diffractive(const SurfaceModel& s, const std::vector<SegmentSeed>& seeds,
                                             int repeat, const ConnectOptions& opt) {
  if (seeds.empty() || repeat < 1) throw Error(ErrorKind::InvalidArgument, "empty tip sequence");
  std::vector<GeodesicPath> segs;
  for (const auto& sd : seeds) {
    ConnectOptions o = opt;
    o.min_length = std::max(opt.min_length, sd.min_length);
    segs.push_back(connect_tips(s, sd.from_tip, sd.to_tip, sd.seed_y, o).path);
  }
  std::vector<GeodesicPath> all;
  for (int r = 0; r < repeat; ++r) all.insert(all.end(), segs.begin(), segs.end());
  return assemble_closed_diffractive(s, std::move(all), opt.geo.classify_tol);
}

}  // namespace conetrace
