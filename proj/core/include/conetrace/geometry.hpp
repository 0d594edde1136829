#pragma once

#include <optional>
#include <vector>

#include "conetrace/surface.hpp"

namespace conetrace {

struct GeodesicState {
  double u0 = 0.0, u1 = 0.0;  // position
  double v0 = 0.0, v1 = 0.0;  // velocity (unit speed)
};

struct Endpoint {
  enum class Kind { Interior, Tip };
  Kind kind = Kind::Interior;
  int tip_id = -1;
  double link_point = 0.0;  // arclength coordinate on the tip's link
};

struct GeodesicSample {
  double t;
  GeodesicState s;
};

// Arclength-parameterized geodesic. Samples are the integrator's accepted
// steps; a path leaving a tip starts at t = epsilon rather than 0 and a path
// ending at a tip stops at length - x_hit, with `length` measured tip to tip.
struct GeodesicPath {
  std::vector<GeodesicSample> samples;
  Endpoint start, end;
  double length = 0.0;

  const GeodesicState& front() const { return samples.front().s; }
  const GeodesicState& back() const { return samples.back().s; }
  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  // Cubic Hermite interpolation between samples.
  GeodesicState at(double t) const;
};

struct GeometryOptions {
  double ode_tol = 1e-10;
  double tip_hit = 1e-6;   // a tip is hit when x falls below this
  double tip_start = 1e-6; // starting offset for shots out of a tip
  double root_tol = 1e-9;
  double classify_tol = 1e-6;
  int max_newton = 50;
  double max_step = 0.05;
};

double speed(const SurfaceModel& s, const GeodesicState& st);
// Rescale the velocity to unit length.
GeodesicState normalized(const SurfaceModel& s, GeodesicState st);
// Unit normal N with (v, N) positively oriented in chart coordinates.
std::array<double, 2> unit_normal(const SurfaceModel& s, const GeodesicState& st);

// Integrates for arclength T, stopping early on a tip hit. Throws LeftAtlas
// when the path leaves the chart domain.
GeodesicPath geodesic_flow(const SurfaceModel& s, GeodesicState start, double T,
                           const GeometryOptions& opt = {});

// Radial start out of a tip at link point y0; `length` is measured from the tip.
GeodesicPath shoot_from_tip(const SurfaceModel& s, int tip_id, double y0, double length,
                            const GeometryOptions& opt = {});

// Reverse direction copy of a path (t -> length - t).
GeodesicPath reversed(const GeodesicPath& p);

struct TipConnection {
  double yA = 0.0, yB = 0.0;
  double length = 0.0;
  GeodesicPath path;
  double newton_derivative = 0.0;  // d(miss)/dy at the solution
  int iterations = 0;
};

struct ConnectOptions {
  GeometryOptions geo;
  double max_length = 20.0;
  // Ignore arrivals at the target tip before this arclength (for loops
  // returning to the starting tip).
  double min_length = 0.0;
};

// Miss function at the target: g(velocity, d/du1) where the path first
// enters the target tip's designer region at x = designer_limit / 2.
struct MissEvaluation {
  bool arrived = false;
  double miss = 0.0;
  double derivative = 0.0;  // d miss / d yA via the b-Jacobi field
  double t_cross = 0.0;
  double jb = 0.0;          // b-Jacobi scalar at the crossing
};
MissEvaluation tip_miss(const SurfaceModel& s, int tipA, int tipB, double yA,
                        const ConnectOptions& opt = {});

TipConnection connect_tips(const SurfaceModel& s, int tipA, int tipB, double seed_y,
                           const ConnectOptions& opt = {});

enum class Continuation { Geometric, StrictlyDiffractive };

Continuation classify_continuation(const LinkSpectrum& link, double q_in, double q_out,
                                   double tol = 1e-6);

struct Junction {
  int tip_id = 0;
  double q_in = 0.0;   // where the incoming segment lands
  double q_out = 0.0;  // where the outgoing segment leaves
  double link_distance = 0.0;
  Continuation kind = Continuation::StrictlyDiffractive;
};

struct DiffractiveGeodesic {
  std::vector<GeodesicPath> segments;  // segment j ends where junction j sits
  std::vector<Junction> junctions;
  double L = 0.0;
  double L0 = 0.0;
  int iterates = 1;
  bool strictly_diffractive = true;
};

struct SegmentSeed {
  int from_tip = 0;
  int to_tip = 0;
  double seed_y = 0.0;
  double min_length = 0.0;
};

// Chains connect_tips over a cyclic tip sequence. `repeat` traverses the
// resulting cycle that many times.
DiffractiveGeodesic build_closed_diffractive(const SurfaceModel& s,
                                             const std::vector<SegmentSeed>& seeds, int repeat = 1,
                                             const ConnectOptions& opt = {});
// Assembles already solved segments (each tip to tip, cyclically chained).
DiffractiveGeodesic assemble_closed_diffractive(const SurfaceModel& s,
                                                std::vector<GeodesicPath> segments,
                                                double classify_tol = 1e-6);

}  // namespace conetrace
