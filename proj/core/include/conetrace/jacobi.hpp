#pragma once

#include <utility>
#include <vector>

#include "conetrace/geometry.hpp"

namespace conetrace {

struct JacobiOptions {
  double ode_tol = 1e-12;
  double conjugacy = 1e-8;  // |j(d)| below conjugacy * d is degenerate
  double root_tol = 1e-10;
};

// Normal component j of a Jacobi field against the parallel unit normal,
// solving j'' + K j = 0 along the path. `length` is the full segment length;
// samples stop at the path's last sample (x_hit short of a tip end).
struct JacobiSolution {
  std::vector<double> t, j, jp, K;
  double length = 0.0;

  // Quintic Hermite interpolation (uses j'' = -K j at the knots).
  double value(double t) const;
  // j at the path length, extrapolated linearly across the tip offset.
  double at_end() const;
  double derivative_at_end() const { return jp.back(); }
};

JacobiSolution integrate_jacobi(const SurfaceModel& s, const GeodesicPath& path, double j0, double j0p,
                                const JacobiOptions& opt = {});

// b-Jacobi field of a path leaving a tip, normalized by a unit link vector:
// j ~ x at the tip (exactly sqrt(G)/a in the designer region).
JacobiSolution b_jacobi_from_tip(const SurfaceModel& s, const GeodesicPath& path,
                                 const JacobiOptions& opt = {});

// Start-vanishing solution: the b-Jacobi field for tip starts, otherwise
// j(0) = 0, j'(0) = 1.
JacobiSolution vanishing_jacobi(const SurfaceModel& s, const GeodesicPath& path,
                                const JacobiOptions& opt = {});

// |j(d)| / d for the start-vanishing field.
double theta(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt = {});

// Theta along the path and along its reverse.
std::pair<double, double> theta_symmetric_check(const SurfaceModel& s, const GeodesicPath& path,
                                                const JacobiOptions& opt = {});

// Interior zeros of the start-vanishing field.
int morse_index(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt = {});
std::vector<double> conjugate_points(const SurfaceModel& s, const GeodesicPath& path,
                                     const JacobiOptions& opt = {});

// Normal second derivative of dist(z1, .) + dist(., z2) at the break point,
// where leg1 runs z1 -> w and leg2 runs w -> z2.
double broken_hessian(const SurfaceModel& s, const GeodesicPath& leg1, const GeodesicPath& leg2,
                      const JacobiOptions& opt = {});
int broken_hessian_index(const SurfaceModel& s, const GeodesicPath& leg1, const GeodesicPath& leg2,
                         const JacobiOptions& opt = {});

// |W_end - W_start| / |W_start| for the solutions with data (1,0) and (0,1).
double wronskian_drift(const SurfaceModel& s, const GeodesicPath& path, const JacobiOptions& opt = {});

struct SegmentInvariants {
  double length = 0.0;
  int morse_index = 0;
  double theta = 1.0;
  Endpoint start, end;
};

SegmentInvariants segment_invariants(const SurfaceModel& s, const GeodesicPath& path,
                                     const JacobiOptions& opt = {});

}  // namespace conetrace
