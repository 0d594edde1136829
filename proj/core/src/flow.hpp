#pragma once

#include <array>
#include <functional>
#include <vector>

#include "conetrace/geometry.hpp"

namespace conetrace::detail {

// (u0, u1, v0, v1, j, j')
using State6 = std::array<double, 6>;

struct FlowEvent {
  // Stops where value goes from > 0 to <= 0, once t >= active_after.
  std::function<double(const State6&)> value;
  double active_after = 0.0;
};

struct FlowRun {
  enum class Stop { Length, Tip, Event };
  std::vector<double> t;
  std::vector<State6> x;
  Stop stop = Stop::Length;
  int tip_id = -1;
};

// Integrates the geodesic equation (and the scalar Jacobi equation when
// `jacobi` is set) from (t0, x0) up to t_max, with tip-hit, chart-exit and
// optional custom events located by bisection on the dense output.
FlowRun run_flow(const SurfaceModel& s, const State6& x0, double t0, double t_max, bool jacobi,
                 const GeometryOptions& opt, const FlowEvent* event = nullptr);

State6 to_state6(const GeodesicState& g, double j = 0.0, double jp = 0.0);
GeodesicState to_geodesic(const State6& x);

}  // namespace conetrace::detail
