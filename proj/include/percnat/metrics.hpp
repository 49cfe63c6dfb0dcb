#pragma once

#include "percnat/geometry.hpp"
#include "percnat/interface.hpp"

#include <optional>
#include <vector>

namespace percnat {

/// A polyline with optional strictly increasing times starting at 0.
struct Polyline {
  std::vector<Point> points;
  std::optional<std::vector<double>> times;

  static Polyline from(const ParametrizedCurve& c);
  double duration() const;
  Point at(double t) const;  // requires times
};

/// Whether the Frechet distance of two polylines is at most eps (free-space
/// reachability).
bool frechet_at_most(const Polyline& p, const Polyline& q, double eps);

/// Continuous Frechet distance, the infimum over increasing
/// reparametrizations of the sup distance; binary search to 1e-9 times the
/// joint diameter.
double du_distance(const Polyline& p, const Polyline& q);

/// Discrete Frechet distance over vertex couplings; an upper bound on
/// du_distance, offered as a fast diagnostic.
double discrete_frechet(const Polyline& p, const Polyline& q);

/// |T2 - T1| + sup over s in [0,1] of |p(s T1) - q(s T2)|. Both curves are
/// linear between merged breakpoints, so the sup is attained at one of them.
double rho_distance(const Polyline& p, const Polyline& q);

}  // namespace percnat
