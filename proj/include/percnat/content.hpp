#pragma once

#include "percnat/connectivity.hpp"
#include "percnat/interface.hpp"

#include <span>
#include <vector>

namespace percnat {

/// A planar set for content estimation: closed segments (a point is a
/// zero-length segment) plus filled simple polygons.
struct Shape {
  std::vector<std::pair<Point, Point>> segments;
  std::vector<Polygon> filled;

  static Shape polyline(std::span<const Point> points);
  static Shape points(std::span<const Point> points);
  static Shape curve(const DiscreteCurve& curve) { return polyline(curve.vertices()); }
  /// The polyline through `points` clipped to a closed box.
  static Shape clipped(std::span<const Point> points, const Box& box);

  bool empty() const { return segments.empty() && filled.empty(); }
  double extent() const;  // bounding-box diagonal
};

struct ContentSample {
  double r = 0;
  double area = 0;
  double m = 0;  // r^(d-2) * area
};

struct ContentProfile {
  double d = 0;
  std::vector<ContentSample> samples;  // in r_grid order
  double plateau = 0;                  // median of m over the window
  double window_lo = 0, window_hi = 0;
};

/// Area of {z : dist(z, shape) <= r}: columns of width r/16, each column's
/// cross-section measured exactly at its midline.
double neighborhood_area(const Shape& shape, double r);

/// Profile over `r_grid` (positive, decreasing). The plateau is the median of
/// m_r over r in [window_lo, window_hi]; with an empty window it is taken over
/// the whole grid.
ContentProfile minkowski_estimate(const Shape& shape, double d, std::span<const double> r_grid,
                                  double window_lo = 0, double window_hi = 1e300);

/// Geometric r grid lo, lo*ratio, ... up to hi, returned in decreasing order.
std::vector<double> geometric_grid(double lo, double hi, double ratio = 2.0);

struct BoxCountResult {
  double epsilon = 0;
  std::size_t count = 0;
  std::size_t boxes = 0;  // tiles in the region
  std::vector<std::size_t> boxes_hit;  // row-major tile indices, sorted
};

/// Tiles `region` by boxes of radius epsilon starting at its lower-left
/// corner and counts the tiles whose concentric doubled box meets the
/// polyline. When `domain` is given, epsilon must stay below the distance
/// from the region to the domain boundary.
BoxCountResult box_count(std::span<const Point> polyline, const Box& region, double epsilon,
                         std::span<const Point> domain = {});
BoxCountResult box_count(const DiscreteCurve& curve, const Box& region, double epsilon,
                         std::span<const Point> domain = {});

struct BetaEstimate {
  double epsilon = 0, eta = 0;
  double mean = 0, stderr_ = 0;
  std::size_t trials = 0, hits = 0;
  std::vector<double> values;  // x_0 per conditioned trial, in trial order
};

/// Conditional 7/4-content of the bottom-to-top interface of the unit-radius
/// square inside the box of radius epsilon at the origin, given that the
/// interface meets the box of radius 2 epsilon.
BetaEstimate beta_estimate(double epsilon, double eta, std::size_t trials, std::uint64_t master_seed,
                           int threads = 1, Point center = Point(0, 0));

/// The content window used for x_0 at scale epsilon and mesh eta.
std::pair<double, double> beta_window(double epsilon, double eta);

struct Atom {
  Point location;
  double mass;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;
  double constant = 1.0;  // c_l or c_p
  double alpha = 1.0;     // the arm-probability normalizer used

  double total_mass() const;
  /// Mass of atoms in the half-open box [lo, hi).
  double mass_in(const Box& box) const;
  AtomicMeasure restricted(const Box& box) const;
};

AtomicMeasure interface_measure(const DiscreteCurve& curve, double alpha2_hat, double c_l = 1.0);
AtomicMeasure pivotal_measure(const PivotalSet& pivots, double eta, double alpha4_hat, double c_p = 1.0);

/// Fixed-order pairwise sum, so aggregates do not depend on how trials were
/// scheduled.
double pairwise_sum(std::span<const double> v);

}  // namespace percnat
