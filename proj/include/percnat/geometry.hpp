#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

namespace percnat {

using Point = Eigen::Vector2d;
using Polygon = std::vector<Point>;

/// Axis-aligned square z + [-R, R]^2.
struct Box {
  Point center{0.0, 0.0};
  double radius = 1.0;

  Point lo() const { return center.array() - radius; }
  Point hi() const { return center.array() + radius; }
  bool contains(const Point& p) const {  // closed
    return (p - center).cwiseAbs().maxCoeff() <= radius;
  }
  bool contains_strict(const Point& p) const {
    return (p - center).cwiseAbs().maxCoeff() < radius;
  }
  Polygon polygon() const;
};

double signed_area(std::span<const Point> poly);
double cross(const Point& a, const Point& b);

/// True iff p lies on the closed segment [a, b].
bool on_segment(const Point& p, const Point& a, const Point& b);
bool on_boundary(std::span<const Point> poly, const Point& p);

/// Crossing-number test with the half-open edge rule; points on the boundary
/// are reported as outside.
bool strictly_inside(std::span<const Point> poly, const Point& p);
bool inside_closed(std::span<const Point> poly, const Point& p);

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d);
bool is_simple(std::span<const Point> poly);

double point_segment_distance(const Point& p, const Point& a, const Point& b);
double point_polyline_distance(const Point& p, std::span<const Point> line);

/// Closed segment vs closed axis-aligned rectangle [lo, hi] (Liang-Barsky).
bool segment_meets_rect(const Point& a, const Point& b, const Point& lo, const Point& hi);

/// Clips [a, b] to the rectangle; returns false if nothing remains.
bool clip_segment_to_rect(Point& a, Point& b, const Point& lo, const Point& hi);

/// The closed boundary arc of `poly` running counterclockwise from point `from`
/// to point `to`, both of which must lie on the boundary.
std::vector<Point> boundary_arc(std::span<const Point> poly, const Point& from, const Point& to);

}  // namespace percnat
