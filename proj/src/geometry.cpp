#include "percnat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace percnat {

Polygon Box::polygon() const {
  const Point l = lo(), h = hi();
  return {Point(l.x(), l.y()), Point(h.x(), l.y()), Point(h.x(), h.y()), Point(l.x(), h.y())};
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(std::span<const Point> poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) s += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * s;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
  if (cross(b - a, p - a) != 0.0) return false;
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool on_boundary(std::span<const Point> poly, const Point& p) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, poly[i], poly[(i + 1) % n])) return true;
  return false;
}

bool strictly_inside(std::span<const Point> poly, const Point& p) {
  const std::size_t n = poly.size();
  bool in = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if (on_segment(p, a, b)) return false;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) in = !in;
    }
  }
  return in;
}

bool inside_closed(std::span<const Point> poly, const Point& p) {
  return on_boundary(poly, p) || strictly_inside(poly, p);
}

namespace {
int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}
}  // namespace

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orientation(a, b, c), o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a), o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

bool is_simple(std::span<const Point> poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (poly[i] == poly[(i + 1) % n]) return false;
  // Sweep over edges sorted by min-x to keep large polygons tractable.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto xmin = [&](std::size_t i) { return std::min(poly[i].x(), poly[(i + 1) % n].x()); };
  auto xmax = [&](std::size_t i) { return std::max(poly[i].x(), poly[(i + 1) % n].x()); };
  std::sort(order.begin(), order.end(), [&](auto l, auto r) { return xmin(l) < xmin(r); });
  for (std::size_t oi = 0; oi < n; ++oi) {
    const std::size_t i = order[oi];
    for (std::size_t oj = oi + 1; oj < n && xmin(order[oj]) <= xmax(i); ++oj) {
      const std::size_t j = order[oj];
      const bool adjacent = (j == (i + 1) % n) || (i == (j + 1) % n);
      const Point &a = poly[i], &b = poly[(i + 1) % n], &c = poly[j], &d = poly[(j + 1) % n];
      if (adjacent) {
        // Adjacent edges may only share their common vertex.
        const Point& shared = (j == (i + 1) % n) ? b : a;
        const Point& far_i = (j == (i + 1) % n) ? a : b;
        const Point& far_j = (j == (i + 1) % n) ? d : c;
        if (n == 3) continue;
        if (orientation(far_i, shared, far_j) == 0 &&
            (far_j - shared).dot(far_i - shared) > 0)
          return false;
        continue;
      }
      if (segments_intersect(a, b, c, d)) return false;
    }
  }
  return true;
}

double point_segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

double point_polyline_distance(const Point& p, std::span<const Point> line) {
  if (line.size() == 1) return (p - line[0]).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.size(); ++i)
    best = std::min(best, point_segment_distance(p, line[i], line[i + 1]));
  return best;
}

bool clip_segment_to_rect(Point& a, Point& b, const Point& lo, const Point& hi) {
  double t0 = 0.0, t1 = 1.0;
  const Point d = b - a;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() - lo.x(), hi.x() - a.x(), a.y() - lo.y(), hi.y() - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  const Point a0 = a;
  a = a0 + t0 * d;
  b = a0 + t1 * d;
  return true;
}

bool segment_meets_rect(const Point& a, const Point& b, const Point& lo, const Point& hi) {
  Point x = a, y = b;
  return clip_segment_to_rect(x, y, lo, hi);
}

std::vector<Point> boundary_arc(std::span<const Point> poly, const Point& from, const Point& to) {
  const std::size_t n = poly.size();
  auto locate = [&](const Point& p) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = point_segment_distance(p, poly[i], poly[(i + 1) % n]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    return best;
  };
  const std::size_t ef = locate(from), et = locate(to);
  std::vector<Point> arc{from};
  if (ef == et) {
    // Same edge: direct if `to` is ahead of `from` along the edge.
    const Point dir = poly[(ef + 1) % n] - poly[ef];
    if ((to - from).dot(dir) >= 0) {
      arc.push_back(to);
      return arc;
    }
  }
  std::size_t e = ef;
  do {
    e = (e + 1) % n;
    arc.push_back(poly[e]);
  } while (e != et);
  arc.push_back(to);
  return arc;
}

}  // namespace percnat
