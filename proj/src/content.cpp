#include "percnat/content.hpp"

#include "percnat/error.hpp"
#include "percnat/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <bit>

namespace percnat {

Shape Shape::polyline(std::span<const Point> points) {
  Shape s;
  if (points.size() == 1) s.segments.emplace_back(points[0], points[0]);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) s.segments.emplace_back(points[i], points[i + 1]);
  return s;
}

Shape Shape::points(std::span<const Point> points) {
  Shape s;
  for (const Point& p : points) s.segments.emplace_back(p, p);
  return s;
}

Shape Shape::clipped(std::span<const Point> points, const Box& box) {
  Shape s;
  const Point lo = box.lo(), hi = box.hi();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    Point a = points[i], b = points[i + 1];
    if (clip_segment_to_rect(a, b, lo, hi)) s.segments.emplace_back(a, b);
  }
  return s;
}

double Shape::extent() const {
  Point lo = Point::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (const auto& [a, b] : segments) {
    lo = lo.cwiseMin(a).cwiseMin(b);
    hi = hi.cwiseMax(a).cwiseMax(b);
  }
  for (const Polygon& p : filled)
    for (const Point& q : p) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
  return empty() ? 0.0 : (hi - lo).norm();
}

namespace {

struct Interval {
  double lo, hi;
};

// Cross-section at abscissa x of the r-neighborhood of segment [a, b]; the
// neighborhood is convex, so the section is one interval.
bool capsule_section(const Point& a, const Point& b, double r, double x, Interval& out) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Point* p : {&a, &b}) {
    const double dx = x - p->x();
    if (std::abs(dx) <= r) {
      const double s = std::sqrt(r * r - dx * dx);
      lo = std::min(lo, p->y() - s);
      hi = std::max(hi, p->y() + s);
    }
  }
  const Point ab = b - a;
  const double len = ab.norm();
  if (len > 0) {
    const Point n = Point(-ab.y(), ab.x()) * (r / len);
    const Point q[4] = {a + n, b + n, b - n, a - n};
    for (int i = 0; i < 4; ++i) {
      const Point& p0 = q[i];
      const Point& p1 = q[(i + 1) % 4];
      if (p0.x() == p1.x()) {
        if (p0.x() == x) {
          lo = std::min({lo, p0.y(), p1.y()});
          hi = std::max({hi, p0.y(), p1.y()});
        }
        continue;
      }
      if ((x < p0.x() && x < p1.x()) || (x > p0.x() && x > p1.x())) continue;
      const double y = p0.y() + (x - p0.x()) * (p1.y() - p0.y()) / (p1.x() - p0.x());
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (!(lo <= hi)) return false;
  out = {lo, hi};
  return true;
}

// Interior cross-section of a simple polygon, half-open crossing rule.
void polygon_section(const Polygon& poly, double x, std::vector<Interval>& out) {
  thread_local std::vector<double> ys;
  ys.clear();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    if ((p.x() <= x) != (q.x() <= x)) ys.push_back(p.y() + (x - p.x()) * (q.y() - p.y()) / (q.x() - p.x()));
  }
  std::sort(ys.begin(), ys.end());
  for (std::size_t i = 0; i + 1 < ys.size(); i += 2) out.push_back({ys[i], ys[i + 1]});
}

}  // namespace

double neighborhood_area(const Shape& shape, double r) {
  if (shape.empty()) throw Error(ErrorKind::EmptyShape, "shape has no points");
  if (!(r > 0)) throw Error(ErrorKind::ConfigInvalid, "radius must be positive");
  struct Item {
    double xlo, xhi;
    Point a, b;
    const Polygon* poly;
  };
  std::vector<Item> items;
  for (const auto& [a, b] : shape.segments)
    items.push_back({std::min(a.x(), b.x()) - r, std::max(a.x(), b.x()) + r, a, b, nullptr});
  for (const Polygon& p : shape.filled) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Point& a = p[i];
      const Point& b = p[(i + 1) % p.size()];
      items.push_back({std::min(a.x(), b.x()) - r, std::max(a.x(), b.x()) + r, a, b, nullptr});
      xlo = std::min(xlo, a.x());
      xhi = std::max(xhi, a.x());
    }
    items.push_back({xlo, xhi, {}, {}, &p});
  }
  // Segment i continues into segment i+1 through a shared vertex. When that
  // vertex is within r of the column, both sections contain its disk's
  // section, so a chain of such segments contributes a single interval.
  std::vector<std::uint8_t> joined(items.size(), 0);
  for (std::size_t i = 0; i + 1 < items.size(); ++i)
    joined[i] = !items[i].poly && !items[i + 1].poly && items[i].b == items[i + 1].a;

  std::vector<std::size_t> by_lo(items.size()), by_hi(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) by_lo[i] = by_hi[i] = i;
  std::sort(by_lo.begin(), by_lo.end(), [&](std::size_t p, std::size_t q) { return items[p].xlo < items[q].xlo; });
  std::sort(by_hi.begin(), by_hi.end(), [&](std::size_t p, std::size_t q) { return items[p].xhi < items[q].xhi; });
  const double xmin = items[by_lo.front()].xlo, xmax = items[by_hi.back()].xhi;
  const double h = r / 16.0;
  const auto columns = static_cast<std::size_t>(std::ceil((xmax - xmin) / h));
  std::vector<std::uint64_t> active((items.size() + 63) / 64, 0);  // by item index
  std::vector<Interval> sec;
  std::size_t next_in = 0, next_out = 0;
  double area = 0;
  for (std::size_t c = 0; c < columns; ++c) {
    const double x = xmin + (static_cast<double>(c) + 0.5) * h;
    while (next_in < by_lo.size() && items[by_lo[next_in]].xlo <= x) {
      const std::size_t i = by_lo[next_in++];
      active[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    while (next_out < by_hi.size() && items[by_hi[next_out]].xhi < x) {
      const std::size_t i = by_hi[next_out++];
      active[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
    sec.clear();
    bool open = false;
    Interval run{0, 0};
    std::size_t prev = 0;
    for (std::size_t w = 0; w < active.size(); ++w) {
      for (std::uint64_t bits = active[w]; bits; bits &= bits - 1) {
        const std::size_t i = (w << 6) | static_cast<std::size_t>(std::countr_zero(bits));
        const Item& it = items[i];
        if (it.poly) {
          polygon_section(*it.poly, x, sec);
          continue;
        }
        Interval iv;
        if (!capsule_section(it.a, it.b, r, x, iv)) continue;
        if (open && prev + 1 == i && joined[prev] && std::abs(x - it.a.x()) <= r) {
          run.lo = std::min(run.lo, iv.lo);
          run.hi = std::max(run.hi, iv.hi);
        } else {
          if (open) sec.push_back(run);
          run = iv;
          open = true;
        }
        prev = i;
      }
    }
    if (open) sec.push_back(run);
    if (sec.empty()) continue;
    std::sort(sec.begin(), sec.end(), [](const Interval& p, const Interval& q) { return p.lo < q.lo; });
    double len = 0, lo = sec[0].lo, hi = sec[0].hi;
    for (std::size_t i = 1; i < sec.size(); ++i) {
      if (sec[i].lo > hi) {
        len += hi - lo;
        lo = sec[i].lo;
        hi = sec[i].hi;
      } else {
        hi = std::max(hi, sec[i].hi);
      }
    }
    len += hi - lo;
    area += len * h;
  }
  return area;
}

namespace {
double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}
}  // namespace

ContentProfile minkowski_estimate(const Shape& shape, double d, std::span<const double> r_grid, double window_lo,
                                  double window_hi) {
  if (shape.empty()) throw Error(ErrorKind::EmptyShape, "shape has no points");
  if (r_grid.empty()) throw Error(ErrorKind::ConfigInvalid, "empty radius grid");
  ContentProfile p;
  p.d = d;
  p.window_lo = window_lo;
  p.window_hi = window_hi;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    if (!(r > 0)) throw Error(ErrorKind::ConfigInvalid, "radii must be positive");
    if (i > 0 && !(r < r_grid[i - 1])) throw Error(ErrorKind::ConfigInvalid, "radius grid must decrease");
    const double area = neighborhood_area(shape, r);
    p.samples.push_back({r, area, std::pow(r, d - 2) * area});
  }
  std::vector<double> in;
  for (const auto& s : p.samples)
    if (s.r >= window_lo && s.r <= window_hi) in.push_back(s.m);
  if (in.empty())
    for (const auto& s : p.samples) in.push_back(s.m);
  p.plateau = median(std::move(in));
  return p;
}

std::vector<double> geometric_grid(double lo, double hi, double ratio) {
  if (!(lo > 0) || !(hi >= lo) || !(ratio > 1)) throw Error(ErrorKind::ConfigInvalid, "bad radius grid");
  std::vector<double> g;
  for (double r = lo; r <= hi * (1 + 1e-12); r *= ratio) g.push_back(r);
  std::reverse(g.begin(), g.end());
  return g;
}

namespace {

bool is_dyadic(double eps) {
  int e;
  return eps > 0 && std::frexp(eps, &e) == 0.5;
}

// Distance between two disjoint closed polylines: attained at a vertex of one
// of them.
double polyline_gap(std::span<const Point> a, std::span<const Point> b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : a) best = std::min(best, point_polyline_distance(p, b));
  for (const Point& p : b) best = std::min(best, point_polyline_distance(p, a));
  return best;
}

}  // namespace

BoxCountResult box_count(std::span<const Point> line, const Box& region, double eps, std::span<const Point> domain) {
  if (!is_dyadic(eps)) throw Error(ErrorKind::NotDyadic, "epsilon must be a power of two");
  const double per_side = region.radius / eps;
  if (per_side < 1 || per_side != std::round(per_side))
    throw Error(ErrorKind::NotDyadic, "region side must be a multiple of 2 epsilon");
  if (!domain.empty()) {
    Polygon rp = region.polygon();
    for (const Point& p : rp)
      if (!strictly_inside(domain, p)) throw Error(ErrorKind::EpsilonTooLarge, "region touches the domain boundary");
    rp.push_back(rp.front());
    Polygon closed(domain.begin(), domain.end());
    closed.push_back(domain.front());
    if (!(eps < polyline_gap(rp, closed)))
      throw Error(ErrorKind::EpsilonTooLarge, "epsilon must be below the region's distance to the boundary");
  }
  const auto n = static_cast<std::int64_t>(per_side);
  const Point lo = region.lo();
  BoxCountResult res;
  res.epsilon = eps;
  res.boxes = static_cast<std::size_t>(n * n);
  std::vector<std::uint8_t> hit(res.boxes, 0);
  auto tile_range = [&](double a, double b, double origin, std::int64_t& i0, std::int64_t& i1) {
    i0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor((a - origin - 3 * eps) / (2 * eps))));
    i1 = std::min<std::int64_t>(n - 1, static_cast<std::int64_t>(std::ceil((b - origin + eps) / (2 * eps))));
  };
  auto visit = [&](const Point& a, const Point& b) {
    std::int64_t i0, i1, j0, j1;
    tile_range(std::min(a.x(), b.x()), std::max(a.x(), b.x()), lo.x(), i0, i1);
    tile_range(std::min(a.y(), b.y()), std::max(a.y(), b.y()), lo.y(), j0, j1);
    for (std::int64_t j = j0; j <= j1; ++j)
      for (std::int64_t i = i0; i <= i1; ++i) {
        const std::size_t t = static_cast<std::size_t>(j * n + i);
        if (hit[t]) continue;
        const Point c = lo + Point((2 * i + 1) * eps, (2 * j + 1) * eps);
        if (segment_meets_rect(a, b, c.array() - 2 * eps, c.array() + 2 * eps)) hit[t] = 1;
      }
  };
  if (line.size() == 1) visit(line[0], line[0]);
  for (std::size_t i = 0; i + 1 < line.size(); ++i) visit(line[i], line[i + 1]);
  for (std::size_t t = 0; t < hit.size(); ++t)
    if (hit[t]) res.boxes_hit.push_back(t);
  res.count = res.boxes_hit.size();
  return res;
}

BoxCountResult box_count(const DiscreteCurve& curve, const Box& region, double eps, std::span<const Point> domain) {
  const Polygon v = curve.vertices();
  return box_count(v, region, eps, domain);
}

std::pair<double, double> beta_window(double epsilon, double eta) { return {4 * eta, epsilon / 4}; }

BetaEstimate beta_estimate(double epsilon, double eta, std::size_t trials, std::uint64_t master_seed, int threads,
                           Point center) {
  if (trials < 1) throw Error(ErrorKind::ConfigInvalid, "trials must be at least 1");
  if (!(eta > 0) || !(epsilon > eta)) throw Error(ErrorKind::ConfigInvalid, "need 0 < eta < epsilon");
  const auto domain = std::make_shared<const LatticeDomain>(build_domain_approx(box_domain(Box{Point(0, 0), 1.0}), eta));
  const Box q0{center, epsilon}, q2{center, 2 * epsilon};
  const auto [wlo, whi] = beta_window(epsilon, eta);
  const std::vector<double> grid = geometric_grid(wlo / 2, 2 * whi);
  std::vector<double> value(trials, 0.0);
  std::vector<std::uint8_t> hit(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const Coloring c = apply_boundary_condition(sample_coloring(domain, RngStream{master_seed, t}), 'a', 'c');
    const Polygon v = trace_interface(c, 'a', 'c').vertices();
    bool meets = false;
    for (std::size_t i = 0; i + 1 < v.size() && !meets; ++i) meets = segment_meets_rect(v[i], v[i + 1], q2.lo(), q2.hi());
    if (!meets) return;
    hit[t] = 1;
    const Shape piece = Shape::clipped(v, q0);
    if (!piece.empty()) value[t] = minkowski_estimate(piece, 1.75, grid, wlo, whi).plateau;
  });
  BetaEstimate b;
  b.epsilon = epsilon;
  b.eta = eta;
  b.trials = trials;
  for (std::size_t t = 0; t < trials; ++t)
    if (hit[t]) b.values.push_back(value[t]);
  b.hits = b.values.size();
  if (b.hits == 0) throw Error(ErrorKind::NoHits, "no trial met the conditioning box");
  const double n = static_cast<double>(b.hits);
  b.mean = pairwise_sum(b.values) / n;
  std::vector<double> sq(b.values.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = (b.values[i] - b.mean) * (b.values[i] - b.mean);
  b.stderr_ = b.hits > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1) / n) : 0.0;
  return b;
}

double AtomicMeasure::total_mass() const {
  std::vector<double> m;
  m.reserve(atoms.size());
  for (const Atom& a : atoms) m.push_back(a.mass);
  return pairwise_sum(m);
}

namespace {
bool in_half_open(const Box& b, const Point& p) {
  const Point lo = b.lo(), hi = b.hi();
  return p.x() >= lo.x() && p.x() < hi.x() && p.y() >= lo.y() && p.y() < hi.y();
}
}  // namespace

AtomicMeasure AtomicMeasure::restricted(const Box& box) const {
  AtomicMeasure out;
  out.constant = constant;
  out.alpha = alpha;
  for (const Atom& a : atoms)
    if (in_half_open(box, a.location)) out.atoms.push_back(a);
  return out;
}

double AtomicMeasure::mass_in(const Box& box) const { return restricted(box).total_mass(); }

AtomicMeasure interface_measure(const DiscreteCurve& curve, double alpha2_hat, double c_l) {
  if (!(alpha2_hat > 0 && alpha2_hat <= 1)) throw Error(ErrorKind::ConfigInvalid, "alpha2 must lie in (0, 1]");
  AtomicMeasure m;
  m.constant = c_l;
  m.alpha = alpha2_hat;
  const double mass = c_l * curve.eta * curve.eta / alpha2_hat;
  for (std::size_t i = 0; i < curve.size(); ++i) m.atoms.push_back({curve.edge_midpoint(i), mass});
  return m;
}

AtomicMeasure pivotal_measure(const PivotalSet& pivots, double eta, double alpha4_hat, double c_p) {
  if (!(alpha4_hat > 0 && alpha4_hat <= 1)) throw Error(ErrorKind::ConfigInvalid, "alpha4 must lie in (0, 1]");
  AtomicMeasure m;
  m.constant = c_p;
  m.alpha = alpha4_hat;
  const double mass = c_p * eta * eta / alpha4_hat;
  for (const SiteCoord& s : pivots) m.atoms.push_back({site_position(s, eta), mass});
  return m;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

}  // namespace percnat
