#include "percnat/interface.hpp"

#include "percnat/error.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

namespace percnat {

namespace {
Point centroid(SiteCoord a, SiteCoord b, SiteCoord c, double eta) {
  return (site_position(a, eta) + site_position(b, eta) + site_position(c, eta)) / 3.0;
}
}  // namespace

Point dual_vertex_ahead(const DualEdge& e, double eta) {
  return centroid(e.left, e.right(), e.left + kDirs[(e.dir + 1) % 6], eta);
}

Point dual_vertex_behind(const DualEdge& e, double eta) {
  return centroid(e.left, e.right(), e.left + kDirs[(e.dir + 5) % 6], eta);
}

Polygon DiscreteCurve::vertices() const {
  Polygon out;
  out.reserve(edges.size() + 1);
  out.push_back(start);
  for (const DualEdge& e : edges) out.push_back(dual_vertex_ahead(e, eta));
  return out;
}

Point DiscreteCurve::edge_midpoint(std::size_t i) const {
  return 0.5 * (site_position(edges[i].left, eta) + site_position(edges[i].right(), eta));
}

DiscreteCurve DiscreteCurve::reversed() const {
  DiscreteCurve r;
  r.eta = eta;
  r.start = end;
  r.end = start;
  r.edges.reserve(edges.size());
  for (auto it = edges.rbegin(); it != edges.rend(); ++it)
    r.edges.push_back(DualEdge{it->right(), static_cast<std::uint8_t>((it->dir + 3) % 6)});
  return r;
}

DiscreteCurve trace_interface(const Coloring& coloring, const BoundaryCondition& bc) {
  const LatticeDomain& d = coloring.domain();
  DiscreteCurve curve;
  curve.eta = d.eta();
  walk_interface(coloring, bc, [&](std::int32_t w, int k) {
    curve.edges.push_back(DualEdge{d.coord(w), static_cast<std::uint8_t>(k)});
    return true;
  });
  curve.start = dual_vertex_behind(curve.edges.front(), curve.eta);
  curve.end = dual_vertex_ahead(curve.edges.back(), curve.eta);
  return curve;
}

DiscreteCurve trace_interface(const Coloring& coloring, char a_label, char b_label) {
  const auto& bc = coloring.boundary_condition();
  if (!bc) throw Error(ErrorKind::NoBoundaryCondition, "apply a boundary condition before tracing");
  const std::size_t a = coloring.domain().marked_edge(a_label);
  const std::size_t b = coloring.domain().marked_edge(b_label);
  if (bc->black_from != a || bc->black_to != b)
    throw Error(ErrorKind::NoBoundaryCondition, "boundary condition does not match the requested endpoints");
  return trace_interface(coloring, *bc);
}

std::size_t interface_length(const Coloring& coloring, const BoundaryCondition& bc) {
  std::size_t n = 0;
  walk_interface(coloring, bc, [&](std::int32_t, int) {
    ++n;
    return true;
  });
  return n;
}

ParametrizedCurve natural_parametrization(const DiscreteCurve& curve, double xi) {
  if (!(xi > 0)) throw Error(ErrorKind::NonPositiveXi, "xi must be positive");
  return ParametrizedCurve{curve, xi, xi * static_cast<double>(curve.size())};
}

Point ParametrizedCurve::at(double t) const {
  const std::size_t n = curve.size();
  if (t <= 0 || n == 0) return curve.start;
  if (t >= total_time) return curve.end;
  const double s = t / xi;
  const auto k = std::min(static_cast<std::size_t>(std::floor(s)), n - 1);
  const Point from = k == 0 ? curve.start : dual_vertex_ahead(curve.edges[k - 1], curve.eta);
  const Point to = dual_vertex_ahead(curve.edges[k], curve.eta);
  const double f = s - static_cast<double>(k);
  return from + f * (to - from);
}

void write_curve_csv(std::ostream& out, const DiscreteCurve& curve) {
  out << "step,dual_x,dual_y\n";
  const Polygon v = curve.vertices();
  char buf[96];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, v[i].x(), v[i].y());
    out << buf;
  }
}

namespace {
template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw Error(ErrorKind::FormatError, "truncated curve");
  return v;
}
}  // namespace

// Little-endian layout: "PNCV", u32 version, f64 eta, u64 count, then
// (i32 u, i32 v, u8 dir) per edge.
void write_curve_binary(std::ostream& out, const DiscreteCurve& curve) {
  out.write("PNCV", 4);
  put<std::uint32_t>(out, 1);
  put<double>(out, curve.eta);
  put<std::uint64_t>(out, curve.size());
  for (const DualEdge& e : curve.edges) {
    put<std::int32_t>(out, e.left.u);
    put<std::int32_t>(out, e.left.v);
    put<std::uint8_t>(out, e.dir);
  }
}

DiscreteCurve read_curve_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PNCV", 4) != 0)
    throw Error(ErrorKind::FormatError, "not a curve file");
  if (get<std::uint32_t>(in) != 1) throw Error(ErrorKind::FormatError, "unsupported curve version");
  DiscreteCurve c;
  c.eta = get<double>(in);
  const auto n = get<std::uint64_t>(in);
  if (n == 0) throw Error(ErrorKind::FormatError, "empty curve");
  for (std::uint64_t i = 0; i < n; ++i) {
    DualEdge e;
    e.left.u = get<std::int32_t>(in);
    e.left.v = get<std::int32_t>(in);
    e.dir = get<std::uint8_t>(in);
    if (e.dir > 5) throw Error(ErrorKind::FormatError, "bad direction");
    c.edges.push_back(e);
  }
  c.start = dual_vertex_behind(c.edges.front(), c.eta);
  c.end = dual_vertex_ahead(c.edges.back(), c.eta);
  return c;
}

}  // namespace percnat
