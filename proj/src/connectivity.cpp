#include "percnat/connectivity.hpp"

#include "percnat/error.hpp"
#include "percnat/interface.hpp"
#include "percnat/union_find.hpp"

#include <algorithm>
#include <limits>

namespace percnat {

Polygon QuadSpec::side(int i) const {
  return boundary_arc(boundary, marks[(i - 1) % 4], marks[i % 4]);
}

PreparedQuad prepare_quad(const LatticeDomain& domain, const QuadSpec& quad) {
  for (const Point& p : quad.boundary)
    if (!inside_closed(domain.spec().vertices, p))
      throw Error(ErrorKind::QuadOutsideDomain, "quad leaves the domain polygon");
  const Polygon s1 = quad.side(1), s3 = quad.side(3);
  PreparedQuad pq;
  const double eta = domain.eta();
  for (std::int32_t idx : domain.inner_sites()) {
    const Point p = domain.position(idx);
    if (!strictly_inside(quad.boundary, p)) continue;
    pq.sites.push_back(idx);
    pq.touches1.push_back(point_polyline_distance(p, s1) <= eta);
    pq.touches3.push_back(point_polyline_distance(p, s3) <= eta);
  }
  return pq;
}

bool quad_crossing(const Coloring& coloring, const PreparedQuad& q) {
  const LatticeDomain& d = coloring.domain();
  thread_local std::vector<std::int32_t> local;
  local.assign(d.cell_count(), -1);
  for (std::size_t i = 0; i < q.sites.size(); ++i)
    if (coloring.interior_white(q.sites[i])) local[q.sites[i]] = static_cast<std::int32_t>(i);
  UnionFind uf(q.sites.size());
  for (std::size_t i = 0; i < q.sites.size(); ++i) {
    if (local[q.sites[i]] < 0) continue;
    for (int k = 0; k < 3; ++k) {
      const std::int32_t j = local[q.sites[i] + d.offset(k)];
      if (j >= 0) uf.unite(static_cast<std::int32_t>(i), j);
    }
  }
  std::vector<std::int32_t> roots;
  for (std::size_t i = 0; i < q.sites.size(); ++i)
    if (local[q.sites[i]] >= 0 && q.touches1[i]) roots.push_back(uf.find(static_cast<std::int32_t>(i)));
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 0; i < q.sites.size(); ++i)
    if (local[q.sites[i]] >= 0 && q.touches3[i] &&
        std::binary_search(roots.begin(), roots.end(), uf.find(static_cast<std::int32_t>(i))))
      return true;
  return false;
}

bool quad_crossing(const Coloring& coloring, const QuadSpec& quad) {
  return quad_crossing(coloring, prepare_quad(coloring.domain(), quad));
}

MarkedQuad resolve_marked(const LatticeDomain& domain, char a, char b, char c, char d) {
  MarkedQuad m{domain.marked_edge(a), domain.marked_edge(b), domain.marked_edge(c), domain.marked_edge(d)};
  const std::size_t e[4] = {m.a, m.b, m.c, m.d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (e[i] == e[j]) throw Error(ErrorKind::MarkedEdgeCollision, "two marked points share a boundary edge");
  return m;
}

namespace {

// White inner path between arcs b..c and d..a, allowing a direct chord.
bool event_def1(const Coloring& col, const MarkedQuad& m) {
  const LatticeDomain& d = col.domain();
  const auto& cycle = d.boundary_cycle();
  const std::size_t n = cycle.size();
  thread_local MarkBuffer seen;
  seen.begin(d.cell_count());
  std::vector<std::int32_t> stack;
  auto in_target = [&](std::int32_t y) {
    return d.kind(y) == CellKind::Boundary && d.in_arc(d.cycle_position(y), m.d, m.a);
  };
  for (std::size_t p = (m.b + 1) % n;; p = (p + 1) % n) {
    const std::int32_t s = cycle[p];
    for (int k = 0; k < 6; ++k) {
      const std::int32_t y = s + d.offset(k);
      if (d.kind(y) == CellKind::Inner) {
        if (col.interior_white(y) && !seen.test_and_set(y)) stack.push_back(y);
      } else if (in_target(y) && d.is_interior_chord(s, k)) {
        return true;
      }
    }
    if (p == m.c) break;
  }
  while (!stack.empty()) {
    const std::int32_t x = stack.back();
    stack.pop_back();
    for (int k = 0; k < 6; ++k) {
      const std::int32_t y = x + d.offset(k);
      const CellKind kind = d.kind(y);
      if (kind == CellKind::Inner) {
        if (col.interior_white(y) && !seen.test_and_set(y)) stack.push_back(y);
      } else if (kind == CellKind::Boundary && in_target(y)) {
        return true;
      }
    }
  }
  return false;
}

// First edge of the (from,to) interface with an endpoint on arc
// (hit_from, hit_to); reports whether it has an endpoint on arc (ok_from, ok_to).
bool first_touch(const Coloring& col, std::size_t from, std::size_t to, std::size_t hit_from,
                 std::size_t hit_to, std::size_t ok_from, std::size_t ok_to) {
  const LatticeDomain& d = col.domain();
  bool result = false;
  auto on_arc = [&](std::int32_t s, std::size_t f, std::size_t t) {
    return d.kind(s) == CellKind::Boundary && d.in_arc(d.cycle_position(s), f, t);
  };
  walk_interface(col, BoundaryCondition{from, to}, [&](std::int32_t w, int k) {
    const std::int32_t b = w + d.offset(k);
    if (!on_arc(w, hit_from, hit_to) && !on_arc(b, hit_from, hit_to)) return true;
    result = on_arc(w, ok_from, ok_to) || on_arc(b, ok_from, ok_to);
    return false;
  });
  return result;
}

}  // namespace

bool four_point_event(const Coloring& coloring, const MarkedQuad& m, int definition) {
  switch (definition) {
    case 1: return event_def1(coloring, m);
    case 2: return first_touch(coloring, m.a, m.c, m.b, m.d, m.b, m.c);
    case 3: return first_touch(coloring, m.c, m.a, m.d, m.b, m.d, m.a);
    default: throw Error(ErrorKind::ConfigInvalid, "definition must be 1, 2 or 3");
  }
}

bool four_point_event(const Coloring& coloring, char a, char b, char c, char d, int definition) {
  return four_point_event(coloring, resolve_marked(coloring.domain(), a, b, c, d), definition);
}

PivotalSet pivotal_sites(const Coloring& coloring, const MarkedQuad& m, int e_definition, bool swap_roles) {
  const LatticeDomain& d = coloring.domain();
  const bool e = four_point_event(coloring, m, e_definition);
  BoundaryCondition g1 = e ? BoundaryCondition{m.a, m.b} : BoundaryCondition{m.a, m.d};
  BoundaryCondition g2 = e ? BoundaryCondition{m.c, m.d} : BoundaryCondition{m.c, m.b};
  if (swap_roles) std::swap(g1, g2);
  thread_local MarkBuffer first, found;
  first.begin(d.cell_count());
  found.begin(d.cell_count());
  walk_interface(coloring, g1, [&](std::int32_t w, int k) {
    first.set(w);
    first.set(w + d.offset(k));
    return true;
  });
  PivotalSet out;
  walk_interface(coloring, g2, [&](std::int32_t w, int k) {
    for (std::int32_t s : {w, w + d.offset(k)})
      if (d.kind(s) == CellKind::Inner && first.test(s) && !found.test_and_set(s)) out.push_back(d.coord(s));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

PivotalSet pivotal_sites(const Coloring& coloring, char a, char b, char c, char d) {
  return pivotal_sites(coloring, resolve_marked(coloring.domain(), a, b, c, d));
}

PivotalSet pivotal_sites_by_flipping(const Coloring& coloring, const MarkedQuad& m) {
  const bool base = four_point_event(coloring, m, 1);
  Coloring work = coloring;
  PivotalSet out;
  for (std::int32_t idx : coloring.domain().inner_sites()) {
    const bool was = work.interior_white(idx);
    work.set_interior(idx, !was);
    if (four_point_event(work, m, 1) != base) out.push_back(coloring.domain().coord(idx));
    work.set_interior(idx, was);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace percnat
