#include "percnat/faces.hpp"

#include "percnat/error.hpp"
#include "percnat/union_find.hpp"

#include <algorithm>

namespace percnat {

InducedFace induced_face(const LatticeDomain& d, const DiscreteCurve& curve, const Box& box) {
  const Polygon poly = box.polygon();
  for (const Point& p : poly)
    if (!inside_closed(d.spec().vertices, p))
      throw Error(ErrorKind::BoxOutsideDomain, "box leaves the domain polygon");
  const double eta = d.eta();
  auto in_box = [&](SiteCoord s) { return box.contains(site_position(s, eta)); };
  InducedFace f;
  bool seen = false;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const DualEdge& e = curve.edges[i];
    if (!in_box(e.left) || !in_box(e.right())) continue;
    if (!seen) f.first_time = i;
    f.last_time = i;
    seen = true;
  }
  if (!seen) return f;
  f.occurred = true;
  f.x1 = dual_vertex_behind(curve.edges[f.first_time], eta);
  f.x2 = dual_vertex_ahead(curve.edges[f.last_time], eta);

  MarkBuffer blocked;
  blocked.begin(d.cell_count());
  auto block = [&](const DualEdge& e) {
    for (SiteCoord s : {e.left, e.right()})
      if (d.in_grid(s)) blocked.set(d.index(s));
  };
  for (std::size_t i = 0; i <= f.first_time; ++i) block(curve.edges[i]);
  for (std::size_t i = f.last_time; i < curve.size(); ++i) block(curve.edges[i]);

  std::vector<std::int32_t>& out = f.region_sites;
  for (std::int32_t idx : d.inner_sites())
    if (!blocked.test(idx) && box.contains(d.position(idx))) {
      blocked.set(idx);
      out.push_back(idx);
    }
  for (std::size_t head = 0; head < out.size(); ++head)
    for (int k = 0; k < 6; ++k) {
      const std::int32_t y = out[head] + d.offset(k);
      if (d.kind(y) == CellKind::Inner && !blocked.test_and_set(y)) out.push_back(y);
    }
  std::sort(out.begin(), out.end());
  return f;
}

bool event_G(const LatticeDomain& d, const InducedFace& face, const Polygon& u) {
  if (!face.occurred) return false;
  return std::all_of(face.region_sites.begin(), face.region_sites.end(),
                     [&](std::int32_t idx) { return inside_closed(u, d.position(idx)); });
}

}  // namespace percnat
