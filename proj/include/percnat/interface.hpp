#pragma once

#include "percnat/percolation.hpp"

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace percnat {

/// The interface as a walk on the hexagonal dual: edge i separates a white
/// site (left) from a black site (right). Dual vertex 0 is the exterior tail
/// triangle behind the first edge; dual vertex i+1 is the triangle ahead of
/// edge i.
struct DiscreteCurve {
  std::vector<DualEdge> edges;
  Point start{0, 0};
  Point end{0, 0};
  double eta = 1.0;

  std::size_t size() const { return edges.size(); }
  Polygon vertices() const;
  Point edge_midpoint(std::size_t i) const;
  DiscreteCurve reversed() const;
};

Point dual_vertex_ahead(const DualEdge& e, double eta);
Point dual_vertex_behind(const DualEdge& e, double eta);

/// Walks the interface for boundary condition `bc`, calling f(left, dir) with
/// grid indices for every crossed edge. Returning false from f stops the walk.
template <class F>
void walk_interface(const Coloring& c, const BoundaryCondition& bc, F&& f) {
  const LatticeDomain& d = c.domain();
  const auto& cycle = d.boundary_cycle();
  const std::size_t n = cycle.size();
  auto white = [&](std::int32_t idx) {
    switch (d.kind(idx)) {
      case CellKind::Inner: return c.interior_white(idx);
      case CellKind::Boundary: return boundary_white(d, static_cast<std::size_t>(d.cycle_position(idx)), bc);
      default: throw std::logic_error("interface walk left the domain");
    }
  };
  std::int32_t w = cycle[bc.black_from];
  int k = d.boundary_edge_dir(bc.black_from);
  const std::int32_t stop_w = cycle[(bc.black_to + 1) % n];
  const int stop_k = (d.boundary_edge_dir(bc.black_to) + 3) % 6;
  const std::size_t limit = 6 * d.cell_count();
  for (std::size_t step = 0; step < limit; ++step) {
    if (!f(w, k)) return;
    if (w == stop_w && k == stop_k) return;
    const std::int32_t x = w + d.offset((k + 1) % 6);
    if (white(x)) {
      w = x;
      k = (k + 5) % 6;
    } else {
      k = (k + 1) % 6;
    }
  }
  throw std::logic_error("interface walk did not terminate");
}

/// The interface from a_eta to b_eta; the coloring must carry the (a,b)
/// boundary condition.
DiscreteCurve trace_interface(const Coloring& coloring, char a_label, char b_label);
DiscreteCurve trace_interface(const Coloring& coloring, const BoundaryCondition& bc);
std::size_t interface_length(const Coloring& coloring, const BoundaryCondition& bc);

struct ParametrizedCurve {
  DiscreteCurve curve;
  double xi = 1.0;
  double total_time = 0.0;

  Point at(double t) const;
};

ParametrizedCurve natural_parametrization(const DiscreteCurve& curve, double xi);

void write_curve_csv(std::ostream& out, const DiscreteCurve& curve);
void write_curve_binary(std::ostream& out, const DiscreteCurve& curve);
DiscreteCurve read_curve_binary(std::istream& in);

}  // namespace percnat
