#pragma once

#include "percnat/percolation.hpp"

#include <array>
#include <vector>

namespace percnat {

/// A marked topological rectangle: sides run counterclockwise from marks[i]
/// to marks[i+1]; side 1 starts at marks[0].
struct QuadSpec {
  Polygon boundary;
  std::array<Point, 4> marks;

  Polygon side(int i) const;  // i in 1..4
};

/// Site membership and side contact for one quad on one domain. A site
/// belongs to the quad if its position is strictly inside; it touches a side
/// if it lies within eta of it.
struct PreparedQuad {
  std::vector<std::int32_t> sites;
  std::vector<std::uint8_t> touches1;
  std::vector<std::uint8_t> touches3;
};

PreparedQuad prepare_quad(const LatticeDomain& domain, const QuadSpec& quad);
bool quad_crossing(const Coloring& coloring, const PreparedQuad& quad);
bool quad_crossing(const Coloring& coloring, const QuadSpec& quad);

struct MarkedQuad {
  std::size_t a, b, c, d;  // boundary edge indices
};

MarkedQuad resolve_marked(const LatticeDomain& domain, char a = 'a', char b = 'b', char c = 'c', char d = 'd');

/// The four-point event in one of its three formulations (1, 2 or 3).
bool four_point_event(const Coloring& coloring, const MarkedQuad& m, int definition);
bool four_point_event(const Coloring& coloring, char a, char b, char c, char d, int definition);

using PivotalSet = std::vector<SiteCoord>;  // sorted

/// Inner sites touched by both interfaces of the pair selected by E.
/// `swap_roles` exchanges which interface is traced first.
PivotalSet pivotal_sites(const Coloring& coloring, const MarkedQuad& m, int e_definition = 1,
                         bool swap_roles = false);
PivotalSet pivotal_sites(const Coloring& coloring, char a, char b, char c, char d);

/// Inner sites whose single flip changes the four-point event (definition 1).
PivotalSet pivotal_sites_by_flipping(const Coloring& coloring, const MarkedQuad& m);

}  // namespace percnat
