#pragma once

#include "percnat/interface.hpp"

#include <vector>

namespace percnat {

/// The face at a box induced by an interface. An edge qualifies when both of
/// its sites lie in the closed box; first_time and last_time index the first
/// and last qualifying edges. The region holds the inner sites reachable from
/// the box without touching an endpoint of an edge in [0, first_time] or
/// [last_time, end].
struct InducedFace {
  bool occurred = false;
  std::size_t first_time = 0;
  std::size_t last_time = 0;
  std::vector<std::int32_t> region_sites;  // grid indices, sorted
  Point x1{0, 0};
  Point x2{0, 0};
};

InducedFace induced_face(const LatticeDomain& domain, const DiscreteCurve& curve, const Box& box);

/// The face occurred and every region site lies in the closed polygon `u`.
bool event_G(const LatticeDomain& domain, const InducedFace& face, const Polygon& u);

}  // namespace percnat
