#pragma once

#include "percnat/geometry.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace percnat {

/// Axial coordinates on the triangular lattice; the site sits at
/// eta * (u + v/2, v*sqrt(3)/2).
struct SiteCoord {
  std::int32_t u = 0;
  std::int32_t v = 0;

  friend bool operator==(const SiteCoord&, const SiteCoord&) = default;
  friend auto operator<=>(const SiteCoord&, const SiteCoord&) = default;
  SiteCoord operator+(const SiteCoord& o) const { return {u + o.u, v + o.v}; }
};

/// The six neighbor offsets in counterclockwise order, starting east.
inline constexpr std::array<SiteCoord, 6> kDirs{
    SiteCoord{1, 0}, SiteCoord{0, 1}, SiteCoord{-1, 1},
    SiteCoord{-1, 0}, SiteCoord{0, -1}, SiteCoord{1, -1}};

inline constexpr double kSqrt3 = 1.7320508075688772935;

Point site_position(SiteCoord s, double eta);

/// Dual (hexagonal) edge separating `left` and `left + kDirs[dir]`, traversed
/// with `left` on its left.
struct DualEdge {
  SiteCoord left;
  std::uint8_t dir = 0;

  SiteCoord right() const { return left + kDirs[dir]; }
  friend bool operator==(const DualEdge&, const DualEdge&) = default;
};

struct JordanDomainSpec {
  Polygon vertices;                    // counterclockwise, simple
  std::map<char, Point> marked;        // labels among a, b, c, d

  static JordanDomainSpec from_json(const std::string& text);
  std::string to_json() const;
};

/// Built-in domains: "disk" (unit disk as a 2048-gon), "square" ([-1,1]^2) and
/// "rhombus60" (unit-side rhombus spanned by e1 and e2). Marked points default
/// to the four compass points for the disk and square, and to the corners for
/// the rhombus.
JordanDomainSpec named_domain(const std::string& name);

/// Square B_R(z) as a spec, marked at its four side midpoints (a bottom, then
/// counterclockwise).
JordanDomainSpec box_domain(const Box& box);

enum class CellKind : std::uint8_t { Exterior = 0, Inner = 1, Boundary = 2 };

/// The eta-approximation of a Jordan domain. Sites are addressed by an index
/// into a dense parallelogram grid; neighbor steps are constant offsets.
class LatticeDomain {
 public:
  double eta() const { return eta_; }
  const JordanDomainSpec& spec() const { return spec_; }

  std::int32_t width() const { return width_; }
  std::int32_t height() const { return height_; }
  std::size_t cell_count() const { return kind_.size(); }

  std::int32_t index(SiteCoord s) const { return (s.v - vmin_) * width_ + (s.u - umin_); }
  SiteCoord coord(std::int32_t idx) const {
    return {idx % width_ + umin_, idx / width_ + vmin_};
  }
  bool in_grid(SiteCoord s) const {
    return s.u >= umin_ && s.u < umin_ + width_ && s.v >= vmin_ && s.v < vmin_ + height_;
  }
  std::int32_t offset(int dir) const { return offsets_[dir]; }
  Point position(std::int32_t idx) const { return site_position(coord(idx), eta_); }

  CellKind kind(std::int32_t idx) const { return static_cast<CellKind>(kind_[idx]); }
  CellKind kind(SiteCoord s) const {
    return in_grid(s) ? kind(index(s)) : CellKind::Exterior;
  }
  const std::vector<std::uint8_t>& kinds() const { return kind_; }

  const std::vector<std::int32_t>& inner_sites() const { return inner_; }
  /// Boundary sites in counterclockwise order; boundary edge i joins
  /// cycle[i] and cycle[i+1].
  const std::vector<std::int32_t>& boundary_cycle() const { return cycle_; }
  std::size_t boundary_size() const { return cycle_.size(); }
  /// Position of a boundary site on the cycle, or -1.
  std::int32_t cycle_position(std::int32_t idx) const { return cycle_pos_[idx]; }
  /// Direction from cycle[i] to cycle[i+1].
  int boundary_edge_dir(std::size_t i) const { return cycle_dir_[i]; }
  Point boundary_edge_midpoint(std::size_t i) const;

  /// Pairs of adjacent boundary sites, not consecutive on the cycle, whose
  /// edge runs through the interior.
  const std::vector<std::pair<std::int32_t, std::int32_t>>& interior_chords() const {
    return chords_;
  }
  bool is_interior_chord(std::int32_t p, int dir) const;

  const std::map<char, std::size_t>& marked_edges() const { return marked_; }
  std::size_t marked_edge(char label) const;

  /// Cyclic membership of boundary position `pos` in the arc that follows
  /// edge `from` up to and including the first site of edge `to`.
  bool in_arc(std::size_t pos, std::size_t from, std::size_t to) const {
    const std::size_t n = cycle_.size();
    return (pos + n - from - 1) % n < (to + n - from) % n;
  }

  std::uint64_t hash() const;

 private:
  friend LatticeDomain build_domain_approx(const JordanDomainSpec&, double);

  double eta_ = 1.0;
  JordanDomainSpec spec_;
  std::int32_t umin_ = 0, vmin_ = 0, width_ = 0, height_ = 0;
  std::array<std::int32_t, 6> offsets_{};
  std::vector<std::uint8_t> kind_;
  std::vector<std::int32_t> inner_;
  std::vector<std::int32_t> cycle_;
  std::vector<std::uint8_t> cycle_dir_;
  std::vector<std::int32_t> cycle_pos_;
  std::vector<std::pair<std::int32_t, std::int32_t>> chords_;
  std::map<char, std::size_t> marked_;
};

LatticeDomain build_domain_approx(const JordanDomainSpec& spec, double eta);

/// Boundary sites of the counterclockwise arc from edge e to edge e2: cycle
/// positions e+1 through e2.
std::vector<SiteCoord> boundary_arc(const LatticeDomain& domain, std::size_t e, std::size_t e2);

std::size_t nearest_boundary_edge(const LatticeDomain& domain, const Point& x);

}  // namespace percnat
