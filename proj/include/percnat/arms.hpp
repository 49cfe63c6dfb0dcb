#pragma once

#include "percnat/percolation.hpp"

#include <string>
#include <vector>

namespace percnat {

/// Annulus between an inner region and an outer region. With `inner_is_site`
/// the inner region is the single lattice site nearest `center`.
struct AnnulusSpec {
  Polygon inner;
  Polygon outer;
  bool inner_is_site = false;
  Point center{0, 0};

  static AnnulusSpec boxes(const Box& inner, const Box& outer);
  static AnnulusSpec site_to_box(const Point& center, double radius);
};

/// Cyclic color sequence over {'W','B'}, or one of the presets of the
/// standard k-arm convention.
struct ArmPattern {
  enum class Kind { Sequence, Alternating4, NotAllSame };
  Kind kind = Kind::Sequence;
  int k = 1;
  std::string colors;

  static ArmPattern sequence(const std::string& colors);
  static ArmPattern alternating4() { return {Kind::Alternating4, 4, "WBWB"}; }
  static ArmPattern not_all_same(int k) { return {Kind::NotAllSame, k, {}}; }
  /// The conventional pattern for k = 2..5.
  static ArmPattern standard(int k);
  std::string name() const;
};

/// Site classes for one annulus on one domain: I (inner region), A (the
/// annulus), O (beyond the outer region). Arms are monochromatic paths in A
/// from a site adjacent to I to a site adjacent to O.
struct ArmGeometry {
  static constexpr std::uint8_t kInA = 1, kNearI = 2, kNearO = 4;
  std::vector<std::uint8_t> flags;     // per grid cell
  std::vector<std::int32_t> starts;    // A sites adjacent to I
  std::int32_t center_site = -1;       // the inner site when I is a single site
  std::size_t annulus_sites = 0;
};

ArmGeometry prepare_annulus(const LatticeDomain& domain, const AnnulusSpec& annulus);

/// Crossing-cluster counts per color and the largest number of vertex-disjoint
/// crossings per color (each capped at `path_cap`; zero when not computed).
struct ArmCounts {
  int white_clusters = 0;
  int black_clusters = 0;
  int white_paths = 0;
  int black_paths = 0;
  bool paths_computed = false;
};

/// What a set of patterns needs from count_arms.
struct PathNeeds {
  int cap = 0;         // 0: cluster counts suffice
  bool mono = false;   // some pattern is monochromatic with k >= 2
  bool single_color = false;  // some pattern uses one color only
  int color_need = 0;  // most paths of one color asked by a two-color pattern
};

PathNeeds path_needs(const std::vector<ArmPattern>& patterns);

/// Disjoint paths are searched (up to needs.cap in total) when a monochromatic
/// pattern asks for them or when both colors cross.
ArmCounts count_arms(const Coloring& coloring, const ArmGeometry& geom, const PathNeeds& needs);

bool pattern_holds(const ArmCounts& counts, const ArmPattern& pattern);

bool arm_event(const Coloring& coloring, const AnnulusSpec& annulus, const ArmPattern& pattern);

struct ArmEstimate {
  double probability = 0;
  double stderr_ = 0;
  std::size_t trials = 0;
  std::size_t hits = 0;
  ArmPattern pattern;
};

ArmEstimate make_estimate(std::size_t hits, std::size_t trials, const ArmPattern& pattern);

/// Fresh coloring per trial (stream id = trial index); one estimate per
/// pattern, all evaluated on the same colorings.
std::vector<ArmEstimate> estimate_alpha(const DomainPtr& domain, const AnnulusSpec& annulus,
                                        const std::vector<ArmPattern>& patterns, std::size_t trials,
                                        std::uint64_t master_seed, int threads = 1);

}  // namespace percnat
