#pragma once

#include "percnat/lattice.hpp"
#include "percnat/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace percnat {

using DomainPtr = std::shared_ptr<const LatticeDomain>;

struct BoundaryCondition {
  std::size_t black_from = 0;  // edge a_eta: arc a..b is black
  std::size_t black_to = 0;    // edge b_eta: arc b..a is white
};

/// One percolation sample on a domain. Interior colors live in a bitset over
/// the domain grid (bit set = white); boundary colors come from an optional
/// (a,b)-boundary condition kept apart from the interior.
class Coloring {
 public:
  Coloring() = default;
  Coloring(DomainPtr domain, std::vector<std::uint64_t> bits, RngStream seed_record = {});

  const LatticeDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  const std::vector<std::uint64_t>& bits() const { return bits_; }
  const RngStream& seed_record() const { return seed_; }
  const std::optional<BoundaryCondition>& boundary_condition() const { return bc_; }

  bool interior_white(std::int32_t idx) const { return bits_[idx >> 6] >> (idx & 63) & 1; }

  /// Color of an inner or boundary site; boundary sites need a boundary
  /// condition.
  bool white(std::int32_t idx) const;

  Coloring with_boundary_condition(const BoundaryCondition& bc) const;
  Coloring swapped() const;
  Coloring flipped(std::int32_t idx) const;
  void set_interior(std::int32_t idx, bool white);

  std::size_t white_inner_count() const;

  friend bool operator==(const Coloring& a, const Coloring& b);

 private:
  DomainPtr domain_;
  std::vector<std::uint64_t> bits_;
  RngStream seed_{};
  std::optional<BoundaryCondition> bc_;
};

/// Boundary color of cycle position `pos` under the given condition
/// (true = white).
inline bool boundary_white(const LatticeDomain& d, std::size_t pos, const BoundaryCondition& bc) {
  return !d.in_arc(pos, bc.black_from, bc.black_to);
}

Coloring sample_coloring(const DomainPtr& domain, const RngStream& rng);

/// Fills `bits` (resized as needed) with the interior colors for `rng`.
void sample_bits(const LatticeDomain& domain, const RngStream& rng, std::vector<std::uint64_t>& bits);

Coloring uniform_coloring(const DomainPtr& domain, bool white);

Coloring apply_boundary_condition(const Coloring& coloring, char a_label, char b_label);

/// Run-length format: one JSON header line, then LEB128 run lengths over inner
/// sites in index order, starting with a black run.
void write_coloring(std::ostream& out, const Coloring& c);
Coloring read_coloring(std::istream& in, const DomainPtr& domain);

}  // namespace percnat
