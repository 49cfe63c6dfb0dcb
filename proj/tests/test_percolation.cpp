#include "percnat/error.hpp"
#include "percnat/percolation.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace percnat;

namespace {

DomainPtr make(const char* name, double eta) {
  return std::make_shared<const LatticeDomain>(build_domain_approx(named_domain(name), eta));
}

}  // namespace

TEST_CASE("sampling is deterministic per stream") {
  const auto d = make("disk", 0.05);
  CHECK(sample_coloring(d, {11, 3}) == sample_coloring(d, {11, 3}));
  int differ = 0;
  for (std::uint64_t i = 0; i < 100; ++i) differ += !(sample_coloring(d, {11, 2 * i}) == sample_coloring(d, {11, 2 * i + 1}));
  CHECK(differ == 100);
}

TEST_CASE("white fraction is binomial") {
  const auto d = make("disk", 0.02);
  const double n = static_cast<double>(d->inner_sites().size());
  REQUIRE(n > 8000);
  double white = 0;
  for (std::uint64_t t = 0; t < 100; ++t) white += static_cast<double>(sample_coloring(d, {1, t}).white_inner_count());
  CHECK(std::abs(white / (100 * n) - 0.5) < 4 / std::sqrt(100 * n));
}

TEST_CASE("boundary condition colors the arcs") {
  const auto d = make("disk", 0.1);
  const Coloring c = sample_coloring(d, {2, 0});
  const Coloring ab = apply_boundary_condition(c, 'a', 'b');
  const Coloring ba = apply_boundary_condition(c, 'b', 'a');
  const auto black = boundary_arc(*d, d->marked_edge('a'), d->marked_edge('b'));
  const std::set<SiteCoord> black_set(black.begin(), black.end());
  for (auto s : d->boundary_cycle()) {
    const bool is_black = black_set.count(d->coord(s)) > 0;
    CHECK(ab.white(s) == !is_black);
    CHECK(ba.white(s) == is_black);
  }
  for (auto s : d->inner_sites()) CHECK(ab.white(s) == c.white(s));
}

TEST_CASE("marks on one boundary edge") {
  JordanDomainSpec spec = named_domain("square");
  spec.marked = {{'a', Point(1, 0.3)}, {'b', Point(1, 0.31)}};
  const auto d = std::make_shared<const LatticeDomain>(build_domain_approx(spec, 0.5));
  try {
    apply_boundary_condition(uniform_coloring(d, true), 'a', 'b');
    FAIL("expected SameMarkedEdge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SameMarkedEdge);
  }
}

TEST_CASE("coloring run-length round trip") {
  const auto d = make("square", 0.06);
  for (std::uint64_t t = 0; t < 5; ++t) {
    const Coloring c = sample_coloring(d, {4, t});
    std::stringstream ss;
    write_coloring(ss, c);
    CHECK(read_coloring(ss, d) == c);
  }
  std::stringstream bad("{\"format\":1}\n");
  CHECK_THROWS_AS(read_coloring(bad, d), Error);
}

TEST_CASE("swap and flip") {
  const auto d = make("disk", 0.1);
  const Coloring c = sample_coloring(d, {5, 0});
  const Coloring s = c.swapped();
  for (auto i : d->inner_sites()) CHECK(s.white(i) != c.white(i));
  const auto i0 = d->inner_sites()[7];
  const Coloring f = c.flipped(i0);
  CHECK(f.white(i0) != c.white(i0));
  CHECK(f.white_inner_count() + (c.white(i0) ? 1 : 0) == c.white_inner_count() + (c.white(i0) ? 0 : 1));
}
