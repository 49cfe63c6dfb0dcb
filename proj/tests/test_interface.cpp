#include "percnat/error.hpp"
#include "percnat/interface.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace percnat;

namespace {

DomainPtr small_square() {
  JordanDomainSpec spec = named_domain("square");
  spec.marked = {{'a', Point(-1, -1)}, {'b', Point(1, 1)}};
  return std::make_shared<const LatticeDomain>(build_domain_approx(spec, 0.5));
}

}  // namespace

TEST_CASE("all-white interior: the interface hugs the black arc") {
  const auto d = small_square();
  const Coloring c = apply_boundary_condition(uniform_coloring(d, true), 'a', 'b');
  const DiscreteCurve curve = trace_interface(c, 'a', 'b');
  std::set<SiteCoord> right, left;
  for (const DualEdge& e : curve.edges) {
    right.insert(e.right());
    left.insert(e.left);
  }
  const auto arc = boundary_arc(*d, d->marked_edge('a'), d->marked_edge('b'));
  CHECK(right == std::set<SiteCoord>(arc.begin(), arc.end()));
  // Left neighbors are white: inner sites, or the two white boundary sites
  // next to the marked edges.
  for (const SiteCoord& s : left) CHECK(c.white(d->index(s)));
}

TEST_CASE("all-black interior: the interface hugs the white arc") {
  const auto d = small_square();
  const Coloring c = apply_boundary_condition(uniform_coloring(d, false), 'a', 'b');
  const DiscreteCurve curve = trace_interface(c, 'a', 'b');
  std::set<SiteCoord> left;
  for (const DualEdge& e : curve.edges) left.insert(e.left);
  const auto arc = boundary_arc(*d, d->marked_edge('b'), d->marked_edge('a'));
  CHECK(left == std::set<SiteCoord>(arc.begin(), arc.end()));
}

TEST_CASE("every edge separates white on the left from black on the right") {
  const auto d = std::make_shared<const LatticeDomain>(build_domain_approx(named_domain("disk"), 0.05));
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Coloring c = apply_boundary_condition(sample_coloring(d, {8, t}), 'a', 'c');
    const DiscreteCurve curve = trace_interface(c, 'a', 'c');
    for (const DualEdge& e : curve.edges) {
      REQUIRE(c.white(d->index(e.left)));
      REQUIRE(!c.white(d->index(e.right())));
    }
    // Consecutive edges share a dual vertex.
    for (std::size_t i = 0; i + 1 < curve.size(); ++i)
      CHECK((dual_vertex_ahead(curve.edges[i], d->eta()) - dual_vertex_behind(curve.edges[i + 1], d->eta())).norm() <
            1e-12);
    CHECK(interface_length(c, *c.boundary_condition()) == curve.size());
  }
}

TEST_CASE("swapping colors and endpoints reverses the interface") {
  const auto d = std::make_shared<const LatticeDomain>(build_domain_approx(named_domain("disk"), 0.15));
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const Coloring c = sample_coloring(d, {9, t});
    const DiscreteCurve fwd = trace_interface(apply_boundary_condition(c, 'a', 'b'), 'a', 'b');
    const DiscreteCurve back = trace_interface(apply_boundary_condition(c.swapped(), 'b', 'a'), 'b', 'a');
    REQUIRE(back.edges == fwd.reversed().edges);
  }
}

TEST_CASE("tracing needs a matching boundary condition") {
  const auto d = small_square();
  try {
    trace_interface(uniform_coloring(d, true), 'a', 'b');
    FAIL("expected NoBoundaryCondition");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBoundaryCondition);
  }
}

TEST_CASE("natural parametrization") {
  const auto d = std::make_shared<const LatticeDomain>(build_domain_approx(named_domain("disk"), 0.1));
  const Coloring c = apply_boundary_condition(sample_coloring(d, {1, 1}), 'a', 'c');
  DiscreteCurve full = trace_interface(c, 'a', 'c');
  REQUIRE(full.size() >= 7);
  DiscreteCurve seven = full;
  seven.edges.resize(7);
  seven.end = dual_vertex_ahead(seven.edges.back(), seven.eta);
  const ParametrizedCurve p = natural_parametrization(seven, 2.0);
  CHECK(p.total_time == 14);
  CHECK(p.at(0) == seven.start);
  CHECK(p.at(14) == seven.end);
  const Polygon v = seven.vertices();
  for (int k = 0; k <= 7; ++k) CHECK((p.at(2.0 * k) - v[k]).norm() < 1e-12);
  CHECK((p.at(3.0) - 0.5 * (v[1] + v[2])).norm() < 1e-12);
  CHECK_THROWS_AS(natural_parametrization(seven, 0.0), Error);
}

TEST_CASE("curve binary round trip") {
  const auto d = std::make_shared<const LatticeDomain>(build_domain_approx(named_domain("disk"), 0.05));
  const DiscreteCurve c = trace_interface(apply_boundary_condition(sample_coloring(d, {2, 2}), 'a', 'c'), 'a', 'c');
  std::stringstream ss;
  write_curve_binary(ss, c);
  const DiscreteCurve r = read_curve_binary(ss);
  CHECK(r.edges == c.edges);
  CHECK(r.eta == c.eta);
  CHECK(r.start == c.start);
  CHECK(r.end == c.end);
  std::stringstream bad("nonsense");
  CHECK_THROWS_AS(read_curve_binary(bad), Error);
}
