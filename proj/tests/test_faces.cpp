#include "percnat/error.hpp"
#include "percnat/faces.hpp"

#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

using namespace percnat;

namespace {

DomainPtr square(double eta) {
  return std::make_shared<const LatticeDomain>(build_domain_approx(named_domain("square"), eta));
}

// Flood fill over inner sites avoiding the endpoints of the initial and final
// curve segments, seeded from the box.
struct Oracle {
  bool occurred = false;
  std::size_t first = 0, last = 0;
  std::set<SiteCoord> region;
};

Oracle oracle(const LatticeDomain& d, const DiscreteCurve& c, const Box& b) {
  Oracle o;
  const double eta = d.eta();
  std::vector<std::size_t> q;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (b.contains(site_position(c.edges[i].left, eta)) && b.contains(site_position(c.edges[i].right(), eta)))
      q.push_back(i);
  if (q.empty()) return o;
  o.occurred = true;
  o.first = q.front();
  o.last = q.back();
  std::set<SiteCoord> blocked;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i <= o.first || i >= o.last) {
      blocked.insert(c.edges[i].left);
      blocked.insert(c.edges[i].right());
    }
  std::set<SiteCoord> inner;
  for (auto i : d.inner_sites()) inner.insert(d.coord(i));
  std::queue<SiteCoord> work;
  for (const auto& s : inner)
    if (!blocked.count(s) && b.contains(site_position(s, eta)) && o.region.insert(s).second) work.push(s);
  while (!work.empty()) {
    const SiteCoord s = work.front();
    work.pop();
    for (const auto& k : kDirs) {
      const SiteCoord t = s + k;
      if (inner.count(t) && !blocked.count(t) && o.region.insert(t).second) work.push(t);
    }
  }
  return o;
}

DiscreteCurve sample_curve(const DomainPtr& d, std::uint64_t t) {
  return trace_interface(apply_boundary_condition(sample_coloring(d, {41, t}), 'a', 'c'), 'a', 'c');
}

}  // namespace

TEST_CASE("curve far from the box") {
  const auto d = square(1.0 / 16);
  // With every inner site white the interface runs along the black arc.
  const DiscreteCurve c = trace_interface(apply_boundary_condition(uniform_coloring(d, true), 'a', 'c'), 'a', 'c');
  const InducedFace f = induced_face(*d, c, Box{Point(0, 0), 0.25});
  CHECK_FALSE(f.occurred);
  CHECK(f.region_sites.empty());
  CHECK_FALSE(event_G(*d, f, d->spec().vertices));
}

TEST_CASE("induced face matches a flood-fill oracle") {
  const auto d = square(1.0 / 8);
  REQUIRE(d->inner_sites().size() <= 400);
  int occurred = 0;
  for (std::uint64_t t = 0; t < 300; ++t) {
    const DiscreteCurve c = sample_curve(d, t);
    for (const Box& b : {Box{Point(0, 0), 0.25}, Box{Point(0.3, -0.2), 0.3}, Box{Point(0, 0), 1.0}}) {
      const InducedFace f = induced_face(*d, c, b);
      const Oracle o = oracle(*d, c, b);
      REQUIRE(f.occurred == o.occurred);
      if (!o.occurred) continue;
      ++occurred;
      CHECK(f.first_time == o.first);
      CHECK(f.last_time == o.last);
      std::set<SiteCoord> got;
      for (auto i : f.region_sites) got.insert(d->coord(i));
      REQUIRE(got == o.region);
      CHECK((f.x1 - dual_vertex_behind(c.edges[o.first], d->eta())).norm() < 1e-12);
      CHECK((f.x2 - dual_vertex_ahead(c.edges[o.last], d->eta())).norm() < 1e-12);
    }
  }
  CHECK(occurred > 0);
}

TEST_CASE("event G") {
  const auto d = square(1.0 / 8);
  const Box b{Point(0, 0), 0.25};
  int strictly_larger = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const DiscreteCurve c = sample_curve(d, t);
    const InducedFace f = induced_face(*d, c, b);
    CHECK(event_G(*d, f, d->spec().vertices) == f.occurred);
    // Exhaustive membership scan against a random-ish region.
    const Polygon u = Box{Point(0.1, 0), 0.6}.polygon();
    bool all_in = f.occurred;
    for (auto i : f.region_sites) all_in = all_in && inside_closed(u, d->position(i));
    CHECK(event_G(*d, f, u) == all_in);
    if (f.occurred && std::any_of(f.region_sites.begin(), f.region_sites.end(),
                                  [&](std::int32_t i) { return !b.contains(d->position(i)); })) {
      ++strictly_larger;
      CHECK_FALSE(event_G(*d, f, b.polygon()));
    }
  }
  CHECK(strictly_larger > 0);
}

TEST_CASE("box must lie in the domain") {
  const auto d = square(1.0 / 8);
  const DiscreteCurve c = sample_curve(d, 0);
  try {
    induced_face(*d, c, Box{Point(0.9, 0), 0.25});
    FAIL("expected BoxOutsideDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BoxOutsideDomain);
  }
}
