#include "percnat/content.hpp"
#include "percnat/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace percnat;

namespace {

template <class F>
void expect_error(ErrorKind kind, F&& f) {
  try {
    f();
    FAIL("expected " << to_string(kind));
  } catch (const Error& e) {
    CHECK(e.kind() == kind);
  }
}

// Closed segment meets closed rectangle: an endpoint inside, or a crossing of
// one of the four sides.
bool meets(const Point& a, const Point& b, const Point& lo, const Point& hi) {
  auto inside = [&](const Point& p) {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  };
  if (inside(a) || inside(b)) return true;
  const Point c[4] = {lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())};
  for (int i = 0; i < 4; ++i)
    if (segments_intersect(a, b, c[i], c[(i + 1) % 4])) return true;
  return false;
}

std::size_t count_oracle(const std::vector<Point>& line, const Box& region, double eps) {
  const int n = static_cast<int>(std::lround(region.radius / eps));
  std::size_t count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point c = region.lo() + Point((2 * i + 1) * eps, (2 * j + 1) * eps);
      const Point lo = c.array() - 2 * eps, hi = c.array() + 2 * eps;
      bool hit = false;
      for (std::size_t k = 0; k + 1 < line.size() && !hit; ++k) hit = meets(line[k], line[k + 1], lo, hi);
      count += hit;
    }
  return count;
}

}  // namespace

TEST_CASE("analytic Minkowski profiles") {
  const std::vector<double> grid = geometric_grid(1.0 / 512, 0.5);
  const Point seg[2] = {Point(0, 0), Point(1, 0)};
  const ContentProfile s = minkowski_estimate(Shape::polyline(seg), 1.0, grid);
  for (const auto& x : s.samples) CHECK(x.m == doctest::Approx(2 + M_PI * x.r).epsilon(0.01));
  Shape sq;
  sq.filled.push_back(Box{Point(0.5, 0.5), 0.5}.polygon());
  for (const auto& x : minkowski_estimate(sq, 2.0, grid).samples)
    CHECK(x.m == doctest::Approx(1 + 4 * x.r + M_PI * x.r * x.r).epsilon(0.01));
  const Point pt[1] = {Point(0.2, 0.7)};
  for (const auto& x : minkowski_estimate(Shape::points(pt), 0.0, grid).samples)
    CHECK(x.m == doctest::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("plateau is the median over the window") {
  const Point seg[2] = {Point(0, 0), Point(1, 0)};
  const std::vector<double> grid{0.5, 0.25, 0.125, 0.0625};
  const ContentProfile p = minkowski_estimate(Shape::polyline(seg), 1.0, grid, 0.1, 0.3);
  std::vector<double> in;
  for (const auto& x : p.samples)
    if (x.r >= 0.1 && x.r <= 0.3) in.push_back(x.m);
  REQUIRE(in.size() == 2);
  CHECK(p.plateau == doctest::Approx(0.5 * (in[0] + in[1])));
  expect_error(ErrorKind::EmptyShape, [&] { minkowski_estimate(Shape{}, 1.0, grid); });
  const std::vector<double> up{0.1, 0.2};
  expect_error(ErrorKind::ConfigInvalid, [&] { minkowski_estimate(Shape::polyline(seg), 1.0, up); });
}

TEST_CASE("neighborhood area does not depend on segment order") {
  // Reordering breaks every chain of consecutive segments, which the sweep
  // otherwise merges per column.
  std::mt19937 g(8);
  std::normal_distribution<double> step(0, 0.01);
  std::vector<Point> walk{Point(0, 0)};
  for (int i = 0; i < 3000; ++i) walk.push_back(walk.back() + Point(step(g), step(g)));
  const Shape s = Shape::polyline(walk);
  Shape shuffled = s;
  std::shuffle(shuffled.segments.begin(), shuffled.segments.end(), g);
  for (double r : {0.002, 0.02, 0.2}) CHECK(neighborhood_area(s, r) == doctest::Approx(neighborhood_area(shuffled, r)).epsilon(1e-12));
}

TEST_CASE("scaling covariance") {
  const Point a[3] = {Point(0, 0), Point(0.3, 0.4), Point(0.9, 0.1)};
  const Point b[3] = {2 * a[0], 2 * a[1], 2 * a[2]};
  for (double r : {0.01, 0.05, 0.2})
    CHECK(neighborhood_area(Shape::polyline(b), 2 * r) ==
          doctest::Approx(4 * neighborhood_area(Shape::polyline(a), r)).epsilon(1e-9));
}

TEST_CASE("box count against an exhaustive oracle") {
  const Box region{Point(0, 0), 0.5};
  const std::vector<Point> far{Point(3, 3), Point(4, 3)};
  CHECK(box_count(far, region, 0.125).count == 0);
  const std::vector<Point> bisect{Point(-0.5, 0), Point(0.5, 0)};
  for (double eps : {0.25, 0.125, 0.0625, 0.03125}) CHECK(box_count(bisect, region, eps).count == count_oracle(bisect, region, eps));
  std::mt19937 g(4);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int t = 0; t < 50; ++t) {
    std::vector<Point> line;
    for (int k = 0; k < 6; ++k) line.emplace_back(u(g), u(g));
    for (double eps : {0.125, 0.0625}) REQUIRE(box_count(line, region, eps).count == count_oracle(line, region, eps));
  }
}

TEST_CASE("box count preconditions") {
  const Box region{Point(0, 0), 0.5};
  const std::vector<Point> line{Point(-0.5, 0), Point(0.5, 0)};
  expect_error(ErrorKind::NotDyadic, [&] { box_count(line, region, 0.1); });
  expect_error(ErrorKind::NotDyadic, [&] { box_count(line, region, 1.0); });
  const Polygon sq = Box{Point(0, 0), 1.0}.polygon();
  expect_error(ErrorKind::EpsilonTooLarge, [&] { box_count(line, region, 0.5, sq); });
  CHECK_NOTHROW(box_count(line, region, 0.25, sq));
  expect_error(ErrorKind::EpsilonTooLarge, [&] { box_count(line, Box{Point(0, 0), 1.0}, 0.25, sq); });
}

TEST_CASE("beta estimate") {
  const BetaEstimate b = beta_estimate(0.25, 1.0 / 64, 40, 7);
  REQUIRE(b.hits >= 1);
  CHECK(b.mean > 0);
  CHECK(b.values.size() == b.hits);
  expect_error(ErrorKind::NoHits, [] { beta_estimate(0.25, 1.0 / 16, 10, 7, 1, Point(5, 5)); });
}

TEST_CASE("atomic measures") {
  const auto d = std::make_shared<const LatticeDomain>(build_domain_approx(named_domain("disk"), 0.05));
  const DiscreteCurve c = trace_interface(apply_boundary_condition(sample_coloring(d, {3, 3}), 'a', 'c'), 'a', 'c');
  const AtomicMeasure m = interface_measure(c, 0.4, 2.0);
  CHECK(m.total_mass() == doctest::Approx(2.0 * 0.05 * 0.05 * static_cast<double>(c.size()) / 0.4));
  const Box whole{Point(0, 0), 2.0};
  double parts = 0;
  for (const Point& z : {Point(-1, -1), Point(1, -1), Point(-1, 1), Point(1, 1)}) parts += m.mass_in(Box{z, 1.0});
  CHECK(parts == doctest::Approx(m.mass_in(whole)));
  CHECK(m.mass_in(Box{Point(5, 5), 1.0}) == 0);

  const PivotalSet none;
  CHECK(pivotal_measure(none, 0.05, 0.1).total_mass() == 0);
  const PivotalSet some{{0, 0}, {1, 2}, {3, -1}};
  const AtomicMeasure p = pivotal_measure(some, 0.05, 0.1, 3.0);
  CHECK(p.total_mass() == doctest::Approx(3.0 * 0.05 * 0.05 * 3 / 0.1));
  for (const Atom& a : p.atoms) CHECK(a.mass == p.atoms.front().mass);
  CHECK(p.atoms.front().mass > 0);
  CHECK_THROWS_AS(interface_measure(c, 0.0), Error);
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1001);
  std::iota(v.begin(), v.end(), 0.0);
  CHECK(pairwise_sum(v) == 500500.0);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
