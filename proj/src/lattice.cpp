#include "percnat/lattice.hpp"

#include "percnat/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <deque>
#include <limits>

namespace percnat {

Point site_position(SiteCoord s, double eta) {
  return Point(eta * (s.u + 0.5 * s.v), eta * (0.5 * kSqrt3) * s.v);
}

Point LatticeDomain::boundary_edge_midpoint(std::size_t i) const {
  const std::size_t n = cycle_.size();
  return 0.5 * (position(cycle_[i]) + position(cycle_[(i + 1) % n]));
}

std::size_t LatticeDomain::marked_edge(char label) const {
  auto it = marked_.find(label);
  if (it == marked_.end())
    throw Error(ErrorKind::NotBoundaryEdge, std::string("no marked point '") + label + "'");
  return it->second;
}

bool LatticeDomain::is_interior_chord(std::int32_t p, int dir) const {
  const std::int32_t q = p + offsets_[dir];
  if (kind(p) != CellKind::Boundary || kind(q) != CellKind::Boundary) return false;
  const std::int32_t n = static_cast<std::int32_t>(cycle_.size());
  const std::int32_t d = (cycle_pos_[q] - cycle_pos_[p] + n) % n;
  if (d == 1 || d == n - 1) return false;
  return kind(p + offsets_[(dir + 1) % 6]) == CellKind::Inner &&
         kind(p + offsets_[(dir + 5) % 6]) == CellKind::Inner;
}

std::uint64_t LatticeDomain::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) h = (h ^ p[i]) * 0x100000001b3ull;
  };
  mix(&eta_, sizeof eta_);
  mix(&umin_, sizeof umin_);
  mix(&vmin_, sizeof vmin_);
  mix(&width_, sizeof width_);
  mix(&height_, sizeof height_);
  mix(kind_.data(), kind_.size());
  mix(cycle_.data(), cycle_.size() * sizeof(std::int32_t));
  return h;
}

namespace {

// Scanline strict interior test for every site of the grid. Sites next to an
// edge are settled by strictly_inside() so the two agree exactly.
std::vector<std::uint8_t> strict_interior_mask(const Polygon& poly, double eta, std::int32_t umin,
                                               std::int32_t vmin, std::int32_t w, std::int32_t h) {
  std::vector<std::uint8_t> in(static_cast<std::size_t>(w) * h, 0);
  const std::size_t n = poly.size();
  std::vector<double> xs;
  for (std::int32_t row = 0; row < h; ++row) {
    const std::int32_t v = vmin + row;
    const double y = site_position({0, v}, eta).y();
    xs.clear();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point& a = poly[i];
      const Point& b = poly[j];
      if ((a.y() > y) != (b.y() > y))
        xs.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
    }
    if (xs.empty()) continue;
    std::sort(xs.begin(), xs.end());
    std::size_t k = 0;  // crossings with xc <= x
    for (std::int32_t col = 0; col < w; ++col) {
      const Point p = site_position({umin + col, v}, eta);
      while (k < xs.size() && xs[k] <= p.x()) ++k;
      if ((xs.size() - k) % 2 == 1) in[static_cast<std::size_t>(row) * w + col] = 1;
    }
    // Near an edge the parity above can disagree with the exact predicate by rounding.
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = poly[i];
      const Point& b = poly[(i + 1) % n];
      if (std::min(a.y(), b.y()) > y || std::max(a.y(), b.y()) < y) continue;
      const double ulo = std::floor(std::min(a.x(), b.x()) / eta - 0.5 * v) - 1;
      const double uhi = std::ceil(std::max(a.x(), b.x()) / eta - 0.5 * v) + 1;
      double from = ulo, to = uhi;
      if (a.y() != b.y()) {
        const double xc = a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        from = std::floor(xc / eta - 0.5 * v) - 1;
        to = from + 3;
      }
      for (double u = std::max<double>(from, umin); u <= std::min<double>(to, umin + w - 1); ++u) {
        const std::int32_t col = static_cast<std::int32_t>(u) - umin;
        const std::size_t cell = static_cast<std::size_t>(row) * w + col;
        in[cell] = strictly_inside(poly, site_position({umin + col, v}, eta)) ? 1 : 0;
      }
    }
  }
  return in;
}

struct Grid {
  std::int32_t umin, vmin, w, h;
  std::array<std::int32_t, 6> off;
  std::size_t size() const { return static_cast<std::size_t>(w) * h; }
  SiteCoord coord(std::int32_t i) const { return {i % w + umin, i / w + vmin}; }
};

// Keeps only the largest connected component of `s`; ties go to the component
// whose lexicographically smallest site is smallest.
void keep_largest_component(const Grid& g, std::vector<std::uint8_t>& s) {
  std::vector<std::int32_t> comp(g.size(), -1);
  std::int32_t best = -1;
  std::size_t best_size = 0;
  SiteCoord best_min{};
  std::int32_t ncomp = 0;
  std::vector<std::int32_t> stack;
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(g.size()); ++i) {
    if (!s[i] || comp[i] >= 0) continue;
    std::size_t size = 0;
    SiteCoord mn = g.coord(i);
    comp[i] = ncomp;
    stack.push_back(i);
    while (!stack.empty()) {
      const std::int32_t x = stack.back();
      stack.pop_back();
      ++size;
      mn = std::min(mn, g.coord(x));
      for (int d = 0; d < 6; ++d) {
        const std::int32_t y = x + g.off[d];
        if (s[y] && comp[y] < 0) {
          comp[y] = ncomp;
          stack.push_back(y);
        }
      }
    }
    if (size > best_size || (size == best_size && mn < best_min)) {
      best = ncomp;
      best_size = size;
      best_min = mn;
    }
    ++ncomp;
  }
  for (std::size_t i = 0; i < g.size(); ++i) s[i] = s[i] && comp[i] == best;
}

int neighbor_mask(const Grid& g, const std::vector<std::uint8_t>& s, std::int32_t x) {
  int m = 0;
  for (int d = 0; d < 6; ++d)
    if (s[x + g.off[d]]) m |= 1 << d;
  return m;
}

// Removes sites of `s` until the outer boundary is a simple cycle: no boundary
// site may see two separate runs of inner neighbors, and no non-inner site may
// be enclosed.
bool remove_pinches(const Grid& g, std::vector<std::uint8_t>& s) {
  bool changed = false;
  // Enclosed non-inner sites: flood the outside from a padding corner.
  std::vector<std::uint8_t> outside(g.size(), 0);
  std::vector<std::int32_t> stack{0};
  outside[0] = 1;
  while (!stack.empty()) {
    const std::int32_t x = stack.back();
    stack.pop_back();
    const SiteCoord c = g.coord(x);
    for (int d = 0; d < 6; ++d) {
      const SiteCoord nc = c + kDirs[d];
      if (nc.u < g.umin || nc.u >= g.umin + g.w || nc.v < g.vmin || nc.v >= g.vmin + g.h) continue;
      const std::int32_t y = x + g.off[d];
      if (!s[y] && !outside[y]) {
        outside[y] = 1;
        stack.push_back(y);
      }
    }
  }
  std::vector<std::int32_t> drop;
  for (std::int32_t x = 0; x < static_cast<std::int32_t>(g.size()); ++x) {
    if (s[x]) continue;
    const SiteCoord c = g.coord(x);
    if (c.u <= g.umin || c.u >= g.umin + g.w - 1 || c.v <= g.vmin || c.v >= g.vmin + g.h - 1)
      continue;
    const int m = neighbor_mask(g, s, x);
    if (m == 0) continue;
    if (!outside[x]) {
      for (int d = 0; d < 6; ++d)
        if (m >> d & 1) drop.push_back(x + g.off[d]);
      continue;
    }
    // Runs of set bits in the cyclic 6-bit mask.
    int runs = 0, best_start = -1, best_len = 0;
    for (int d = 0; d < 6; ++d) {
      if (!(m >> d & 1) || (m >> ((d + 5) % 6) & 1)) continue;
      ++runs;
      int len = 0;
      while (len < 6 && (m >> ((d + len) % 6) & 1)) ++len;
      if (len > best_len) {
        best_len = len;
        best_start = d;
      }
    }
    if (runs < 2) continue;
    for (int d = 0; d < 6; ++d) {
      const int rel = (d - best_start + 6) % 6;
      if ((m >> d & 1) && rel >= best_len) drop.push_back(x + g.off[d]);
    }
  }
  for (std::int32_t y : drop) {
    if (s[y]) changed = true;
    s[y] = 0;
  }
  return changed;
}

}  // namespace

LatticeDomain build_domain_approx(const JordanDomainSpec& spec_in, double eta) {
  if (!(eta > 0)) throw Error(ErrorKind::ConfigInvalid, "eta must be positive");
  JordanDomainSpec spec = spec_in;
  if (!is_simple(spec.vertices)) throw Error(ErrorKind::InvalidPolygon, "polygon is not simple");
  if (signed_area(spec.vertices) < 0) std::reverse(spec.vertices.begin(), spec.vertices.end());

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const Point& p : spec.vertices) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  constexpr std::int32_t pad = 3;
  const double hv = eta * 0.5 * kSqrt3;
  const auto vlo = static_cast<std::int32_t>(std::floor(ymin / hv)) - pad;
  const auto vhi = static_cast<std::int32_t>(std::ceil(ymax / hv)) + pad;
  const auto ulo = static_cast<std::int32_t>(std::floor(xmin / eta - 0.5 * vhi)) - pad;
  const auto uhi = static_cast<std::int32_t>(std::ceil(xmax / eta - 0.5 * vlo)) + pad;

  Grid g{ulo, vlo, uhi - ulo + 1, vhi - vlo + 1, {}};
  for (int d = 0; d < 6; ++d) g.off[d] = kDirs[d].v * g.w + kDirs[d].u;

  std::vector<std::uint8_t> s = strict_interior_mask(spec.vertices, eta, g.umin, g.vmin, g.w, g.h);
  keep_largest_component(g, s);
  while (remove_pinches(g, s)) keep_largest_component(g, s);
  if (std::find(s.begin(), s.end(), 1) == s.end())
    throw Error(ErrorKind::DomainTooSmall, "no lattice site lies strictly inside the polygon");

  LatticeDomain dom;
  dom.eta_ = eta;
  dom.spec_ = spec;
  dom.umin_ = g.umin;
  dom.vmin_ = g.vmin;
  dom.width_ = g.w;
  dom.height_ = g.h;
  dom.offsets_ = g.off;
  dom.kind_.assign(g.size(), static_cast<std::uint8_t>(CellKind::Exterior));
  std::size_t nboundary = 0;
  std::int32_t start = -1;
  for (std::int32_t x = 0; x < static_cast<std::int32_t>(g.size()); ++x) {
    if (s[x]) {
      dom.kind_[x] = static_cast<std::uint8_t>(CellKind::Inner);
      dom.inner_.push_back(x);
    } else if (g.coord(x).u > g.umin && g.coord(x).u < g.umin + g.w - 1 && g.coord(x).v > g.vmin &&
               g.coord(x).v < g.vmin + g.h - 1 && neighbor_mask(g, s, x) != 0) {
      dom.kind_[x] = static_cast<std::uint8_t>(CellKind::Boundary);
      ++nboundary;
      if (start < 0 || g.coord(x) < g.coord(start)) start = x;
    }
  }

  // Outer face walk, interior on the left.
  dom.cycle_pos_.assign(g.size(), -1);
  std::int32_t z = start;
  do {
    if (dom.cycle_pos_[z] >= 0 || dom.cycle_.size() > nboundary)
      throw Error(ErrorKind::InvalidPolygon, "boundary walk is not a simple cycle");
    dom.cycle_pos_[z] = static_cast<std::int32_t>(dom.cycle_.size());
    dom.cycle_.push_back(z);
    const int m = neighbor_mask(g, s, z);
    int j = 0;
    while (!((m >> j & 1) && !(m >> ((j + 5) % 6) & 1))) ++j;
    const int dir = (j + 5) % 6;
    dom.cycle_dir_.push_back(static_cast<std::uint8_t>(dir));
    z += g.off[dir];
  } while (z != start);
  if (dom.cycle_.size() != nboundary)
    throw Error(ErrorKind::InvalidPolygon, "boundary walk does not cover every boundary site");
  if (dom.cycle_.size() < 3) throw Error(ErrorKind::DomainTooSmall, "boundary too short");

  for (std::int32_t p : dom.cycle_)
    for (int d = 0; d < 6; ++d) {
      const std::int32_t q = p + g.off[d];
      if (p < q && dom.is_interior_chord(p, d)) dom.chords_.emplace_back(p, q);
    }

  for (const auto& [label, pt] : spec.marked) dom.marked_[label] = nearest_boundary_edge(dom, pt);
  return dom;
}

std::vector<SiteCoord> boundary_arc(const LatticeDomain& domain, std::size_t e, std::size_t e2) {
  const std::size_t n = domain.boundary_size();
  if (e >= n || e2 >= n) throw Error(ErrorKind::NotBoundaryEdge, "edge index out of range");
  if (e == e2) throw Error(ErrorKind::NotBoundaryEdge, "arc endpoints must be distinct edges");
  std::vector<SiteCoord> out;
  for (std::size_t p = (e + 1) % n;; p = (p + 1) % n) {
    out.push_back(domain.coord(domain.boundary_cycle()[p]));
    if (p == e2) break;
  }
  return out;
}

std::size_t nearest_boundary_edge(const LatticeDomain& domain, const Point& x) {
  std::size_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < domain.boundary_size(); ++i) {
    const double d = (domain.boundary_edge_midpoint(i) - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

}  // namespace percnat
