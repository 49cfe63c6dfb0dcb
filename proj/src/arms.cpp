#include "percnat/arms.hpp"

#include "percnat/error.hpp"
#include "percnat/parallel.hpp"
#include "percnat/union_find.hpp"

#include <algorithm>
#include <cmath>

namespace percnat {

AnnulusSpec AnnulusSpec::boxes(const Box& inner, const Box& outer) {
  if (!(inner.radius < outer.radius) || (inner.center - outer.center).cwiseAbs().maxCoeff() + inner.radius >= outer.radius)
    throw Error(ErrorKind::AnnulusOutsideDomain, "inner box must lie strictly inside the outer box");
  AnnulusSpec a;
  a.inner = inner.polygon();
  a.outer = outer.polygon();
  a.center = inner.center;
  return a;
}

AnnulusSpec AnnulusSpec::site_to_box(const Point& center, double radius) {
  AnnulusSpec a;
  a.inner_is_site = true;
  a.center = center;
  a.outer = Box{center, radius}.polygon();
  return a;
}

ArmPattern ArmPattern::sequence(const std::string& colors) {
  if (colors.empty()) throw Error(ErrorKind::UnsupportedPattern, "empty color sequence");
  for (char c : colors)
    if (c != 'W' && c != 'B') throw Error(ErrorKind::UnsupportedPattern, "colors must be W or B");
  return {Kind::Sequence, static_cast<int>(colors.size()), colors};
}

ArmPattern ArmPattern::standard(int k) {
  if (k == 4) return alternating4();
  if (k == 2 || k == 3 || k == 5) return not_all_same(k);
  throw Error(ErrorKind::UnsupportedPattern, "the standard convention covers k = 2..5");
}

std::string ArmPattern::name() const {
  switch (kind) {
    case Kind::Alternating4: return "alternating4";
    case Kind::NotAllSame: return "not-all-same";
    case Kind::Sequence: break;
  }
  return colors;
}

namespace {

// A pattern reduced to conditions on the arm counts.
struct Requirement {
  int white_clusters = 0, black_clusters = 0;  // alternating patterns
  int white_paths = 0, black_paths = 0;        // disjoint paths per color
  int total_paths = 0;
  bool mono = false;
};

Requirement reduce(const ArmPattern& p) {
  Requirement r;
  if (p.kind == ArmPattern::Kind::NotAllSame) {
    if (p.k < 2) throw Error(ErrorKind::UnsupportedPattern, "not-all-same needs k >= 2");
    r.white_paths = r.black_paths = 1;
    r.total_paths = p.k;
    return r;
  }
  const std::string& s = p.kind == ArmPattern::Kind::Alternating4 ? std::string("WBWB") : p.colors;
  const int n = static_cast<int>(s.size());
  const int w = static_cast<int>(std::count(s.begin(), s.end(), 'W'));
  const int b = n - w;
  if (w == 0 || b == 0) {
    r.mono = n >= 2;
    (w ? r.white_paths : r.black_paths) = n;
    r.total_paths = n;
    return r;
  }
  bool alternating = n % 2 == 0;
  for (int i = 0; i < n && alternating; ++i) alternating = s[i] != s[(i + 1) % n];
  if (alternating) {
    // Disjoint same-color crossings separated by the other color lie in
    // distinct clusters, and distinct crossing clusters are always separated.
    r.white_clusters = r.black_clusters = n / 2;
    return r;
  }
  if (w == 1 || b == 1) {
    // With one color appearing once, every cyclic arrangement is the same.
    r.white_paths = w;
    r.black_paths = b;
    r.total_paths = n;
    return r;
  }
  throw Error(ErrorKind::UnsupportedPattern, "pattern '" + s + "' is not reducible to cluster or path counts");
}

}  // namespace

PathNeeds path_needs(const std::vector<ArmPattern>& patterns) {
  PathNeeds needs;
  for (const auto& p : patterns) {
    const Requirement r = reduce(p);
    if (r.total_paths > 1) needs.cap = std::max(needs.cap, r.total_paths);
    needs.mono = needs.mono || r.mono;
    needs.single_color = needs.single_color || (r.white_clusters == 0 && (r.white_paths == 0 || r.black_paths == 0));
    if (!r.mono) needs.color_need = std::max({needs.color_need, r.white_paths, r.black_paths});
  }
  return needs;
}

bool pattern_holds(const ArmCounts& c, const ArmPattern& p) {
  const Requirement r = reduce(p);
  if (c.white_clusters < r.white_clusters || c.black_clusters < r.black_clusters) return false;
  // Each crossing cluster carries at least one crossing.
  const int w_lb = c.white_clusters, b_lb = c.black_clusters;
  if (w_lb >= r.white_paths && b_lb >= r.black_paths && w_lb + b_lb >= r.total_paths) return true;
  if (r.total_paths <= 1) return false;
  if (!c.paths_computed) {
    if ((r.white_paths > 0 && w_lb == 0) || (r.black_paths > 0 && b_lb == 0)) return false;
    throw Error(ErrorKind::UnsupportedPattern, "arm counts were computed without the needed path search");
  }
  const int w = c.white_paths, b = c.black_paths;
  return w >= r.white_paths && b >= r.black_paths && w + b >= r.total_paths;
}

ArmGeometry prepare_annulus(const LatticeDomain& d, const AnnulusSpec& a) {
  const std::size_t cells = d.cell_count();
  std::vector<std::uint8_t> cls(cells, 0);  // 1 = I, 2 = A, 3 = O
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Point& p : a.outer) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
  }
  std::int32_t site = -1;
  if (a.inner_is_site) {
    const double eta = d.eta();
    const double vv = std::round(a.center.y() / (eta * 0.5 * kSqrt3));
    const SiteCoord guess{static_cast<std::int32_t>(std::round(a.center.x() / eta - 0.5 * vv)),
                          static_cast<std::int32_t>(vv)};
    double best = 1e300;
    for (int du = -1; du <= 1; ++du)
      for (int dv = -1; dv <= 1; ++dv) {
        const SiteCoord s{guess.u + du, guess.v + dv};
        const double dist = (site_position(s, eta) - a.center).squaredNorm();
        if (dist < best) {
          best = dist;
          site = d.in_grid(s) ? d.index(s) : -1;
        }
      }
    if (site < 0 || d.kind(site) != CellKind::Inner)
      throw Error(ErrorKind::AnnulusOutsideDomain, "annulus center is not an inner site");
  }
  bool any_inner = false;
  for (std::size_t i = 0; i < cells; ++i) {
    const auto idx = static_cast<std::int32_t>(i);
    const Point p = d.position(idx);
    if (p.x() < xmin || p.x() > xmax || p.y() < ymin || p.y() > ymax || !inside_closed(a.outer, p)) {
      cls[i] = 3;
      continue;
    }
    const bool in_i = a.inner_is_site ? idx == site : inside_closed(a.inner, p);
    if (in_i) {
      cls[i] = 1;
      any_inner = true;
      continue;
    }
    if (d.kind(idx) != CellKind::Inner)
      throw Error(ErrorKind::AnnulusOutsideDomain, "annulus contains sites outside the domain interior");
    cls[i] = 2;
  }
  if (!any_inner) throw Error(ErrorKind::AnnulusOutsideDomain, "inner region contains no site");
  ArmGeometry g;
  g.center_site = site;
  g.flags.assign(cells, 0);
  for (std::size_t i = 0; i < cells; ++i) {
    if (cls[i] != 2) continue;
    std::uint8_t f = ArmGeometry::kInA;
    for (int k = 0; k < 6; ++k) {
      const std::uint8_t c = cls[static_cast<std::int32_t>(i) + d.offset(k)];
      if (c == 1) f |= ArmGeometry::kNearI;
      if (c == 3) f |= ArmGeometry::kNearO;
    }
    g.flags[i] = f;
    ++g.annulus_sites;
    if (f & ArmGeometry::kNearI) g.starts.push_back(static_cast<std::int32_t>(i));
  }
  return g;
}

namespace {

constexpr std::int32_t kNone = -1, kSink = -2, kSource = -3;

struct ArmScratch {
  std::vector<std::int32_t> label;  // cluster id per cell, -1 if unlabelled
  std::vector<std::int32_t> nxt, prv;
  std::vector<std::int32_t> parent;
  MarkBuffer seen;
  std::vector<std::int32_t> sites, offsets, queue;

  void ensure(std::size_t cells) {
    if (label.size() < cells) {
      label.assign(cells, -1);
      nxt.assign(cells, kNone);
      prv.assign(cells, kNone);
      parent.assign(2 * cells, 0);
    }
  }
};

// Vertex-disjoint crossings of one color, by augmenting paths in the
// vertex-split residual graph. States are 2*site (entry copy) and 2*site+1
// (exit copy). Depth-first order keeps a failing search local to the part of
// the clusters in front of the bottleneck.
int disjoint_paths(const Coloring& col, const ArmGeometry& g, ArmScratch& s, bool white, int cap) {
  const LatticeDomain& d = col.domain();
  auto in_color = [&](std::int32_t u) { return (g.flags[u] & ArmGeometry::kInA) && col.interior_white(u) == white; };
  std::vector<std::int32_t> touched;
  int flow = 0;
  while (flow < cap) {
    s.seen.begin(2 * d.cell_count());
    s.queue.clear();
    for (std::int32_t v : g.starts) {
      if (col.interior_white(v) == white && s.prv[v] != kSource) {
        s.seen.set(2 * v);
        s.parent[2 * v] = kSource;
        s.queue.push_back(2 * v);
      }
    }
    std::int32_t found = -1;
    while (!s.queue.empty()) {
      const std::int32_t st = s.queue.back();
      s.queue.pop_back();
      const std::int32_t v = st >> 1;
      auto visit = [&](std::int32_t to) {
        if (!s.seen.test_and_set(to)) {
          s.parent[to] = st;
          s.queue.push_back(to);
        }
      };
      if ((st & 1) == 0) {
        if (s.prv[v] == kNone)
          visit(2 * v + 1);
        else if (s.prv[v] >= 0)
          visit(2 * s.prv[v] + 1);
      } else {
        if ((g.flags[v] & ArmGeometry::kNearO) && s.nxt[v] != kSink) {
          found = st;
          break;
        }
        if (s.prv[v] != kNone) visit(2 * v);
        for (int k = 0; k < 6; ++k) {
          const std::int32_t u = v + d.offset(k);
          if (s.nxt[v] != u && in_color(u)) visit(2 * u);
        }
      }
    }
    if (found < 0) break;
    // Collect the path source -> ... -> found, then apply it forwards.
    std::vector<std::int32_t> path;
    for (std::int32_t st = found; st != kSource; st = s.parent[st]) path.push_back(st);
    std::reverse(path.begin(), path.end());
    s.prv[path.front() >> 1] = kSource;
    touched.push_back(path.front() >> 1);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      const std::int32_t a = path[i], b = path[i + 1];
      const std::int32_t va = a >> 1, vb = b >> 1;
      if ((a & 1) == 0) {
        if (va != vb) {  // cancel flow vb -> va
          if (s.nxt[vb] == va) s.nxt[vb] = kNone;
          if (s.prv[va] == vb) s.prv[va] = kNone;
        }
      } else if (va != vb) {  // push flow va -> vb
        s.nxt[va] = vb;
        s.prv[vb] = va;
        touched.push_back(vb);
      }
    }
    s.nxt[found >> 1] = kSink;
    ++flow;
  }
  for (std::int32_t x : touched) s.nxt[x] = s.prv[x] = kNone;
  return flow;
}

}  // namespace

namespace {

ArmScratch& scratch(std::size_t cells) {
  thread_local ArmScratch s;
  s.ensure(cells);
  return s;
}

// Mixed patterns never ask for more than cap - 1 crossings of one color.
void add_paths(const Coloring& col, const ArmGeometry& g, const PathNeeds& needs, ArmScratch& s, ArmCounts& c) {
  const int per_color = needs.mono ? needs.cap : needs.cap - 1;
  c.paths_computed = true;
  c.white_paths = c.white_clusters > 0 || needs.mono ? disjoint_paths(col, g, s, true, per_color) : 0;
  c.black_paths = c.black_clusters > 0 || needs.mono ? disjoint_paths(col, g, s, false, per_color) : 0;
}

// Labels the clusters of `starts`, counts the crossing ones and, if asked,
// their disjoint crossings.
ArmCounts count_from(const Coloring& col, const ArmGeometry& g, const PathNeeds& needs,
                     const std::vector<std::int32_t>& starts) {
  const LatticeDomain& d = col.domain();
  ArmScratch& s = scratch(d.cell_count());
  s.sites.clear();
  s.offsets.clear();
  std::vector<std::uint8_t> crossing, white;
  for (std::int32_t start : starts) {
    if (s.label[start] >= 0) continue;
    const auto cid = static_cast<std::int32_t>(crossing.size());
    const bool w = col.interior_white(start);
    bool crosses = false;
    s.offsets.push_back(static_cast<std::int32_t>(s.sites.size()));
    s.label[start] = cid;
    s.sites.push_back(start);
    for (std::size_t head = s.offsets.back(); head < s.sites.size(); ++head) {
      const std::int32_t x = s.sites[head];
      crosses = crosses || (g.flags[x] & ArmGeometry::kNearO);
      for (int k = 0; k < 6; ++k) {
        const std::int32_t y = x + d.offset(k);
        if ((g.flags[y] & ArmGeometry::kInA) && s.label[y] < 0 && col.interior_white(y) == w) {
          s.label[y] = cid;
          s.sites.push_back(y);
        }
      }
    }
    crossing.push_back(crosses);
    white.push_back(w);
  }
  s.offsets.push_back(static_cast<std::int32_t>(s.sites.size()));

  ArmCounts c;
  for (std::size_t i = 0; i < crossing.size(); ++i)
    if (crossing[i]) ++(white[i] ? c.white_clusters : c.black_clusters);

  if (needs.cap > 1 && (needs.mono || (c.white_clusters > 0 && c.black_clusters > 0)))
    add_paths(col, g, needs, s, c);
  for (std::int32_t x : s.sites) s.label[x] = -1;
  return c;
}

// Follows the color interface leaving the center through the edge from ring
// site `right` to ring site `left`, with `left` kept on the left. Returns
// whether it reaches a triangle touching O before coming back to the center.
bool escapes(const Coloring& col, const ArmGeometry& g, std::int32_t left, int k) {
  const LatticeDomain& d = col.domain();
  const bool lc = col.interior_white(left);
  for (;;) {
    const std::int32_t x = left + d.offset((k + 1) % 6);
    if (x == g.center_site) return false;
    if (!(g.flags[x] & ArmGeometry::kInA)) return true;
    if (col.interior_white(x) == lc) {
      left = x;
      k = (k + 5) % 6;
    } else {
      k = (k + 1) % 6;
    }
  }
}

}  // namespace

ArmCounts count_arms(const Coloring& col, const ArmGeometry& g, const PathNeeds& needs) {
  if (g.center_site < 0 || needs.single_color) return count_from(col, g, needs, g.starts);
  // Around a single center site, each interface from the center that escapes
  // to O separates a white crossing cluster from a black one, and consecutive
  // escaping interfaces bound alternately white and black clusters.
  const LatticeDomain& d = col.domain();
  std::int32_t ring[6];
  bool color[6];
  for (int i = 0; i < 6; ++i) {
    ring[i] = g.center_site + d.offset(i);
    if (!(g.flags[ring[i]] & ArmGeometry::kInA)) return count_from(col, g, needs, g.starts);
    color[i] = col.interior_white(ring[i]);
  }
  int m = 0;
  for (int i = 0; i < 6; ++i) {
    const int j = (i + 1) % 6;
    if (color[i] == color[j]) continue;
    if (escapes(col, g, ring[j], (i + 5) % 6)) ++m;
  }
  ArmCounts c;
  if (m < 2) return c;
  c.white_clusters = c.black_clusters = m / 2;
  // Each crossing cluster carries a crossing, so m / 2 paths per color and m
  // in total are known without a flow search.
  if (needs.cap > m || needs.color_need > m / 2) {
    add_paths(col, g, needs, scratch(d.cell_count()), c);
  }
  return c;
}

bool arm_event(const Coloring& coloring, const AnnulusSpec& annulus, const ArmPattern& pattern) {
  const ArmGeometry g = prepare_annulus(coloring.domain(), annulus);
  return pattern_holds(count_arms(coloring, g, path_needs({pattern})), pattern);
}

ArmEstimate make_estimate(std::size_t hits, std::size_t trials, const ArmPattern& pattern) {
  ArmEstimate e;
  e.hits = hits;
  e.trials = trials;
  e.pattern = pattern;
  e.probability = trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
  e.stderr_ = trials ? std::sqrt(e.probability * (1 - e.probability) / static_cast<double>(trials)) : 0.0;
  return e;
}

std::vector<ArmEstimate> estimate_alpha(const DomainPtr& domain, const AnnulusSpec& annulus,
                                        const std::vector<ArmPattern>& patterns, std::size_t trials,
                                        std::uint64_t master_seed, int threads) {
  if (trials < 1) throw Error(ErrorKind::ConfigInvalid, "trials must be at least 1");
  const ArmGeometry g = prepare_annulus(*domain, annulus);
  const PathNeeds needs = path_needs(patterns);
  std::vector<std::uint32_t> hit_mask(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const Coloring c = sample_coloring(domain, RngStream{master_seed, t});
    const ArmCounts counts = count_arms(c, g, needs);
    std::uint32_t m = 0;
    for (std::size_t p = 0; p < patterns.size(); ++p)
      if (pattern_holds(counts, patterns[p])) m |= 1u << p;
    hit_mask[t] = m;
  });
  std::vector<ArmEstimate> out;
  for (std::size_t p = 0; p < patterns.size(); ++p) {
    std::size_t hits = 0;
    for (std::uint32_t m : hit_mask) hits += m >> p & 1;
    out.push_back(make_estimate(hits, trials, patterns[p]));
  }
  return out;
}

}  // namespace percnat
