#include "percnat/metrics.hpp"

#include "percnat/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace percnat {

Polyline Polyline::from(const ParametrizedCurve& c) {
  Polyline p;
  p.points = c.curve.vertices();
  std::vector<double> t(p.points.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = c.xi * static_cast<double>(i);
  p.times = std::move(t);
  return p;
}

double Polyline::duration() const {
  if (!times) throw Error(ErrorKind::MissingTimes, "polyline carries no times");
  return times->back();
}

Point Polyline::at(double t) const {
  if (!times) throw Error(ErrorKind::MissingTimes, "polyline carries no times");
  const auto& ts = *times;
  if (t <= ts.front()) return points.front();
  if (t >= ts.back()) return points.back();
  const auto i = static_cast<std::size_t>(std::upper_bound(ts.begin(), ts.end(), t) - ts.begin()) - 1;
  const double f = (t - ts[i]) / (ts[i + 1] - ts[i]);
  return points[i] + f * (points[i + 1] - points[i]);
}

namespace {

void validate(const Polyline& p) {
  if (p.points.size() < 2) throw Error(ErrorKind::ConfigInvalid, "a polyline needs at least two points");
  if (p.times) {
    const auto& t = *p.times;
    if (t.size() != p.points.size() || t.front() != 0)
      throw Error(ErrorKind::ConfigInvalid, "times must align with points and start at 0");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1])) throw Error(ErrorKind::ConfigInvalid, "times must increase strictly");
  }
}

// Parameters in [0,1] along segment [a,b] within distance eps of c, or an
// empty interval (lo > hi).
std::pair<double, double> free_interval(const Point& a, const Point& b, const Point& c, double eps) {
  const Point d = b - a;
  const double dd = d.squaredNorm();
  if (dd == 0) return (a - c).norm() <= eps ? std::pair{0.0, 1.0} : std::pair{1.0, 0.0};
  const Point f = a - c;
  const double bq = f.dot(d), cq = f.squaredNorm() - eps * eps;
  const double disc = bq * bq - dd * cq;
  if (disc < 0) return {1.0, 0.0};
  const double s = std::sqrt(disc);
  const double lo = std::max(0.0, (-bq - s) / dd), hi = std::min(1.0, (-bq + s) / dd);
  return {lo, hi};
}

}  // namespace

bool frechet_at_most(const Polyline& P, const Polyline& Q, double eps) {
  const auto& p = P.points;
  const auto& q = Q.points;
  const std::size_t n = p.size() - 1, m = q.size() - 1;
  if ((p[0] - q[0]).norm() > eps || (p[n] - q[m]).norm() > eps) return false;
  // Reachable parts of the cell boundaries: lr[i][j] on the vertical line
  // through vertex i of p (parameter along segment j of q), bt[i][j] on the
  // horizontal line through vertex j of q (parameter along segment i of p).
  constexpr double kEmpty = 2.0;
  std::vector<double> lr_lo((n + 1) * m, kEmpty), lr_hi((n + 1) * m, -1), bt_lo(n * (m + 1), kEmpty),
      bt_hi(n * (m + 1), -1);
  auto L = [&](std::size_t i, std::size_t j) { return i * m + j; };
  auto B = [&](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
  // Left border of the diagram (i = 0) and bottom border (j = 0).
  for (std::size_t j = 0; j < m; ++j) {
    auto [lo, hi] = free_interval(q[j], q[j + 1], p[0], eps);
    if (lo > hi || (j > 0 && lr_hi[L(0, j - 1)] < 1.0) || (j == 0 && lo > 0)) break;
    lr_lo[L(0, j)] = lo;
    lr_hi[L(0, j)] = hi;
    if (hi < 1.0) break;
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto [lo, hi] = free_interval(p[i], p[i + 1], q[0], eps);
    if (lo > hi || (i > 0 && bt_hi[B(i - 1, 0)] < 1.0) || (i == 0 && lo > 0)) break;
    bt_lo[B(i, 0)] = lo;
    bt_hi[B(i, 0)] = hi;
    if (hi < 1.0) break;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      // Cell (i, j): entries are left border L(i,j) and bottom border B(i,j);
      // exits are right border L(i+1,j) and top border B(i,j+1).
      const bool left = lr_lo[L(i, j)] <= lr_hi[L(i, j)];
      const bool bottom = bt_lo[B(i, j)] <= bt_hi[B(i, j)];
      auto [rlo, rhi] = free_interval(q[j], q[j + 1], p[i + 1], eps);
      auto [tlo, thi] = free_interval(p[i], p[i + 1], q[j + 1], eps);
      if (rlo <= rhi) {
        if (bottom) {
          lr_lo[L(i + 1, j)] = rlo;
          lr_hi[L(i + 1, j)] = rhi;
        } else if (left) {
          lr_lo[L(i + 1, j)] = std::max(rlo, lr_lo[L(i, j)]);
          lr_hi[L(i + 1, j)] = rhi;
        }
      }
      if (tlo <= thi) {
        if (left) {
          bt_lo[B(i, j + 1)] = tlo;
          bt_hi[B(i, j + 1)] = thi;
        } else if (bottom) {
          bt_lo[B(i, j + 1)] = std::max(tlo, bt_lo[B(i, j)]);
          bt_hi[B(i, j + 1)] = thi;
        }
      }
    }
  const std::size_t lt = L(n, m - 1), bt = B(n - 1, m);
  return (lr_lo[lt] <= lr_hi[lt] && lr_hi[lt] >= 1.0) || (bt_lo[bt] <= bt_hi[bt] && bt_hi[bt] >= 1.0);
}

double du_distance(const Polyline& p, const Polyline& q) {
  validate(p);
  validate(q);
  double lo = std::max((p.points.front() - q.points.front()).norm(), (p.points.back() - q.points.back()).norm());
  double hi = discrete_frechet(p, q);
  Point mn = p.points[0], mx = p.points[0];
  for (const auto* s : {&p.points, &q.points})
    for (const Point& x : *s) {
      mn = mn.cwiseMin(x);
      mx = mx.cwiseMax(x);
    }
  const double tol = 1e-9 * std::max((mx - mn).norm(), std::numeric_limits<double>::min());
  if (frechet_at_most(p, q, lo)) return lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (frechet_at_most(p, q, mid) ? hi : lo) = mid;
  }
  return hi;
}

double discrete_frechet(const Polyline& P, const Polyline& Q) {
  const auto& p = P.points;
  const auto& q = Q.points;
  const std::size_t n = p.size(), m = q.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = (p[i] - q[j]).norm();
      double best;
      if (i == 0 && j == 0) best = d;
      else if (i == 0) best = std::max(cur[j - 1], d);
      else if (j == 0) best = std::max(prev[0], d);
      else best = std::max(std::min({prev[j], prev[j - 1], cur[j - 1]}), d);
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  return prev[m - 1];
}

double rho_distance(const Polyline& p, const Polyline& q) {
  validate(p);
  validate(q);
  const double t1 = p.duration(), t2 = q.duration();
  if (!(t1 > 0) || !(t2 > 0)) throw Error(ErrorKind::ConfigInvalid, "durations must be positive");
  std::vector<double> s;
  for (double t : *p.times) s.push_back(t / t1);
  for (double t : *q.times) s.push_back(t / t2);
  std::sort(s.begin(), s.end());
  double sup = 0;
  for (double x : s) sup = std::max(sup, (p.at(x * t1) - q.at(x * t2)).norm());
  return std::abs(t2 - t1) + sup;
}

}  // namespace percnat
