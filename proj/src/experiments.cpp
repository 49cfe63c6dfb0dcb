#include "percnat/experiments.hpp"

#include "percnat/arms.hpp"
#include "percnat/connectivity.hpp"
#include "percnat/content.hpp"
#include "percnat/error.hpp"
#include "percnat/faces.hpp"
#include "percnat/fit.hpp"
#include "percnat/interface.hpp"
#include "percnat/metrics.hpp"
#include "percnat/parallel.hpp"
#include "percnat/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

namespace percnat {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct Output {
  std::string csv;
  json fits = json::array();
  json checks = json::array();
  json extra = json::object();
  std::map<std::string, std::string> files;  // additional files in the run directory
};

struct Plan {
  std::size_t units = 0;
  std::function<json(std::size_t)> compute;
  std::function<void(const std::vector<json>&, Output&)> finalize;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t unit_seed(const ExperimentConfig& c, std::uint64_t unit) {
  return derive_seed(derive_seed(c.seed, salt_of(c.experiment.c_str())), unit);
}

JordanDomainSpec domain_spec(const std::string& name) {
  if (name.size() > 5 && name.ends_with(".json")) {
    std::ifstream in(name);
    if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read domain file " + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return JordanDomainSpec::from_json(ss.str());
  }
  return named_domain(name);
}

DomainPtr make_domain(const JordanDomainSpec& spec, double eta) {
  return std::make_shared<const LatticeDomain>(build_domain_approx(spec, eta));
}

struct MeanSe {
  double mean = 0, se = 0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  if (v.empty()) return r;
  const double n = static_cast<double>(v.size());
  r.mean = pairwise_sum(v) / n;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - r.mean) * (v[i] - r.mean);
  r.se = v.size() > 1 ? std::sqrt(pairwise_sum(sq) / (n - 1) / n) : 0.0;
  return r;
}

const std::vector<double>& need_eta(const ExperimentConfig& c, std::size_t at_least) {
  if (c.eta.size() < at_least)
    throw Error(ErrorKind::ConfigInvalid, c.experiment + " needs at least " + std::to_string(at_least) + " eta values");
  return c.eta;
}

json fit_entry(const std::string& name, const std::vector<ScalingRow>& rows, double target, double tol) {
  json f;
  f["name"] = name;
  f["target"] = target;
  f["tolerance"] = tol;
  try {
    const PowerFit p = fit_exponent(rows);
    f["slope"] = p.slope;
    f["slope_stderr"] = p.slope_stderr;
    f["intercept"] = p.intercept;
    f["ci95"] = {p.slope - 1.96 * p.slope_stderr, p.slope + 1.96 * p.slope_stderr};
    f["pass"] = std::abs(p.slope - target) <= tol;
  } catch (const Error& e) {
    f["error"] = e.what();
    f["pass"] = false;
  }
  return f;
}

json check_entry(const std::string& name, bool pass, json detail) {
  json c;
  c["name"] = name;
  c["pass"] = pass;
  c["detail"] = std::move(detail);
  return c;
}

// Trial indices [begin, end) of unit u when trials are split into batches.
std::pair<std::size_t, std::size_t> batch_range(std::size_t u, std::size_t batch, std::size_t trials) {
  return {u * batch, std::min(trials, (u + 1) * batch)};
}

std::size_t batch_count(std::size_t trials, std::size_t batch) { return (trials + batch - 1) / batch; }

// eta -> (k -> p_hat) from an arm-scaling rows.csv.
std::map<double, std::map<int, double>> read_alpha_csv(const std::string& path) {
  std::map<double, std::map<int, double>> out;
  if (path.empty()) return out;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("eta_or_r,k,pattern,trials,hits,p_hat,stderr", 0) != 0)
    throw Error(ErrorKind::FormatError, path + " is not an arm-scaling table");
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string f[7];
    for (auto& x : f) std::getline(ss, x, ',');
    out[std::stod(f[0])][std::stoi(f[1])] = std::stod(f[5]);
  }
  return out;
}

std::optional<double> lookup_alpha(const std::map<double, std::map<int, double>>& t, double eta, int k) {
  for (const auto& [e, m] : t)
    if (std::abs(e - eta) <= 1e-12 * eta) {
      auto it = m.find(k);
      if (it != m.end() && it->second > 0) return it->second;
    }
  return std::nullopt;
}

// ---------------------------------------------------------------- arm-scaling

Plan arm_scaling(const ExperimentConfig& c) {
  const auto& etas = need_eta(c, 1);
  std::vector<ArmPattern> patterns;
  for (int k : c.k) patterns.push_back(ArmPattern::standard(k));
  Plan p;
  p.units = etas.size();
  p.compute = [&c, etas, patterns](std::size_t u) {
    const double eta = etas[u];
    const auto domain = make_domain(box_domain(Box{Point(0, 0), 1 + 4 * eta}), eta);
    const auto est = estimate_alpha(domain, AnnulusSpec::site_to_box(Point(0, 0), 1.0), patterns, c.trials,
                                    unit_seed(c, u), c.threads);
    json d;
    d["eta"] = eta;
    d["trials"] = c.trials;
    json hits = json::array();
    for (const auto& e : est) hits.push_back(e.hits);
    d["hits"] = hits;
    return d;
  };
  p.finalize = [&c, patterns](const std::vector<json>& units, Output& out) {
    std::ostringstream csv;
    csv << "eta_or_r,k,pattern,trials,hits,p_hat,stderr\n";
    std::vector<std::vector<ScalingRow>> series(patterns.size());
    json alpha = json::object();
    for (const json& d : units) {
      const double eta = d["eta"];
      const std::size_t trials = d["trials"];
      json a = json::object();
      for (std::size_t i = 0; i < patterns.size(); ++i) {
        const ArmEstimate e = make_estimate(d["hits"][i].get<std::size_t>(), trials, patterns[i]);
        csv << num(eta) << ',' << patterns[i].k << ',' << patterns[i].name() << ',' << trials << ',' << e.hits << ','
            << num(e.probability) << ',' << num(e.stderr_) << '\n';
        series[i].push_back({eta, e.probability, e.stderr_});
        a["alpha" + std::to_string(patterns[i].k)] = e.probability;
      }
      alpha[num(eta)] = a;
    }
    out.csv = csv.str();
    static const std::map<int, double> tol{{2, 0.05}, {3, 0.08}, {4, 0.12}, {5, 0.2}};
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      const int k = patterns[i].k;
      const std::string key = "k" + std::to_string(k);
      const double target = c.target_or(key, (k * k - 1) / 12.0);
      out.fits.push_back(fit_entry(key, series[i], target, c.tolerance_or(key, tol.count(k) ? tol.at(k) : 0.1)));
    }
    out.extra["alpha"] = alpha;
  };
  return p;
}

// ------------------------------------------- interface-length, pivotal-count

Plan per_eta_mean(const ExperimentConfig& c, bool pivotal) {
  const auto& etas = need_eta(c, 1);
  Plan p;
  p.units = etas.size();
  p.compute = [&c, etas, pivotal](std::size_t u) {
    const double eta = etas[u];
    const auto domain = make_domain(domain_spec(c.domain), eta);
    const MarkedQuad m = resolve_marked(*domain);
    std::vector<double> v(c.trials);
    parallel_for(c.trials, c.threads, [&](std::size_t t) {
      const Coloring col = sample_coloring(domain, RngStream{unit_seed(c, u), t});
      v[t] = pivotal ? static_cast<double>(pivotal_sites(col, m, c.e_definition).size())
                     : static_cast<double>(interface_length(col, BoundaryCondition{m.a, m.c}));
    });
    const MeanSe s = mean_se(v);
    json d;
    d["eta"] = eta;
    d["trials"] = c.trials;
    d["mean"] = s.mean;
    d["stderr"] = s.se;
    return d;
  };
  p.finalize = [&c, pivotal](const std::vector<json>& units, Output& out) {
    const auto alpha = read_alpha_csv(c.alpha_csv);
    const int k = pivotal ? 4 : 2;
    const double cst = pivotal ? c.c_p : c.c_l;
    std::ostringstream csv;
    csv << "eta,trials," << (pivotal ? "mean_pivotals" : "mean_edges") << ",stderr,alpha_hat,mean_mass\n";
    std::vector<ScalingRow> rows;
    for (const json& d : units) {
      const double eta = d["eta"], mean = d["mean"], se = d["stderr"];
      const auto a = lookup_alpha(alpha, eta, k);
      // Expected total mass of the normalized measure, when the normalizer is known.
      const std::string mass = a ? num(cst * eta * eta * mean / *a) : "";
      csv << num(eta) << ',' << d["trials"].get<std::size_t>() << ',' << num(mean) << ',' << num(se) << ','
          << (a ? num(*a) : "") << ',' << mass << '\n';
      rows.push_back({eta, mean, se});
    }
    out.csv = csv.str();
    const double target = c.target_or("slope", pivotal ? -0.75 : -1.75);
    out.fits.push_back(fit_entry("slope", rows, target, c.tolerance_or("slope", 0.10)));
  };
  return p;
}

// ------------------------------------------------------------------ box-count

Plan box_count_plan(const ExperimentConfig& c) {
  const double eta = need_eta(c, 1)[0];
  if (c.epsilon.size() < 3) throw Error(ErrorKind::ConfigInvalid, "box-count needs at least three epsilon values");
  auto domain = std::make_shared<DomainPtr>();
  Plan p;
  p.units = batch_count(c.trials, c.batch);
  p.compute = [&c, eta, domain](std::size_t u) {
    if (!*domain) *domain = make_domain(domain_spec(c.domain), eta);
    const DomainPtr& dom = *domain;
    const MarkedQuad m = resolve_marked(*dom);
    const Box region{Point(0, 0), c.box_radius};
    const auto [b, e] = batch_range(u, c.batch, c.trials);
    std::vector<std::vector<std::size_t>> y(e - b);
    parallel_for(e - b, c.threads, [&](std::size_t i) {
      const Coloring col = sample_coloring(dom, RngStream{unit_seed(c, 0), b + i});
      const Polygon v = trace_interface(col, BoundaryCondition{m.a, m.c}).vertices();
      for (double eps : c.epsilon) y[i].push_back(box_count(v, region, eps, dom->spec().vertices).count);
    });
    json d;
    d["Y"] = y;
    return d;
  };
  p.finalize = [&c, eta](const std::vector<json>& units, Output& out) {
    std::vector<std::vector<double>> per_eps(c.epsilon.size());
    for (const json& d : units)
      for (const auto& trial : d["Y"])
        for (std::size_t j = 0; j < per_eps.size(); ++j) per_eps[j].push_back(trial[j].get<double>());
    std::ostringstream csv;
    csv << "epsilon,eta,trials,mean_Y,stderr\n";
    std::vector<ScalingRow> rows;
    for (std::size_t j = 0; j < per_eps.size(); ++j) {
      const MeanSe s = mean_se(per_eps[j]);
      csv << num(c.epsilon[j]) << ',' << num(eta) << ',' << per_eps[j].size() << ',' << num(s.mean) << ','
          << num(s.se) << '\n';
      rows.push_back({c.epsilon[j], s.mean, s.se});
    }
    out.csv = csv.str();
    out.fits.push_back(fit_entry("slope", rows, c.target_or("slope", -1.75), c.tolerance_or("slope", 0.15)));
  };
  return p;
}

// ----------------------------------------------------------- beta-consistency

// Direct 7/4-content of a curve piece: median of m_r over the dyadic radii in
// [4 eta, extent / 8].
double direct_content(const Shape& piece, double eta) {
  if (piece.empty()) return 0.0;
  const double lo = 4 * eta, hi = std::max(lo, piece.extent() / 8);
  const std::vector<double> grid = geometric_grid(lo, hi);
  return minkowski_estimate(piece, 1.75, grid, lo, hi).plateau;
}

Plan beta_plan(const ExperimentConfig& c) {
  const double fine = need_eta(c, 1)[0];
  if (c.epsilon.size() != 2 || c.epsilon[1] * 2 != c.epsilon[0])
    throw Error(ErrorKind::ConfigInvalid, "beta-consistency needs epsilon = [e, e/2]");
  const std::size_t ne = c.epsilon.size();
  auto domain = std::make_shared<DomainPtr>();
  Plan p;
  p.units = ne + batch_count(c.content_trials, c.batch);
  p.compute = [&c, fine, ne, domain](std::size_t u) {
    json d;
    if (u < ne) {
      const double eps = c.epsilon[u];
      const BetaEstimate b = beta_estimate(eps, eps / c.eta_ratio, c.trials, unit_seed(c, u), c.threads);
      d["epsilon"] = eps;
      d["eta"] = b.eta;
      d["trials"] = b.trials;
      d["values"] = b.values;
      return d;
    }
    if (!*domain) *domain = make_domain(box_domain(Box{Point(0, 0), 1.0}), fine);
    const DomainPtr& dom = *domain;
    const MarkedQuad m = resolve_marked(*dom);
    const Box region{Point(0, 0), 0.5};
    const auto [b, e] = batch_range(u - ne, c.batch, c.content_trials);
    std::vector<std::vector<std::size_t>> y(e - b);
    std::vector<double> content(e - b);
    parallel_for(e - b, c.threads, [&](std::size_t i) {
      const Coloring col = sample_coloring(dom, RngStream{unit_seed(c, ne), b + i});
      const Polygon v = trace_interface(col, BoundaryCondition{m.a, m.c}).vertices();
      for (double eps : c.epsilon) y[i].push_back(box_count(v, region, eps, dom->spec().vertices).count);
      content[i] = direct_content(Shape::clipped(v, region), fine);
    });
    d["Y"] = y;
    d["content"] = content;
    return d;
  };
  p.finalize = [&c, fine, ne](const std::vector<json>& units, Output& out) {
    std::vector<MeanSe> beta(ne), ey(ne);
    std::vector<std::size_t> hits(ne);
    std::vector<std::vector<double>> ys(ne);
    std::vector<double> content;
    for (std::size_t i = 0; i < ne; ++i) {
      const auto v = units[i]["values"].get<std::vector<double>>();
      beta[i] = mean_se(v);
      hits[i] = v.size();
    }
    for (std::size_t u = ne; u < units.size(); ++u) {
      for (const auto& t : units[u]["Y"])
        for (std::size_t j = 0; j < ne; ++j) ys[j].push_back(t[j].get<double>());
      for (double x : units[u]["content"].get<std::vector<double>>()) content.push_back(x);
    }
    for (std::size_t j = 0; j < ne; ++j) ey[j] = mean_se(ys[j]);
    const MeanSe direct = mean_se(content);
    std::vector<MeanSe> prod(ne);
    for (std::size_t j = 0; j < ne; ++j) {
      prod[j].mean = beta[j].mean * ey[j].mean;
      prod[j].se = prod[j].mean * std::hypot(beta[j].se / beta[j].mean, ey[j].se / ey[j].mean);
    }
    std::ostringstream csv;
    csv << "quantity,epsilon,eta,trials,hits,estimate,stderr\n";
    for (std::size_t j = 0; j < ne; ++j) {
      const double eps = c.epsilon[j];
      csv << "beta," << num(eps) << ',' << num(eps / c.eta_ratio) << ',' << units[j]["trials"].get<std::size_t>()
          << ',' << hits[j] << ',' << num(beta[j].mean) << ',' << num(beta[j].se) << '\n';
      csv << "mean_Y," << num(eps) << ',' << num(fine) << ',' << ys[j].size() << ",," << num(ey[j].mean) << ','
          << num(ey[j].se) << '\n';
      csv << "beta_times_mean_Y," << num(eps) << ",,,," << num(prod[j].mean) << ',' << num(prod[j].se) << '\n';
    }
    csv << "direct_content,," << num(fine) << ',' << content.size() << ",," << num(direct.mean) << ','
        << num(direct.se) << '\n';
    out.csv = csv.str();

    const double ratio = beta[1].mean / beta[0].mean;
    const double ratio_se = ratio * std::hypot(beta[0].se / beta[0].mean, beta[1].se / beta[1].mean);
    const double target = c.target_or("beta_ratio", std::pow(2.0, -1.75));
    const double k = c.tolerance_or("beta_ratio_stderrs", 3.0);
    out.checks.push_back(check_entry("beta_ratio", std::abs(ratio - target) <= k * ratio_se,
                                     {{"ratio", ratio}, {"stderr", ratio_se}, {"target", target}, {"stderrs", k}}));
    const double rel = c.tolerance_or("product_agreement", 0.20);
    const double gap = std::abs(prod[0].mean - prod[1].mean);
    const double allowed = rel * 0.5 * (prod[0].mean + prod[1].mean) + 3 * std::hypot(prod[0].se, prod[1].se);
    out.checks.push_back(check_entry("product_agreement", gap <= allowed,
                                     {{"product", {prod[0].mean, prod[1].mean}},
                                      {"stderr", {prod[0].se, prod[1].se}},
                                      {"gap", gap},
                                      {"allowed", allowed}}));
    const double rel2 = c.tolerance_or("direct_match", 0.25);
    bool ok = direct.mean > 0;
    json dev = json::array();
    for (std::size_t j = 0; j < ne; ++j) {
      const double r = std::abs(prod[j].mean - direct.mean) / direct.mean;
      dev.push_back(r);
      ok = ok && r <= rel2;
    }
    out.checks.push_back(check_entry("direct_match", ok,
                                     {{"direct_content", direct.mean}, {"direct_stderr", direct.se},
                                      {"relative_deviation", dev}, {"tolerance", rel2}}));
  };
  return p;
}

// ----------------------------------------------------------------- face-bound

Plan face_plan(const ExperimentConfig& c) {
  const auto& etas = need_eta(c, 1);
  Plan p;
  p.units = etas.size();
  p.compute = [&c, etas](std::size_t u) {
    const double eta = etas[u];
    const auto dom = make_domain(domain_spec(c.domain), eta);
    const MarkedQuad m = resolve_marked(*dom);
    const Box b{Point(0, 0), c.box_radius}, ubox{Point(0, 0), c.u_radius};
    const Polygon upoly = ubox.polygon();
    const ArmGeometry g = prepare_annulus(*dom, AnnulusSpec::boxes(b, ubox));
    const ArmPattern three = ArmPattern::not_all_same(3);
    const PathNeeds needs = path_needs({three});
    std::string flags(3 * c.trials, '0');
    parallel_for(c.trials, c.threads, [&](std::size_t t) {
      const Coloring col = sample_coloring(dom, RngStream{unit_seed(c, u), t});
      const DiscreteCurve curve = trace_interface(col, BoundaryCondition{m.a, m.c});
      const InducedFace f = induced_face(*dom, curve, b);
      flags[3 * t] = f.occurred ? '1' : '0';
      flags[3 * t + 1] = event_G(*dom, f, upoly) ? '1' : '0';
      flags[3 * t + 2] = pattern_holds(count_arms(col, g, needs), three) ? '1' : '0';
    });
    json d;
    d["eta"] = eta;
    d["trials"] = c.trials;
    d["flags"] = flags;
    return d;
  };
  p.finalize = [&c](const std::vector<json>& units, Output& out) {
    std::ostringstream csv, trials;
    csv << "eta,trials,A,A_not_G,three_arm,violations,p_A_not_G,stderr_A_not_G,p_three_arm,stderr_three_arm\n";
    trials << "eta,trial,A_indicator,G_indicator,threearm_indicator\n";
    bool pass = true;
    json detail = json::array();
    for (const json& d : units) {
      const double eta = d["eta"];
      const std::string flags = d["flags"];
      const std::size_t n = flags.size() / 3;
      std::size_t a = 0, anotg = 0, three = 0, viol = 0;
      for (std::size_t t = 0; t < n; ++t) {
        const bool A = flags[3 * t] == '1', G = flags[3 * t + 1] == '1', T = flags[3 * t + 2] == '1';
        a += A;
        anotg += A && !G;
        three += T;
        viol += A && !T && !G;
        trials << num(eta) << ',' << t << ',' << A << ',' << G << ',' << T << '\n';
      }
      const double nn = static_cast<double>(n);
      const double p1 = anotg / nn, p2 = three / nn;
      const double s1 = std::sqrt(p1 * (1 - p1) / nn), s2 = std::sqrt(p2 * (1 - p2) / nn);
      csv << num(eta) << ',' << n << ',' << a << ',' << anotg << ',' << three << ',' << viol << ',' << num(p1) << ','
          << num(s1) << ',' << num(p2) << ',' << num(s2) << '\n';
      const bool ok = p1 <= p2 + 3 * std::hypot(s1, s2) && viol == 0;
      pass = pass && ok;
      detail.push_back({{"eta", eta}, {"p_A_not_G", p1}, {"p_three_arm", p2}, {"violations", viol}, {"pass", ok}});
    }
    out.csv = csv.str();
    out.files["trials.csv"] = trials.str();
    out.checks.push_back(check_entry("face_bound", pass, detail));
    (void)c;
  };
  return p;
}

// ---------------------------------------------------------------- equivalence

// L-infinity distance from site idx to the nearest boundary site.
double boundary_clearance(const LatticeDomain& d, std::int32_t idx) {
  const Point p = d.position(idx);
  double best = std::numeric_limits<double>::infinity();
  for (std::int32_t s : d.boundary_cycle()) best = std::min(best, (d.position(s) - p).cwiseAbs().maxCoeff());
  return best;
}

Plan equivalence_plan(const ExperimentConfig& c) {
  const double eta = need_eta(c, 1)[0];
  Plan p;
  p.units = 2;
  p.compute = [&c, eta](std::size_t u) {
    json d;
    if (u == 0) {
      const auto dom = make_domain(domain_spec(c.domain), eta);
      const MarkedQuad m = resolve_marked(*dom);
      std::vector<std::uint8_t> bad(c.trials, 0);
      parallel_for(c.trials, c.threads, [&](std::size_t t) {
        const Coloring col = sample_coloring(dom, RngStream{unit_seed(c, 0), t});
        const bool e1 = four_point_event(col, m, 1);
        bad[t] = e1 != four_point_event(col, m, 2) || e1 != four_point_event(col, m, 3);
      });
      std::size_t n = 0;
      for (auto b : bad) n += b;
      d["eta"] = eta;
      d["trials"] = c.trials;
      d["disagreements"] = n;
      return d;
    }
    const double e2 = c.secondary_eta;
    const auto dom = make_domain(domain_spec(c.domain), e2);
    const MarkedQuad m = resolve_marked(*dom);
    const ArmPattern alt = ArmPattern::alternating4();
    std::vector<std::size_t> mismatch(c.secondary_trials), asym(c.secondary_trials), viol(c.secondary_trials),
        checked(c.secondary_trials), pivots(c.secondary_trials);
    parallel_for(c.secondary_trials, c.threads, [&](std::size_t t) {
      const Coloring col = sample_coloring(dom, RngStream{unit_seed(c, 1), t});
      const PivotalSet ps = pivotal_sites(col, m, 1);
      pivots[t] = ps.size();
      mismatch[t] = ps != pivotal_sites_by_flipping(col, m);
      asym[t] = ps != pivotal_sites(col, m, 1, true);
      for (const SiteCoord& s : ps) {
        const std::int32_t idx = dom->index(s);
        // The largest box around the site whose closed interior holds inner
        // sites only; it separates the site from every boundary arc.
        const double r = boundary_clearance(*dom, idx) - e2 / 4;
        if (r < e2) continue;
        ++checked[t];
        if (!arm_event(col, AnnulusSpec::site_to_box(dom->position(idx), r), alt)) ++viol[t];
      }
    });
    auto total = [](const std::vector<std::size_t>& v) {
      std::size_t s = 0;
      for (auto x : v) s += x;
      return s;
    };
    d["eta"] = e2;
    d["trials"] = c.secondary_trials;
    d["pivotal_sites"] = total(pivots);
    d["flip_mismatches"] = total(mismatch);
    d["role_asymmetries"] = total(asym);
    d["four_arm_checked"] = total(checked);
    d["four_arm_violations"] = total(viol);
    return d;
  };
  p.finalize = [](const std::vector<json>& units, Output& out) {
    const json& a = units[0];
    const json& b = units[1];
    std::ostringstream csv;
    csv << "check,eta,trials,cases,violations\n";
    auto row = [&](const char* name, const json& u, std::size_t cases, std::size_t v) {
      csv << name << ',' << num(u["eta"].get<double>()) << ',' << u["trials"].get<std::size_t>() << ',' << cases << ','
          << v << '\n';
    };
    const std::size_t bt = b["trials"];
    row("definitions_agree", a, a["trials"], a["disagreements"]);
    row("pivotal_equals_flip_oracle", b, bt, b["flip_mismatches"]);
    row("pivotal_role_symmetry", b, bt, b["role_asymmetries"]);
    row("pivotal_implies_four_arm", b, b["four_arm_checked"], b["four_arm_violations"]);
    out.csv = csv.str();
    out.checks.push_back(check_entry("definitions_agree", a["disagreements"] == 0, a));
    out.checks.push_back(check_entry("pivotal_equals_flip_oracle",
                                     b["flip_mismatches"] == 0 && b["role_asymmetries"] == 0, b));
    out.checks.push_back(check_entry("pivotal_implies_four_arm", b["four_arm_violations"] == 0,
                                     {{"checked", b["four_arm_checked"]}, {"violations", b["four_arm_violations"]}}));
  };
  return p;
}

// ------------------------------------------------------------ metric-selftest

Polyline random_polyline(RngCursor& rng, bool timed) {
  Polyline p;
  const int n = 2 + static_cast<int>(rng.next_u32() % 7);
  double t = 0;
  std::vector<double> times;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    p.points.emplace_back(x, y);
    times.push_back(t);
    t += 0.1 + rng.uniform();
  }
  if (timed) p.times = times;
  return p;
}

Plan metric_plan(const ExperimentConfig& c) {
  Plan p;
  p.units = 1;
  p.compute = [&c](std::size_t) {
    const std::size_t n = c.trials;
    std::vector<double> sym(n), tri(n), dominance(n);
    parallel_for(n, c.threads, [&](std::size_t t) {
      RngCursor rng(RngStream{unit_seed(c, 0), t});
      const Polyline a = random_polyline(rng, true), b = random_polyline(rng, true), e = random_polyline(rng, true);
      const double ab = du_distance(a, b), ba = du_distance(b, a), be = du_distance(b, e), ae = du_distance(a, e);
      sym[t] = std::abs(ab - ba);
      tri[t] = std::max(0.0, ae - ab - be);
      // d_U never exceeds the sup term of rho for the same pair.
      const double sup = rho_distance(a, b) - std::abs(b.duration() - a.duration());
      dominance[t] = std::max(0.0, ab - sup);
    });
    auto worst = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };

    // Fixed examples: (name, value, expected, tolerance).
    json fixed = json::array();
    auto add = [&](const char* name, double got, double want, double tol) {
      fixed.push_back({{"name", name}, {"value", got}, {"expected", want}, {"tolerance", tol}});
    };
    const Polyline seg{{Point(0, 0), Point(1, 0)}, std::vector<double>{0, 1}};
    Polyline zig{{Point(0, 0), Point(0.5, 0.5), Point(1, 0), Point(1.5, 1)}, std::vector<double>{0, 1, 2, 3}};
    Polyline zig_sub;
    for (std::size_t i = 0; i + 1 < zig.points.size(); ++i) {
      zig_sub.points.push_back(zig.points[i]);
      zig_sub.points.push_back(0.5 * (zig.points[i] + zig.points[i + 1]));
    }
    zig_sub.points.push_back(zig.points.back());
    const double tol = 1e-9 * 2;  // binary-search tolerance times the joint diameter bound
    add("du_identical", du_distance(zig, zig), 0, tol);
    add("du_subdivided", du_distance(zig, zig_sub), 0, tol);
    const double h = 0.3;
    add("du_parallel_offset", du_distance(seg, Polyline{{Point(0, h), Point(1, h)}, {}}), h, tol);
    add("rho_identical", rho_distance(zig, zig), 0, 0);
    add("rho_constant_durations", rho_distance(Polyline{{Point(1, 1), Point(1, 1)}, std::vector<double>{0, 1}},
                                               Polyline{{Point(1, 1), Point(1, 1)}, std::vector<double>{0, 2}}),
        1, 0);
    Polyline moved = zig;
    const Point v(0.25, -0.5);
    for (Point& q : moved.points) q += v;
    add("rho_translation", rho_distance(zig, moved), v.norm(), 1e-12);

    json d;
    d["cases"] = n;
    d["max_symmetry_error"] = worst(sym);
    d["max_triangle_excess"] = worst(tri);
    d["max_dominance_excess"] = worst(dominance);
    d["fixed"] = fixed;
    return d;
  };
  p.finalize = [&c](const std::vector<json>& units, Output& out) {
    const json& d = units[0];
    const double tol = c.tolerance_or("random", 1e-8);
    std::ostringstream csv;
    csv << "check,cases,value,expected,tolerance,pass\n";
    bool pass = true;
    auto row = [&](const std::string& name, std::size_t cases, double value, double expected, double t) {
      const bool ok = std::abs(value - expected) <= t;
      pass = pass && ok;
      csv << name << ',' << cases << ',' << num(value) << ',' << num(expected) << ',' << num(t) << ',' << ok << '\n';
    };
    const std::size_t n = d["cases"];
    row("du_symmetry", n, d["max_symmetry_error"], 0, tol);
    row("du_triangle", n, d["max_triangle_excess"], 0, tol);
    row("du_below_rho_sup", n, d["max_dominance_excess"], 0, tol);
    for (const auto& f : d["fixed"]) row(f["name"], 1, f["value"], f["expected"], f["tolerance"]);
    out.csv = csv.str();
    out.checks.push_back(check_entry("metric_selftest", pass, d));
  };
  return p;
}

// --------------------------------------------------------------- cardy-sanity

Plan cardy_plan(const ExperimentConfig& c) {
  const auto& etas = need_eta(c, 1);
  Plan p;
  p.units = etas.size();
  p.compute = [&c, etas](std::size_t u) {
    const double eta = etas[u];
    const JordanDomainSpec spec = named_domain("rhombus60");
    const auto dom = make_domain(spec, eta);
    QuadSpec q{spec.vertices, {spec.marked.at('a'), spec.marked.at('b'), spec.marked.at('c'), spec.marked.at('d')}};
    const PreparedQuad pq = prepare_quad(*dom, q);
    std::vector<std::uint8_t> hit(c.trials);
    parallel_for(c.trials, c.threads, [&](std::size_t t) {
      hit[t] = quad_crossing(sample_coloring(dom, RngStream{unit_seed(c, u), t}), pq);
    });
    std::size_t h = 0;
    for (auto x : hit) h += x;
    json d;
    d["eta"] = eta;
    d["trials"] = c.trials;
    d["hits"] = h;
    d["sites"] = pq.sites.size();
    return d;
  };
  p.finalize = [&c](const std::vector<json>& units, Output& out) {
    std::ostringstream csv;
    csv << "eta,trials,hits,p_hat,stderr\n";
    bool pass = true;
    json detail = json::array();
    const double target = c.target_or("p", 0.5);
    for (const json& d : units) {
      const double n = d["trials"].get<double>();
      const double ph = d["hits"].get<double>() / n;
      const double se = std::sqrt(ph * (1 - ph) / n);
      csv << num(d["eta"].get<double>()) << ',' << d["trials"].get<std::size_t>() << ',' << d["hits"].get<std::size_t>()
          << ',' << num(ph) << ',' << num(se) << '\n';
      const bool ok = std::abs(ph - target) <= 3 * se;
      pass = pass && ok;
      detail.push_back({{"eta", d["eta"]}, {"p_hat", ph}, {"stderr", se}, {"sites", d["sites"]}, {"pass", ok}});
    }
    out.csv = csv.str();
    out.checks.push_back(check_entry("cardy", pass, detail));
  };
  return p;
}

// ------------------------------------------------------ minkowski-calibration

Plan minkowski_plan(const ExperimentConfig& c) {
  Plan p;
  p.units = 1;
  p.compute = [](std::size_t) {
    const std::vector<double> grid = geometric_grid(1.0 / 256, 0.25);
    json rows = json::array();
    auto profile = [&](const char* name, const Shape& s, double d, auto analytic) {
      const ContentProfile prof = minkowski_estimate(s, d, grid);
      for (const auto& x : prof.samples) {
        const double want = analytic(x.r);
        rows.push_back({name, d, x.r, x.area, x.m, want, std::abs(x.m - want) / want});
      }
    };
    const Point seg[2] = {Point(0, 0), Point(1, 0)};
    const Point pt[1] = {Point(0.3, -0.2)};
    Shape square;
    square.filled.push_back(Box{Point(0.5, 0.5), 0.5}.polygon());
    profile("segment", Shape::polyline(seg), 1.0, [](double r) { return 2 + M_PI * r; });
    profile("square", square, 2.0, [](double r) { return 1 + 4 * r + M_PI * r * r; });
    profile("point", Shape::points(pt), 0.0, [](double) { return M_PI; });
    // Scaling covariance: doubling the shape and the radii multiplies m by 2^d.
    const Point seg2[2] = {Point(0, 0), Point(2, 0)};
    std::vector<double> grid2;
    for (double r : grid) grid2.push_back(2 * r);
    const ContentProfile a = minkowski_estimate(Shape::polyline(seg), 1.0, grid);
    const ContentProfile b = minkowski_estimate(Shape::polyline(seg2), 1.0, grid2);
    json json_scaling = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) json_scaling.push_back(b.samples[i].m / a.samples[i].m);
    json d;
    d["rows"] = rows;
    d["scaling"] = json_scaling;
    d["plateau_ratio"] = b.plateau / a.plateau;
    return d;
  };
  p.finalize = [&c](const std::vector<json>& units, Output& out) {
    const json& d = units[0];
    const double tol = c.tolerance_or("analytic", 0.01), stol = c.tolerance_or("scaling", 0.02);
    std::ostringstream csv;
    csv << "shape,d,r,area,m,analytic,rel_error\n";
    double worst = 0;
    for (const auto& r : d["rows"]) {
      csv << r[0].get<std::string>() << ',' << num(r[1]) << ',' << num(r[2]) << ',' << num(r[3]) << ',' << num(r[4])
          << ',' << num(r[5]) << ',' << num(r[6]) << '\n';
      worst = std::max(worst, r[6].get<double>());
    }
    double sworst = 0;
    for (const auto& s : d["scaling"]) sworst = std::max(sworst, std::abs(s.get<double>() / 2 - 1));
    sworst = std::max(sworst, std::abs(d["plateau_ratio"].get<double>() / 2 - 1));
    out.csv = csv.str();
    out.checks.push_back(check_entry("analytic_profiles", worst <= tol, {{"max_rel_error", worst}, {"tolerance", tol}}));
    out.checks.push_back(check_entry("scaling_covariance", sworst <= stol, {{"max_rel_error", sworst}, {"tolerance", stol}}));
  };
  return p;
}

Plan make_plan(const ExperimentConfig& c) {
  const std::string& e = c.experiment;
  if (e == "arm-scaling") return arm_scaling(c);
  if (e == "interface-length") return per_eta_mean(c, false);
  if (e == "pivotal-count") return per_eta_mean(c, true);
  if (e == "box-count") return box_count_plan(c);
  if (e == "beta-consistency") return beta_plan(c);
  if (e == "face-bound") return face_plan(c);
  if (e == "equivalence") return equivalence_plan(c);
  if (e == "metric-selftest") return metric_plan(c);
  if (e == "cardy-sanity") return cardy_plan(c);
  if (e == "minkowski-calibration") return minkowski_plan(c);
  throw Error(ErrorKind::UnknownExperiment, "unknown experiment '" + e + "'");
}

std::string fingerprint(const ExperimentConfig& c) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(salt_of(dump_config(c).c_str())));
  return buf;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorKind::FormatError, "cannot write " + path.string());
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& c, const RunOptions& opt) {
  c.validate();
  const auto t0 = std::chrono::steady_clock::now();
  Plan plan = make_plan(c);
  const fs::path dir = fs::path(c.out) / c.experiment;
  const fs::path ckpt = dir / "checkpoint.jsonl";
  const std::string fp = fingerprint(c);

  std::vector<json> units(plan.units);
  std::vector<bool> have(plan.units, false);
  if (opt.write_files) {
    fs::create_directories(dir);
    bool resume = false;
    if (std::ifstream in(ckpt); in) {
      std::string line;
      if (std::getline(in, line)) {
        const json head = json::parse(line, nullptr, false);
        resume = !head.is_discarded() && head.value("fingerprint", "") == fp;
      }
      while (resume && std::getline(in, line)) {
        const json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.contains("unit")) break;  // a torn final line
        const std::size_t u = rec["unit"];
        if (u < plan.units) {
          units[u] = rec["data"];
          have[u] = true;
        }
      }
    }
    if (!resume) {
      json head;
      head["fingerprint"] = fp;
      head["config"] = json::parse(dump_config(c));
      write_file(ckpt, head.dump() + "\n");
    }
  }

  std::size_t computed = 0;
  for (std::size_t u = 0; u < plan.units; ++u) {
    if (have[u]) continue;
    if (computed == opt.unit_limit) {
      ExperimentReport r;
      r.directory = dir.string();
      return r;
    }
    units[u] = plan.compute(u);
    have[u] = true;
    ++computed;
    if (opt.write_files) {
      std::ofstream out(ckpt, std::ios::app);
      out << json{{"unit", u}, {"data", units[u]}}.dump() << "\n";
    }
    if (opt.verbose) std::cerr << c.experiment << ": unit " << (u + 1) << "/" << plan.units << " done\n";
  }

  Output out;
  plan.finalize(units, out);
  bool pass = true;
  for (const auto& f : out.fits) pass = pass && f["pass"].get<bool>();
  for (const auto& ch : out.checks) pass = pass && ch["pass"].get<bool>();

  json summary;
  summary["experiment"] = c.experiment;
  summary["config"] = json::parse(dump_config(c));
  summary["threads"] = c.threads;
  summary["fits"] = out.fits;
  summary["checks"] = out.checks;
  for (auto it = out.extra.begin(); it != out.extra.end(); ++it) summary[it.key()] = it.value();
  summary["pass"] = pass;
  summary["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  ExperimentReport r;
  r.complete = true;
  r.pass = pass;
  r.csv = out.csv;
  r.summary_json = summary.dump(2) + "\n";
  r.directory = dir.string();
  if (opt.write_files) {
    write_file(dir / "rows.csv", r.csv);
    write_file(dir / "summary.json", r.summary_json);
    for (const auto& [name, text] : out.files) write_file(dir / name, text);
  }
  return r;
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.seed = 20240917;
  auto dyadic = [](int from, int to) {
    std::vector<double> v;
    for (int k = from; k <= to; ++k) v.push_back(std::ldexp(1.0, -k));
    return v;
  };
  if (experiment == "arm-scaling") {
    c.eta = dyadic(5, 9);
    c.trials = 100000;
    c.target = {{"k2", 0.25}, {"k3", 2.0 / 3}, {"k4", 1.25}, {"k5", 2.0}};
    c.tolerance = {{"k2", 0.05}, {"k3", 0.08}, {"k4", 0.12}, {"k5", 0.2}};
  } else if (experiment == "interface-length" || experiment == "pivotal-count") {
    c.eta = dyadic(5, 9);
    c.trials = 10000;
    c.target = {{"slope", experiment == "interface-length" ? -1.75 : -0.75}};
    c.tolerance = {{"slope", 0.10}};
  } else if (experiment == "box-count") {
    c.domain = "square";
    c.eta = {std::ldexp(1.0, -10)};
    c.epsilon = dyadic(2, 5);
    c.box_radius = 0.5;
    c.trials = 1000;
    c.target = {{"slope", -1.75}};
    c.tolerance = {{"slope", 0.15}};
  } else if (experiment == "beta-consistency") {
    c.domain = "square";
    c.eta = {std::ldexp(1.0, -10)};
    c.epsilon = dyadic(3, 4);
    c.trials = 4000;
    c.content_trials = 100;
    c.batch = 25;
  } else if (experiment == "face-bound") {
    c.domain = "square";
    c.eta = dyadic(5, 6);
    c.trials = 10000;
  } else if (experiment == "equivalence") {
    c.eta = {1.0 / 16};
    c.trials = 10000;
    c.secondary_eta = 1.0 / 8;
    c.secondary_trials = 1000;
  } else if (experiment == "metric-selftest") {
    c.trials = 1000;
  } else if (experiment == "cardy-sanity") {
    c.domain = "rhombus60";
    c.eta = {1.0 / 64};
    c.trials = 100000;
  } else if (experiment == "minkowski-calibration") {
    c.trials = 1;
  } else {
    throw Error(ErrorKind::UnknownExperiment, "unknown experiment '" + experiment + "'");
  }
  return c;
}

}  // namespace percnat
