// Runs every pre-registered experiment at its shipped configuration and prints
// one PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include "percnat/config.hpp"
#include "percnat/error.hpp"
#include "percnat/experiments.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace percnat;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string out_root() {
  const char* env = std::getenv("PERCNAT_ACCEPTANCE_OUT");
  return env ? env : "acceptance_out";
}

int worker_count() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

std::map<std::string, json> summaries;

const json& summary(const std::string& experiment) {
  auto it = summaries.find(experiment);
  if (it != summaries.end()) return it->second;
  ExperimentConfig c = load_config(std::string(PERCNAT_SOURCE_DIR) + "/configs/" + experiment + ".toml");
  c.out = out_root();
  c.threads = worker_count();
  std::cerr << "running " << experiment << " with " << c.threads << " worker(s)\n";
  const ExperimentReport r = run_experiment(c);
  return summaries[experiment] = json::parse(r.summary_json);
}

const json& find_named(const json& list, const std::string& name) {
  for (const json& e : list)
    if (e.at("name") == name) return e;
  throw Error(ErrorKind::FormatError, "no entry named '" + name + "'");
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fit_detail(const json& f) {
  std::ostringstream os;
  os << f.at("name").get<std::string>() << "=";
  if (f.contains("slope"))
    os << f.at("slope").get<double>() << " (target " << f.at("target").get<double>() << " +- "
       << f.at("tolerance").get<double>() << ")";
  else
    os << "error: " << f.value("error", std::string("missing"));
  return os.str();
}

Verdict fits(const std::string& experiment, const std::vector<std::string>& names) {
  const json& s = summary(experiment);
  Verdict v{true, ""};
  for (const std::string& n : names) {
    const json& f = find_named(s.at("fits"), n);
    v.pass = v.pass && f.at("pass").get<bool>();
    v.detail += (v.detail.empty() ? "" : "; ") + fit_detail(f);
  }
  return v;
}

Verdict checks(const std::string& experiment, const std::vector<std::string>& names) {
  const json& s = summary(experiment);
  Verdict v{true, ""};
  for (const std::string& n : names) {
    const json& c = find_named(s.at("checks"), n);
    v.pass = v.pass && c.at("pass").get<bool>();
    v.detail += (v.detail.empty() ? "" : "; ") + n + " " + c.at("detail").dump();
  }
  return v;
}

// Same seed, different worker counts, compared byte for byte. Trial counts are
// reduced so the check stays cheap; the scheduling paths are the same.
Verdict determinism() {
  const std::vector<std::pair<std::string, std::size_t>> runs{
      {"arm-scaling", 400}, {"interface-length", 40}, {"pivotal-count", 40}, {"box-count", 8},
      {"face-bound", 400},  {"equivalence", 200},     {"cardy-sanity", 2000}, {"metric-selftest", 50}};
  Verdict v{true, ""};
  for (const auto& [name, trials] : runs) {
    std::string csv[2];
    const int threads[2] = {1, 3};
    for (int i = 0; i < 2; ++i) {
      ExperimentConfig c = default_config(name);
      c.trials = trials;
      if (name == "box-count") c.eta = {1.0 / 256};
      if (name == "equivalence") c.secondary_trials = 50;
      c.threads = threads[i];
      c.out = (fs::path(out_root()) / ("determinism_t" + std::to_string(threads[i]))).string();
      fs::remove_all(fs::path(c.out) / name);
      RunOptions o;
      csv[i] = run_experiment(c, o).csv;
    }
    const bool same = !csv[0].empty() && csv[0] == csv[1];
    v.pass = v.pass && same;
    v.detail += (v.detail.empty() ? "" : "; ") + name + (same ? " identical" : " DIFFERS");
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"definition-equivalence", [] { return checks("equivalence", {"definitions_agree"}); }},
      {"pivotal-characterization", [] { return checks("equivalence", {"pivotal_equals_flip_oracle"}); }},
      {"pivotal-implies-four-arm", [] { return checks("equivalence", {"pivotal_implies_four_arm"}); }},
      {"arm-exponents", [] { return fits("arm-scaling", {"k2", "k3", "k4", "k5"}); }},
      {"interface-length", [] { return fits("interface-length", {"slope"}); }},
      {"pivotal-count", [] { return fits("pivotal-count", {"slope"}); }},
      {"box-count", [] { return fits("box-count", {"slope"}); }},
      {"beta-scaling", [] { return checks("beta-consistency", {"beta_ratio"}); }},
      {"content-stabilization", [] { return checks("beta-consistency", {"product_agreement", "direct_match"}); }},
      {"face-bound", [] { return checks("face-bound", {"face_bound"}); }},
      {"minkowski-calibration",
       [] { return checks("minkowski-calibration", {"analytic_profiles", "scaling_covariance"}); }},
      {"metric-selftests", [] { return checks("metric-selftest", {"metric_selftest"}); }},
      {"cardy-sanity", [] { return checks("cardy-sanity", {"cardy"}); }},
      {"determinism", determinism},
  };

  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %s: %s\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
