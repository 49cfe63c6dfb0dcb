#include "percnat/config.hpp"
#include "percnat/error.hpp"
#include "percnat/experiments.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace percnat;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("percnat_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("shipped configs equal the pre-registered defaults") {
  for (const std::string& name : experiment_names()) {
    CAPTURE(name);
    const ExperimentConfig file = load_config(std::string(PERCNAT_SOURCE_DIR) + "/configs/" + name + ".toml");
    CHECK(dump_config(file) == dump_config(default_config(name)));
    CHECK_NOTHROW(file.validate());
  }
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(R"(
experiment = "arm-scaling"
eta = [0.5, 0.25]
trials = 12
seed = 99
threads = 3
k = [2, 4]
[target]
k2 = 0.3
)");
  CHECK(c.experiment == "arm-scaling");
  CHECK(c.eta == std::vector<double>{0.5, 0.25});
  CHECK(c.trials == 12);
  CHECK(c.seed == 99);
  CHECK(c.threads == 3);
  CHECK(c.k == std::vector<int>{2, 4});
  CHECK(c.target_or("k2", 0) == 0.3);
  CHECK(c.target_or("k4", 1.25) == 1.25);
  // Threads and output location do not change results, so they stay out of
  // the fingerprinted dump.
  ExperimentConfig d = c;
  d.threads = 1;
  d.out = "elsewhere";
  CHECK(dump_config(c) == dump_config(d));

  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::FormatError;
  };
  CHECK(kind_of([] { parse_config("experiment = \"box-count\"\nbogus = 1\n"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config("experiment = \n"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config("experiment = \"nope\"\n").validate(); }) == ErrorKind::UnknownExperiment);
  CHECK(kind_of([] { parse_config("experiment = \"arm-scaling\"\neta = [0.1, 0.2]\n").validate(); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config("experiment = \"arm-scaling\"\ntrials = 0\n").validate(); }) ==
        ErrorKind::ConfigInvalid);
  ExperimentConfig bad;
  bad.experiment = "nope";
  CHECK(kind_of([&] { run_experiment(bad); }) == ErrorKind::UnknownExperiment);
}

TEST_CASE("cardy output is independent of thread count") {
  ExperimentConfig c = default_config("cardy-sanity");
  c.eta = {1.0 / 16};
  c.trials = 3000;
  c.out = scratch_dir("cardy").string();
  RunOptions opt;
  opt.write_files = false;
  c.threads = 1;
  const ExperimentReport a = run_experiment(c, opt);
  c.threads = 4;
  const ExperimentReport b = run_experiment(c, opt);
  CHECK(a.complete);
  CHECK(a.csv == b.csv);
  c.trials = 1;
  const ExperimentReport one = run_experiment(c, opt);
  const bool zero_or_one = one.csv.find(",1,0,0,") != std::string::npos || one.csv.find(",1,1,1,") != std::string::npos;
  CHECK(zero_or_one);
}

TEST_CASE("interrupted runs resume to the same output") {
  ExperimentConfig c = default_config("interface-length");
  c.eta = {0.25, 0.125, 0.0625};
  c.trials = 50;
  const fs::path straight = scratch_dir("straight"), resumed = scratch_dir("resumed");
  c.out = straight.string();
  const ExperimentReport full = run_experiment(c);
  REQUIRE(full.complete);
  CHECK(fs::exists(straight / "interface-length" / "rows.csv"));
  CHECK(fs::exists(straight / "interface-length" / "summary.json"));

  c.out = resumed.string();
  RunOptions stop;
  stop.unit_limit = 1;
  CHECK_FALSE(run_experiment(c, stop).complete);
  CHECK_FALSE(run_experiment(c, stop).complete);
  const ExperimentReport rest = run_experiment(c);
  REQUIRE(rest.complete);
  CHECK(slurp(resumed / "interface-length" / "rows.csv") == slurp(straight / "interface-length" / "rows.csv"));
  CHECK(rest.csv == full.csv);

  // A different config starts over instead of reusing the checkpoint.
  c.trials = 60;
  const ExperimentReport other = run_experiment(c);
  CHECK(other.csv != full.csv);
}

TEST_CASE("batched trials do not depend on batch size") {
  ExperimentConfig c = default_config("box-count");
  c.eta = {1.0 / 64};
  c.trials = 12;
  c.epsilon = {0.25, 0.125, 0.0625};
  c.batch = 5;
  RunOptions opt;
  opt.write_files = false;
  const ExperimentReport a = run_experiment(c, opt);
  c.batch = 7;
  const ExperimentReport b = run_experiment(c, opt);
  CHECK(a.csv == b.csv);
}

TEST_CASE("small runs of the exact-check experiments pass") {
  RunOptions opt;
  opt.write_files = false;
  ExperimentConfig e = default_config("equivalence");
  e.trials = 300;
  e.secondary_trials = 100;
  CHECK(run_experiment(e, opt).pass);
  ExperimentConfig m = default_config("metric-selftest");
  m.trials = 100;
  CHECK(run_experiment(m, opt).pass);
  CHECK(run_experiment(default_config("minkowski-calibration"), opt).pass);
  ExperimentConfig f = default_config("face-bound");
  f.trials = 200;
  const ExperimentReport fr = run_experiment(f, opt);
  CHECK(fr.csv.rfind("eta,trials,A,A_not_G,three_arm,violations", 0) == 0);
  CHECK(fr.summary_json.find("\"violations\": 0") != std::string::npos);
}
