#include "percnat/error.hpp"
#include "percnat/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Critical percolation scaling experiments"};
  std::string experiment, config_path;
  std::vector<double> eta;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out;
  bool quiet = false;

  app.add_option("experiment", experiment, "Experiment name")->required();
  app.add_option("--config", config_path, "TOML config; defaults to the pre-registered config");
  app.add_option("--eta", eta, "Mesh grid override (strictly decreasing)");
  app.add_option("--trials", trials, "Trials per scale");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--threads", threads, "Worker threads");
  app.add_option("--out", out, "Output directory");
  app.add_flag("--quiet", quiet, "No progress messages");
  CLI11_PARSE(app, argc, argv);

  try {
    percnat::ExperimentConfig c =
        config_path.empty() ? percnat::default_config(experiment) : percnat::load_config(config_path);
    if (c.experiment != experiment)
      throw percnat::Error(percnat::ErrorKind::ConfigInvalid,
                           "config is for '" + c.experiment + "', not '" + experiment + "'");
    if (!eta.empty()) c.eta = eta;
    if (app.count("--trials")) c.trials = trials;
    if (app.count("--seed")) c.seed = seed;
    if (app.count("--threads")) c.threads = threads;
    if (app.count("--out")) c.out = out;

    percnat::RunOptions opt;
    opt.verbose = !quiet;
    const percnat::ExperimentReport r = percnat::run_experiment(c, opt);
    std::cout << r.summary_json;
    std::cerr << experiment << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.directory << ")\n";
    return r.pass ? 0 : 1;
  } catch (const percnat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
