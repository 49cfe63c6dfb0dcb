#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace percnat {

/// Everything one experiment run depends on. Keys not used by the named
/// experiment are ignored.
struct ExperimentConfig {
  std::string experiment;
  std::string domain = "disk";
  std::vector<double> eta;  // strictly decreasing
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";

  std::vector<int> k{2, 3, 4, 5};    // arm-scaling
  std::vector<double> epsilon;       // box-count, beta-consistency
  double eta_ratio = 64;             // beta-consistency: eta = epsilon / eta_ratio
  std::size_t batch = 500;           // trials per checkpoint unit
  double box_radius = 0.125;         // face-bound box B, box-count region
  double u_radius = 0.5;             // face-bound region U
  int e_definition = 2;              // pivotal-count
  double secondary_eta = 0.125;      // equivalence: pivotal checks
  std::size_t secondary_trials = 1000;
  std::size_t content_trials = 200;  // beta-consistency: direct content runs
  double c_l = 1.0, c_p = 1.0;
  std::string alpha_csv;             // arm-scaling rows.csv with alpha_2, alpha_4

  std::map<std::string, double> target;
  std::map<std::string, double> tolerance;

  void validate() const;
  double target_or(const std::string& key, double fallback) const;
  double tolerance_or(const std::string& key, double fallback) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& toml_text);
std::string dump_config(const ExperimentConfig& c);  // JSON

const std::vector<std::string>& experiment_names();

}  // namespace percnat
