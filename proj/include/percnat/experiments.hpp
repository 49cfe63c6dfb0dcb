#pragma once

#include "percnat/config.hpp"

#include <cstddef>
#include <limits>
#include <string>

namespace percnat {

struct RunOptions {
  /// Stop after computing this many new checkpoint units (for interrupt
  /// tests); the run then reports complete = false and writes no outputs
  /// besides the checkpoint.
  std::size_t unit_limit = std::numeric_limits<std::size_t>::max();
  bool write_files = true;
  bool verbose = false;
};

struct ExperimentReport {
  bool complete = false;
  bool pass = false;
  std::string csv;           // rows.csv contents
  std::string summary_json;  // summary.json contents
  std::string directory;     // <out>/<experiment>
};

/// Runs the experiment named in `config`, resuming from
/// <out>/<experiment>/checkpoint.jsonl when its config fingerprint matches,
/// and writes rows.csv, summary.json and the checkpoint there.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

/// The pre-registered configuration for an experiment (what configs/*.toml
/// contain).
ExperimentConfig default_config(const std::string& experiment);

}  // namespace percnat
