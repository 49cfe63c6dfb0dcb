#include "percnat/config.hpp"

#include "percnat/error.hpp"

#include <json.hpp>
#include <tomlplusplus/toml.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace percnat {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "arm-scaling", "interface-length", "pivotal-count",  "box-count",    "beta-consistency",
      "face-bound",  "equivalence",      "metric-selftest", "cardy-sanity", "minkowski-calibration"};
  return names;
}

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), experiment) == names.end())
    throw Error(ErrorKind::UnknownExperiment, "unknown experiment '" + experiment + "'");
  if (trials < 1) throw Error(ErrorKind::ConfigInvalid, "trials must be at least 1");
  if (threads < 1) throw Error(ErrorKind::ConfigInvalid, "threads must be at least 1");
  if (batch < 1) throw Error(ErrorKind::ConfigInvalid, "batch must be at least 1");
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!(eta[i] > 0)) throw Error(ErrorKind::ConfigInvalid, "eta values must be positive");
    if (i > 0 && !(eta[i] < eta[i - 1])) throw Error(ErrorKind::ConfigInvalid, "eta grid must decrease strictly");
  }
  for (double e : epsilon)
    if (!(e > 0)) throw Error(ErrorKind::ConfigInvalid, "epsilon values must be positive");
}

double ExperimentConfig::target_or(const std::string& key, double fallback) const {
  auto it = target.find(key);
  return it == target.end() ? fallback : it->second;
}

double ExperimentConfig::tolerance_or(const std::string& key, double fallback) const {
  auto it = tolerance.find(key);
  return it == tolerance.end() ? fallback : it->second;
}

namespace {

double as_double(const toml::node& n, const std::string& key) {
  if (auto v = n.value<double>()) return *v;
  throw Error(ErrorKind::ConfigInvalid, "'" + key + "' must be a number");
}

std::int64_t as_int(const toml::node& n, const std::string& key) {
  if (auto v = n.value<std::int64_t>()) return *v;
  throw Error(ErrorKind::ConfigInvalid, "'" + key + "' must be an integer");
}

std::size_t as_count(const toml::node& n, const std::string& key) {
  const std::int64_t v = as_int(n, key);
  if (v < 0) throw Error(ErrorKind::ConfigInvalid, "'" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

std::string as_string(const toml::node& n, const std::string& key) {
  if (auto v = n.value<std::string>()) return *v;
  throw Error(ErrorKind::ConfigInvalid, "'" + key + "' must be a string");
}

template <class T, class F>
std::vector<T> as_list(const toml::node& n, const std::string& key, F&& each) {
  const toml::array* arr = n.as_array();
  if (!arr) throw Error(ErrorKind::ConfigInvalid, "'" + key + "' must be an array");
  std::vector<T> out;
  for (const toml::node& x : *arr) out.push_back(each(x, key));
  return out;
}

void read_table(const toml::node& n, const std::string& key, std::map<std::string, double>& out) {
  const toml::table* t = n.as_table();
  if (!t) throw Error(ErrorKind::ConfigInvalid, "'" + key + "' must be a table");
  for (const auto& [k, v] : *t) out[std::string(k.str())] = as_double(v, key + "." + std::string(k.str()));
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  toml::table t;
  try {
    t = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("TOML: ") + std::string(e.description()));
  }
  ExperimentConfig c;
  for (const auto& [key_view, node] : t) {
    const std::string key(key_view.str());
    if (key == "experiment") c.experiment = as_string(node, key);
    else if (key == "domain") c.domain = as_string(node, key);
    else if (key == "eta") c.eta = as_list<double>(node, key, as_double);
    else if (key == "trials") c.trials = as_count(node, key);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int(node, key));
    else if (key == "threads") c.threads = static_cast<int>(as_int(node, key));
    else if (key == "out") c.out = as_string(node, key);
    else if (key == "k")
      c.k = as_list<int>(node, key, [](const toml::node& x, const std::string& k) { return static_cast<int>(as_int(x, k)); });
    else if (key == "epsilon") c.epsilon = as_list<double>(node, key, as_double);
    else if (key == "eta_ratio") c.eta_ratio = as_double(node, key);
    else if (key == "batch") c.batch = as_count(node, key);
    else if (key == "box_radius") c.box_radius = as_double(node, key);
    else if (key == "u_radius") c.u_radius = as_double(node, key);
    else if (key == "e_definition") c.e_definition = static_cast<int>(as_int(node, key));
    else if (key == "secondary_eta") c.secondary_eta = as_double(node, key);
    else if (key == "secondary_trials") c.secondary_trials = as_count(node, key);
    else if (key == "content_trials") c.content_trials = as_count(node, key);
    else if (key == "c_l") c.c_l = as_double(node, key);
    else if (key == "c_p") c.c_p = as_double(node, key);
    else if (key == "alpha_csv") c.alpha_csv = as_string(node, key);
    else if (key == "target") read_table(node, key, c.target);
    else if (key == "tolerance") read_table(node, key, c.tolerance);
    else throw Error(ErrorKind::ConfigInvalid, "unknown key '" + key + "'");
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigInvalid, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["experiment"] = c.experiment;
  j["domain"] = c.domain;
  j["eta"] = c.eta;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["k"] = c.k;
  j["epsilon"] = c.epsilon;
  j["eta_ratio"] = c.eta_ratio;
  j["batch"] = c.batch;
  j["box_radius"] = c.box_radius;
  j["u_radius"] = c.u_radius;
  j["e_definition"] = c.e_definition;
  j["secondary_eta"] = c.secondary_eta;
  j["secondary_trials"] = c.secondary_trials;
  j["content_trials"] = c.content_trials;
  j["c_l"] = c.c_l;
  j["c_p"] = c.c_p;
  j["alpha_csv"] = c.alpha_csv;
  j["target"] = c.target;
  j["tolerance"] = c.tolerance;
  return j.dump();
}

}  // namespace percnat
