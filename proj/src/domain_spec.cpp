#include "percnat/error.hpp"
#include "percnat/lattice.hpp"

#include <json.hpp>

#include <cmath>
#include <numbers>

namespace percnat {

using nlohmann::json;

JordanDomainSpec JordanDomainSpec::from_json(const std::string& text) {
  JordanDomainSpec spec;
  try {
    const json j = json::parse(text);
    for (const auto& v : j.at("vertices")) spec.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    if (j.contains("marked"))
      for (const auto& [k, v] : j.at("marked").items()) {
        if (k.size() != 1 || k[0] < 'a' || k[0] > 'd')
          throw Error(ErrorKind::ConfigInvalid, "marked labels must be a, b, c or d");
        spec.marked[k[0]] = Point(v.at(0).get<double>(), v.at(1).get<double>());
      }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::FormatError, e.what());
  }
  if (spec.vertices.size() < 3) throw Error(ErrorKind::InvalidPolygon, "need at least 3 vertices");
  return spec;
}

std::string JordanDomainSpec::to_json() const {
  json j;
  j["vertices"] = json::array();
  for (const Point& p : vertices) j["vertices"].push_back({p.x(), p.y()});
  j["marked"] = json::object();
  for (const auto& [k, p] : marked) j["marked"][std::string(1, k)] = {p.x(), p.y()};
  return j.dump();
}

JordanDomainSpec box_domain(const Box& box) {
  JordanDomainSpec spec;
  spec.vertices = box.polygon();
  const Point& c = box.center;
  const double r = box.radius;
  spec.marked = {{'a', c + Point(0, -r)}, {'b', c + Point(r, 0)}, {'c', c + Point(0, r)}, {'d', c + Point(-r, 0)}};
  return spec;
}

JordanDomainSpec named_domain(const std::string& name) {
  JordanDomainSpec spec;
  if (name == "disk") {
    constexpr int n = 2048;
    for (int k = 0; k < n; ++k) {
      const double t = 2 * std::numbers::pi * k / n;
      spec.vertices.emplace_back(std::cos(t), std::sin(t));
    }
    spec.marked = {{'a', Point(0, -1)}, {'b', Point(1, 0)}, {'c', Point(0, 1)}, {'d', Point(-1, 0)}};
  } else if (name == "square") {
    spec = box_domain(Box{Point(0, 0), 1.0});
  } else if (name == "rhombus60") {
    spec.vertices = {Point(0, 0), Point(1, 0), Point(1.5, 0.5 * kSqrt3), Point(0.5, 0.5 * kSqrt3)};
    spec.marked = {{'a', spec.vertices[0]}, {'b', spec.vertices[1]}, {'c', spec.vertices[2]}, {'d', spec.vertices[3]}};
  } else {
    throw Error(ErrorKind::ConfigInvalid, "unknown named domain '" + name + "'");
  }
  return spec;
}

}  // namespace percnat
