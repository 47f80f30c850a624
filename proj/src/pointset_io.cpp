#include "schurlab/pointset_io.hpp"

#include <fstream>
#include <sstream>

namespace schurlab {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json config_to_json(const PointConfig& config) {
  ordered_json space;
  if (config.space.is_sphere()) {
    space = {{"type", "sphere"},
             {"dim", config.space.dim},
             {"radius", config.space.radius}};
  } else {
    space = {{"type", "euclidean"}, {"dim", config.space.dim}};
  }
  ordered_json points = ordered_json::array();
  for (const Vec& p : config.points) {
    ordered_json row = ordered_json::array();
    for (int i = 0; i < p.size(); ++i) row.push_back(p(i));
    points.push_back(std::move(row));
  }
  ordered_json out{{"space", std::move(space)}, {"points", std::move(points)}};
  if (!config.labels.empty()) out["labels"] = config.labels;
  return out;
}

PointConfig config_from_json(const json& j, const Tolerance& tol) {
  if (!j.is_object()) throw ParseError("point set must be a JSON object");
  if (!j.contains("space") || !j.contains("points"))
    throw ParseError("point set needs \"space\" and \"points\"");

  const json& s = j.at("space");
  if (!s.is_object() || !s.contains("type") || !s.contains("dim"))
    throw ParseError("space needs \"type\" and \"dim\"");
  const std::string type = s.at("type").get<std::string>();
  const int dim = s.at("dim").get<int>();

  PointConfig config;
  if (type == "euclidean") {
    config.space = Space::euclidean(dim);
  } else if (type == "sphere") {
    if (!s.contains("radius")) throw ParseError("sphere space needs \"radius\"");
    config.space = Space::sphere(dim, s.at("radius").get<double>());
  } else {
    throw ParseError("unknown space type \"" + type + "\"");
  }

  const json& pts = j.at("points");
  if (!pts.is_array()) throw ParseError("\"points\" must be an array");
  const int ad = config.space.ambient_dim();
  int idx = 0;
  for (const json& row : pts) {
    if (!row.is_array() || static_cast<int>(row.size()) != ad)
      throw ParseError("point " + std::to_string(idx) + " must have " +
                       std::to_string(ad) + " coordinates");
    Vec p(ad);
    for (int i = 0; i < ad; ++i) {
      const json& x = row.at(i);
      if (!x.is_number())
        throw ParseError("point " + std::to_string(idx) +
                         " has a non-numeric coordinate");
      p(i) = x.get<double>();
    }
    config.points.push_back(std::move(p));
    ++idx;
  }

  if (j.contains("labels")) {
    const json& labels = j.at("labels");
    if (!labels.is_array() || labels.size() != config.points.size())
      throw ParseError("\"labels\" must list one string per point");
    for (const json& l : labels) {
      if (!l.is_string()) throw ParseError("labels must be strings");
      config.labels.push_back(l.get<std::string>());
    }
  }

  try {
    config.validate(tol);
  } catch (const Error& e) {
    throw ParseError(std::string("invalid point set: ") + e.what());
  }
  return config;
}

PointConfig parse_config(const std::string& text, const Tolerance& tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());  // carries the byte position
  }
  return config_from_json(j, tol);
}

PointConfig read_config(const std::string& path, const Tolerance& tol) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), tol);
}

void write_config(const PointConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path);
  out << config_to_json(config).dump() << "\n";
}

}  // namespace schurlab
