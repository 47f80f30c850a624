#pragma once

#include "schurlab/geom.hpp"

#include <json.hpp>

#include <string>

namespace schurlab {

// malformed input (syntax or schema); message carries the position or field
struct ParseError : Error {
  using Error::Error;
};

// {"space": {"type": "euclidean", "dim": d} | {"type": "sphere", "dim": d,
//  "radius": r}, "points": [[x, ...], ...], "labels": ["a", ...]?}
nlohmann::ordered_json config_to_json(const PointConfig& config);
PointConfig config_from_json(const nlohmann::json& j,
                             const Tolerance& tol = {});

PointConfig read_config(const std::string& path, const Tolerance& tol = {});
PointConfig parse_config(const std::string& text, const Tolerance& tol = {});
void write_config(const PointConfig& config, const std::string& path);

}  // namespace schurlab
