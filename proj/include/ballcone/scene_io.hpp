#pragma once

#include <string>

#include <json.hpp>

#include "ballcone/geom.hpp"

namespace ballcone {

/// Malformed scene input; carries the 1-based line/column when known.
class SceneParseError : public std::runtime_error {
 public:
  SceneParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

nlohmann::json scene_to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

/// Scene JSON text; doubles are written with 17 significant digits.
std::string write_scene(const Scene& scene);
Scene parse_scene(const std::string& text);
Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

}  // namespace ballcone
