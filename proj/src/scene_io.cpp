#include "ballcone/scene_io.hpp"

#include <fstream>
#include <sstream>

namespace ballcone {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(v[k]);
  return a;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw SceneParseError("expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw SceneParseError("expected an array of numbers");
    v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
  }
  return v;
}

json scene_to_json(const Scene& scene) {
  json j;
  j["dimension"] = scene.dimension;
  j["order_is_significant"] = true;
  if (scene.allow_overlap) j["allow_overlap"] = true;
  json balls = json::array();
  for (const Ball& b : scene.balls) balls.push_back({{"center", vec_to_json(b.center)}, {"radius", b.radius}});
  j["balls"] = std::move(balls);
  return j;
}

Scene scene_from_json(const json& j) {
  if (!j.is_object()) throw SceneParseError("scene must be a JSON object");
  for (const char* key : {"dimension", "balls"})
    if (!j.contains(key)) throw SceneParseError(std::string("scene is missing \"") + key + "\"");
  if (!j["dimension"].is_number_integer()) throw SceneParseError("\"dimension\" must be an integer");
  if (!j["balls"].is_array()) throw SceneParseError("\"balls\" must be an array");
  Scene s;
  s.dimension = j["dimension"].get<int>();
  s.allow_overlap = j.value("allow_overlap", false);
  for (const auto& b : j["balls"]) {
    if (!b.is_object() || !b.contains("center") || !b.contains("radius") || !b["radius"].is_number())
      throw SceneParseError("each ball needs \"center\" (array) and \"radius\" (number)");
    s.balls.push_back({vec_from_json(b["center"]), b["radius"].get<double>()});
  }
  try {
    validate(s);
  } catch (const GeometryError& e) {
    throw SceneParseError(std::string("invalid scene: ") + e.what());
  }
  return s;
}

std::string write_scene(const Scene& scene) { return scene_to_json(scene).dump(2) + "\n"; }

Scene parse_scene(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    int line = 1, col = 1;
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "malformed scene JSON at line " << line << ", column " << col << ": " << e.what();
    throw SceneParseError(os.str(), line, col);
  }
  return scene_from_json(j);
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneParseError("cannot open scene file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str());
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << write_scene(scene);
}

}  // namespace ballcone
