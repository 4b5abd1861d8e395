#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ballcone/cone.hpp"
#include "ballcone/flexprobe.hpp"
#include "ballcone/polyid.hpp"
#include "ballcone/render.hpp"
#include "ballcone/scene_io.hpp"
#include "ballcone/trace.hpp"

namespace ballcone::cli {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Input problems that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(jnum(v[k]));
  return a;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + text + "' is not a comma-separated list of numbers");
    }
  }
  return out;
}

std::vector<int> parse_order(const std::string& text) {
  std::vector<int> order;
  for (double v : parse_numbers(text, "--order")) {
    if (v != std::floor(v)) throw UsageError("--order: indices must be integers");
    order.push_back(static_cast<int>(v));
  }
  return order;
}

struct Common {
  std::vector<std::string> scenes;
  std::uint64_t seed = 1;
  std::optional<std::size_t> samples;
  std::optional<double> tol;
  std::string out;
  std::string report;
  std::string format = "json";
  bool timings = false;

  double resolved_tol = kDefaultTol;
  std::string tol_source = "default";
};

struct Outcome {
  json result = json::object();
  json config = json::object();
  bool pass = true;
  std::vector<std::string> warnings;
  std::string artifact;  // csv / svg text
  std::map<std::string, double> timings;
};

class Stopwatch {
 public:
  explicit Stopwatch(Outcome& o, std::string name) : o_(o), name_(std::move(name)), t0_(Clock::now()) {}
  ~Stopwatch() { o_.timings[name_] += std::chrono::duration<double>(Clock::now() - t0_).count(); }

 private:
  Outcome& o_;
  std::string name_;
  Clock::time_point t0_;
};

void resolve_tol(Common& c) {
  if (c.tol) {
    if (!(*c.tol > 0.0) || !std::isfinite(*c.tol)) throw UsageError("--tol must be a positive number");
    c.resolved_tol = *c.tol;
    c.tol_source = "flag";
    return;
  }
  if (const char* env = std::getenv("BALLCONE_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw UsageError(std::string("BALLCONE_TOL='") + env + "' is not a positive number");
    c.resolved_tol = v;
    c.tol_source = "env";
  }
}

Scene load_scene_checked(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scene file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str());
  } catch (const SceneParseError& e) {
    std::ostringstream os;
    os << path;
    if (e.line() > 0) os << ':' << e.line() << ':' << e.column();
    os << ": " << e.what();
    throw UsageError(os.str());
  }
}

const std::string& single_scene(const Common& c) {
  if (c.scenes.empty()) throw UsageError("--scene is required");
  if (c.scenes.size() > 1) throw UsageError("this command takes one --scene");
  return c.scenes.front();
}

Triple triple_of(const Scene& scene) {
  if (scene.dimension != 3 || scene.size() != 3) throw UsageError("this command needs a scene of three balls in R^3");
  return Triple::from_scene(scene);
}

void require_format(const Common& c, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (c.format == f) return;
  std::string list;
  for (const char* f : allowed) list += std::string(list.empty() ? "" : ", ") + f;
  throw UsageError("--format " + c.format + " is not available here (" + list + ")");
}

json config_json(const std::string& command, const Common& c) {
  json j;
  j["command"] = command;
  j["seed"] = c.seed;
  j["tol"] = c.resolved_tol;
  j["tol_source"] = c.tol_source;
  j["format"] = c.format;
  if (!c.out.empty()) j["out"] = c.out;
  if (!c.report.empty()) j["report"] = c.report;
  j["timings"] = c.timings;
  return j;
}

// --- commands ---------------------------------------------------------------

struct ConvexityArgs {
  std::string order;
  int pool = 200;
  std::size_t search_samples = 20000;
};

Outcome check_convexity(const Common& c, const ConvexityArgs& a) {
  require_format(c, {"json"});
  Outcome o;
  const std::string& path = single_scene(c);
  const Scene scene = load_scene_checked(path);
  const std::size_t pairs = c.samples.value_or(1000);
  o.config["scene"] = path;
  o.config["scene_data"] = scene_to_json(scene);
  o.config["samples"] = pairs;
  o.config["pool"] = a.pool;
  o.config["search_samples"] = a.search_samples;

  std::vector<std::pair<std::vector<int>, std::optional<Vec>>> cones;
  if (!a.order.empty()) {
    o.config["order"] = parse_order(a.order);
    cones.push_back({parse_order(a.order), std::nullopt});
  } else {
    Stopwatch sw(o, "catalog");
    SamplingOptions so;
    so.samples = a.search_samples;
    so.seed = c.seed;
    so.tol = c.resolved_tol;
    so.refine = false;
    for (const auto& p : enumerate_geometric_permutations(scene, so).permutations) cones.push_back({p.order, p.witness});
  }
  if (cones.empty()) o.warnings.push_back("no transversal direction found: nothing to test");

  Stopwatch sw(o, "midpoints");
  int total = 0;
  json list = json::array();
  for (const auto& [order, hint] : cones) {
    const OrderedQuery q = OrderedQuery::make(scene, order);
    ConvexityOptions co;
    co.pairs = static_cast<int>(pairs);
    co.seed = c.seed;
    co.tol = c.resolved_tol;
    co.pool_size = a.pool;
    co.search_samples = a.search_samples;
    co.hint = hint;
    const ConvexityReport r = cone_convexity_check(q, co);
    total += r.violations;
    json e;
    e["order"] = order;
    e["pairs_tested"] = r.pairs_tested;
    e["boundary_pairs"] = r.boundary_pairs;
    e["violations"] = r.violations;
    e["min_midpoint_depth"] = jnum(r.min_midpoint_depth);
    e["min_boundary_depth"] = jnum(r.min_boundary_depth);
    e["feasible_pool"] = r.feasible_pool;
    e["inconclusive"] = r.inconclusive;
    json w = json::array();
    for (const auto& v : r.witnesses)
      w.push_back({{"kind", v.kind},
                   {"first", vec_json(v.first)},
                   {"second", vec_json(v.second)},
                   {"midpoint", vec_json(v.midpoint)},
                   {"slack", jnum(v.slack)}});
    e["witnesses"] = w;
    if (r.inconclusive) o.warnings.push_back("cone of order " + json(order).dump() + " has no feasible direction");
    list.push_back(e);
  }
  o.result["cones"] = list;
  o.result["violations"] = total;
  o.pass = total == 0;
  return o;
}

struct PermArgs {
  bool no_refine = false;
  double graph_radius = 2.5;
};

SamplingOptions sampling(const Common& c, const PermArgs& a) {
  SamplingOptions so;
  so.samples = c.samples.value_or(100000);
  so.seed = c.seed;
  so.tol = c.resolved_tol;
  so.refine = !a.no_refine;
  so.graph_radius = a.graph_radius;
  return so;
}

json catalog_json(const PermutationCatalog& cat) {
  json perms = json::array();
  for (const auto& p : cat.permutations)
    perms.push_back({{"order", p.order}, {"witness", vec_json(p.witness)}, {"samples", p.samples}});
  return {{"permutations", perms},
          {"count", cat.size()},
          {"samples", cat.samples},
          {"feasible_samples", cat.feasible_samples},
          {"refined_samples", cat.refined_samples},
          {"spacing", jnum(cat.spacing)}};
}

Outcome enumerate_permutations(const Common& c, const PermArgs& a) {
  require_format(c, {"json", "csv"});
  Outcome o;
  const std::string& path = single_scene(c);
  const Scene scene = load_scene_checked(path);
  const SamplingOptions so = sampling(c, a);
  o.config["scene"] = path;
  o.config["scene_data"] = scene_to_json(scene);
  o.config["samples"] = so.samples;
  o.config["refine"] = so.refine;
  Stopwatch sw(o, "sampling");
  const PermutationCatalog cat = enumerate_geometric_permutations(scene, so);
  o.result = catalog_json(cat);
  if (c.format == "csv") {
    std::ostringstream csv;
    csv << "order,samples,witness\n";
    for (const auto& p : cat.permutations) {
      csv << '"';
      for (std::size_t k = 0; k < p.order.size(); ++k) csv << (k ? " " : "") << p.order[k];
      csv << "\"," << p.samples << ",\"";
      for (Eigen::Index k = 0; k < p.witness.size(); ++k) csv << (k ? " " : "") << json(p.witness[k]).dump();
      csv << "\"\n";
    }
    o.artifact = csv.str();
  }
  return o;
}

Outcome count_components_cmd(const Common& c, const PermArgs& a) {
  require_format(c, {"json"});
  Outcome o;
  const std::string& path = single_scene(c);
  const Scene scene = load_scene_checked(path);
  const SamplingOptions so = sampling(c, a);
  o.config["scene"] = path;
  o.config["scene_data"] = scene_to_json(scene);
  o.config["samples"] = so.samples;
  o.config["refine"] = so.refine;
  o.config["graph_radius"] = so.graph_radius;
  Stopwatch sw(o, "components");
  const ComponentReport r = count_components(scene, so);
  o.result["components"] = r.components;
  o.result["oriented_clusters"] = r.oriented_clusters;
  o.result["cluster_sizes"] = r.cluster_sizes;
  o.result["merged_by_arcs"] = r.merged_by_arcs;
  o.result["undersampled"] = r.undersampled;
  o.result["catalog"] = catalog_json(r.catalog);
  o.result["matches_catalog"] = r.matches_catalog;
  for (const auto& w : r.warnings) o.warnings.push_back(w);
  o.pass = r.matches_catalog;
  return o;
}

Outcome probe_flex(const Common& c) {
  require_format(c, {"json", "csv"});
  Outcome o;
  const std::string& path = single_scene(c);
  const Scene scene = load_scene_checked(path);
  const Triple triple = triple_of(scene);
  FlexOptions fo;
  fo.boundary_samples = static_cast<int>(c.samples.value_or(200));
  fo.seed = c.seed;
  fo.tol = c.resolved_tol;
  o.config["scene"] = path;
  o.config["scene_data"] = scene_to_json(scene);
  o.config["samples"] = fo.boundary_samples;
  Stopwatch sw(o, "probe");
  const FlexReport r = certify_flex_free(triple, fo);
  std::map<std::string, int> tags;
  for (const auto& t : r.skip_tags) ++tags[t];
  o.result["requested"] = r.requested;
  o.result["certified_samples"] = r.samples.size();
  o.result["skipped"] = r.skipped;
  o.result["skip_tags"] = tags;
  o.result["min_margin"] = jnum(r.min_margin);
  o.result["nonpositive"] = r.nonpositive;
  o.result["disjointness_violations"] = r.disjointness_violations;
  o.result["min_vertex_value"] = jnum(r.min_vertex_value);
  json w = json::array();
  for (const auto& s : r.samples) {
    if (s.margin > fo.margin_floor || w.size() >= 5) continue;
    w.push_back({{"direction", vec_json(s.direction)},
                 {"order", s.order},
                 {"margin", jnum(s.margin)},
                 {"hessian_sextic", jnum(s.hessian_sextic)}});
  }
  o.result["witnesses"] = w;
  const bool vacuous = r.samples.empty();
  o.result["vacuous"] = vacuous;
  if (vacuous) {
    o.warnings.push_back("no sextic arc on any cone boundary: nothing to certify");
    o.pass = r.nonpositive == 0;
  } else {
    o.pass = r.pass;
  }
  if (scene.allow_overlap) o.warnings.push_back("scene allows overlapping balls: positivity is not expected");
  if (c.format == "csv") {
    std::ostringstream csv;
    csv << "u0,u1,u2,order,h2,h4,margin,hessian_sextic,hessian_lifted,disjointness_ok\n";
    for (const auto& s : r.samples) {
      csv << json(s.direction.x()).dump() << ',' << json(s.direction.y()).dump() << ',' << json(s.direction.z()).dump()
          << ',' << s.order[0] << ' ' << s.order[1] << ' ' << s.order[2] << ',' << json(s.h2).dump() << ','
          << json(s.h4).dump() << ',' << json(s.margin).dump() << ',' << json(s.hessian_sextic).dump() << ','
          << json(s.hessian_lifted).dump() << ',' << (s.disjointness_ok ? 1 : 0) << '\n';
    }
    o.artifact = csv.str();
  }
  return o;
}

struct TraceArgs {
  int chart = 3;
  double half_width = 3.0;
  std::string center = "0,0";
  int resolution = 200;
  bool no_region = false;
  int region_resolution = 120;
  std::string order;
};

Outcome trace_curves_cmd(const Common& c, const TraceArgs& a) {
  require_format(c, {"json", "csv", "svg"});
  Outcome o;
  if (c.scenes.empty()) throw UsageError("--scene is required");
  if (c.format == "csv" && c.scenes.size() > 1) throw UsageError("--format csv takes one --scene");
  if (a.chart < 1 || a.chart > 3) throw UsageError("--chart must be 1, 2 or 3 (the chart u_k = 1)");
  if (!(a.half_width > 0.0)) throw UsageError("--half-width must be positive");
  if (a.resolution < 4 || a.region_resolution < 4) throw UsageError("resolutions must be at least 4");
  const auto center = parse_numbers(a.center, "--center");
  if (center.size() != 2) throw UsageError("--center takes two numbers");

  TraceOptions topts;
  topts.chart = Chart::coordinate(a.chart - 1);
  topts.center = {center[0], center[1]};
  topts.half_width = a.half_width;
  topts.resolution = a.resolution;
  o.config["scene"] = c.scenes;
  o.config["chart"] = a.chart;
  o.config["center"] = center;
  o.config["half_width"] = a.half_width;
  o.config["resolution"] = a.resolution;
  o.config["region"] = !a.no_region;
  o.config["region_resolution"] = a.region_resolution;
  std::optional<std::vector<int>> order;
  if (!a.order.empty()) {
    order = parse_order(a.order);
    o.config["order"] = *order;
  }

  std::vector<Panel> panels;
  json scenes = json::array();
  json traces = json::array();
  for (const auto& path : c.scenes) {
    const Scene scene = load_scene_checked(path);
    scenes.push_back(scene_to_json(scene));
    Panel p;
    p.title = std::filesystem::path(path).stem().string();
    {
      Stopwatch sw(o, "trace");
      p.traces = trace_curves(triple_of(scene), topts);
    }
    if (!a.no_region) {
      Stopwatch sw(o, "region");
      p.region = feasible_region(scene, topts, a.region_resolution, order);
    }
    json curves = json::array();
    for (const auto& cv : p.traces.curves) {
      json lines = json::array();
      std::size_t points = 0;
      for (const auto& pl : cv.polylines) {
        json pts = json::array();
        for (const auto& x : pl.points) pts.push_back({jnum(x.x()), jnum(x.y())});
        points += pl.points.size();
        lines.push_back({{"closed", pl.closed}, {"points", pts}});
      }
      curves.push_back({{"name", cv.name},
                        {"colour", curve_colour(cv.name)},
                        {"polylines", c.format == "json" ? lines : json(lines.size())},
                        {"points", points}});
    }
    json t{{"title", p.title}, {"curves", curves}};
    if (p.region) {
      std::size_t cells = 0;
      for (char m : p.region->mask) cells += m ? 1 : 0;
      t["feasible_cells"] = cells;
    }
    traces.push_back(t);
    panels.push_back(std::move(p));
  }
  o.config["scene_data"] = scenes;
  o.result["panels"] = traces;
  if (c.format == "svg") {
    Rendered r = render_svg(panels);
    // the XML declaration has to stay first
    o.artifact = r.text.substr(0, r.text.find('\n') + 1) + "<!-- ballcone trace-curves -->\n" +
                 r.text.substr(r.text.find('\n') + 1);
    for (auto& w : r.warnings) o.warnings.push_back(w);
  } else if (c.format == "csv") {
    Rendered r = render_csv(panels.front().traces);
    o.artifact = r.text;
    for (auto& w : r.warnings) o.warnings.push_back(w);
  }
  return o;
}

struct IdentityArgs {
  int trials = 100;
  int height = 1000;
};

Outcome verify_identities(const Common& c, const IdentityArgs& a) {
  require_format(c, {"json"});
  if (!c.scenes.empty()) throw UsageError("verify-identities takes no --scene");
  if (a.trials < 1 || a.height < 2) throw UsageError("--trials must be >= 1 and --height >= 2");
  Outcome o;
  o.config["trials"] = a.trials;
  o.config["height"] = a.height;
  Stopwatch sw(o, "identities");
  const SuiteReport r = schwartz_zippel_suite(a.trials, a.height, c.seed);
  o.result = to_json(r);
  int passed = 0;
  for (const auto& id : r.identities) passed += id.passed == id.trials ? 1 : 0;
  o.result["identities_passed"] = passed;
  o.result["identities_total"] = r.identities.size();
  o.pass = r.all_pass();
  return o;
}

struct ClassifyArgs {
  std::string direction;
};

json classification_json(const Vector3d& u, const BoundaryClassification& b) {
  json tris = json::array();
  for (const auto& t : b.tritangents)
    tris.push_back({{"point", vec_json(t.line.point)},
                    {"direction", vec_json(t.line.direction)},
                    {"order", t.order},
                    {"tag", t.tag},
                    {"crosses_triangle", t.crosses_triangle},
                    {"barycentric", {jnum(t.barycentric[0]), jnum(t.barycentric[1]), jnum(t.barycentric[2])}}});
  return {{"direction", vec_json(u)},
          {"on_boundary", b.on_boundary},
          {"empirical_on_boundary", b.empirical_on_boundary},
          {"consistent", b.consistent},
          {"skipped", b.skipped},
          {"tag", b.tag},
          {"slack", jnum(b.slack)},
          {"probe_feasible", b.probe_feasible},
          {"probe_infeasible", b.probe_infeasible},
          {"tritangents", tris}};
}

Outcome classify_boundary(const Common& c, const ClassifyArgs& a) {
  require_format(c, {"json"});
  Outcome o;
  const std::string& path = single_scene(c);
  const Scene scene = load_scene_checked(path);
  const Triple triple = triple_of(scene);
  o.config["scene"] = path;
  o.config["scene_data"] = scene_to_json(scene);

  std::vector<Vector3d> dirs;
  if (!a.direction.empty()) {
    const auto v = parse_numbers(a.direction, "--direction");
    if (v.size() != 3) throw UsageError("--direction takes three numbers");
    dirs.push_back(Vector3d(v[0], v[1], v[2]).normalized());
    o.config["direction"] = v;
  } else {
    const std::size_t count = c.samples.value_or(20);
    o.config["samples"] = count;
    // Sextic points from the three coordinate charts, spread evenly.
    Stopwatch sw(o, "trace");
    std::vector<Vector3d> pool;
    for (int axis = 2; axis >= 0 && pool.size() < count; --axis) {
      TraceOptions t;
      t.chart = Chart::coordinate(axis);
      t.half_width = 4.0;
      const TraceSet ts = trace_curves(triple, t);
      if (const CurveTrace* s = ts.find("sigma"))
        for (const auto& pl : s->polylines)
          for (const auto& x : pl.points) pool.push_back(t.chart.at(x.x(), x.y()).normalized());
    }
    for (std::size_t k = 0; k < count && !pool.empty(); ++k) dirs.push_back(pool[k * pool.size() / count]);
    if (dirs.empty()) o.warnings.push_back("no sextic direction found in the coordinate charts");
  }

  Stopwatch sw(o, "classify");
  json list = json::array();
  int inconsistent = 0, boundary = 0, skipped = 0;
  for (const auto& u : dirs) {
    const BoundaryClassification b = classify_boundary_direction(triple, u, c.seed);
    inconsistent += b.consistent ? 0 : 1;
    skipped += b.skipped ? 1 : 0;
    boundary += b.on_boundary ? 1 : 0;
    list.push_back(classification_json(u, b));
  }
  o.result["directions"] = list;
  o.result["on_boundary"] = boundary;
  o.result["inconsistent"] = inconsistent;
  o.result["skipped"] = skipped;
  if (skipped) o.warnings.push_back(std::to_string(skipped) + " direction(s) not classified; see their tags");
  o.pass = inconsistent == 0;
  return o;
}

struct GenerateArgs {
  int n = 3;
  int dim = 3;
  std::string layout = "box";
  double r_min = 1.0, r_max = 1.0, spread = 1.0;
  std::string write_scene;
};

Outcome generate_scene(const Common& c, const GenerateArgs& a) {
  require_format(c, {"json"});
  if (!c.scenes.empty()) throw UsageError("generate-scene takes no --scene");
  Outcome o;
  SceneGenOptions g;
  g.n = a.n;
  g.dimension = a.dim;
  g.r_min = a.r_min;
  g.r_max = a.r_max;
  g.spread = a.spread;
  g.seed = c.seed;
  try {
    g.layout = parse_layout(a.layout);
  } catch (const GeometryError& e) {
    throw UsageError(e.what());
  }
  o.config["n"] = a.n;
  o.config["dimension"] = a.dim;
  o.config["layout"] = a.layout;
  o.config["r_min"] = a.r_min;
  o.config["r_max"] = a.r_max;
  o.config["spread"] = a.spread;
  if (!a.write_scene.empty()) o.config["write_scene"] = a.write_scene;
  const GeneratedScene gs = random_disjoint_scene(g);
  o.result["scene"] = scene_to_json(gs.scene);
  if (gs.construction_direction) {
    o.result["construction_direction"] = vec_json(gs.construction_direction->vec());
    o.result["construction_order"] = gs.construction_order;
  }
  const SceneFlags f = scene_classification(gs.scene);
  o.result["flags"] = {{"thinly_distributed", f.thinly_distributed},
                       {"pairwise_inflatable", f.pairwise_inflatable},
                       {"collinear_centers", f.collinear_centers},
                       {"pairwise_disjoint", f.pairwise_disjoint}};
  if (!a.write_scene.empty()) save_scene(gs.scene, a.write_scene);
  return o;
}

// --- plumbing ----------------------------------------------------------------

void add_common(CLI::App* app, Common& c, bool many_scenes) {
  if (many_scenes)
    app->add_option("--scene", c.scenes, "scene JSON file (repeat for side-by-side panels)");
  else
    app->add_option("--scene", c.scenes, "scene JSON file")->expected(1);
  app->add_option("--seed", c.seed, "random seed");
  app->add_option("--samples", c.samples, "sampling budget (meaning depends on the command)");
  app->add_option("--tol", c.tol, "feasibility tolerance (default $BALLCONE_TOL or 1e-10)");
  app->add_option("--out", c.out, "write the report (json) or artifact (csv/svg) here instead of stdout");
  app->add_option("--report", c.report, "with csv/svg: also write the JSON report here");
  app->add_option("--format", c.format, "json, csv or svg")->check(CLI::IsMember({"json", "csv", "svg"}));
  app->add_flag("--timings", c.timings, "include wall-clock timings in the report");
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Direction cones of line transversals to balls"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  ConvexityArgs conv;
  PermArgs perm;
  TraceArgs trace;
  IdentityArgs ident;
  ClassifyArgs classify;
  GenerateArgs gen;

  auto* c1 = app.add_subcommand("check-convexity", "geodesic-midpoint test of every non-empty cone");
  add_common(c1, common, false);
  c1->add_option("--order", conv.order, "test only this order, e.g. 0,2,1");
  c1->add_option("--pool", conv.pool, "feasible directions drawn before pairing");
  c1->add_option("--search-samples", conv.search_samples, "sphere samples used to find the cones");

  auto* c2 = app.add_subcommand("enumerate-permutations", "geometric permutations by direction sampling");
  add_common(c2, common, false);
  c2->add_flag("--no-refine", perm.no_refine, "skip boundary refinement");

  auto* c3 = app.add_subcommand("count-components", "connected components of the transversal directions");
  add_common(c3, common, false);
  c3->add_flag("--no-refine", perm.no_refine, "skip boundary refinement");
  c3->add_option("--graph-radius", perm.graph_radius, "neighbour radius in sample spacings");

  auto* c4 = app.add_subcommand("probe-flex", "sign of H2 + H4 on the sextic arcs of the cone boundaries");
  add_common(c4, common, false);

  auto* c5 = app.add_subcommand("trace-curves", "sextic, Hessian and pair conics in an affine chart");
  add_common(c5, common, true);
  c5->add_option("--chart", trace.chart, "chart u_k = 1, k in 1..3");
  c5->add_option("--center", trace.center, "chart window center x,y");
  c5->add_option("--half-width", trace.half_width, "chart window half width");
  c5->add_option("--resolution", trace.resolution, "marching-squares cells per side");
  c5->add_flag("--no-region", trace.no_region, "do not hatch the transversal directions");
  c5->add_option("--region-resolution", trace.region_resolution, "feasibility grid cells per side");
  c5->add_option("--order", trace.order, "hatch only this order and its reverse, e.g. 1,0,2");

  auto* c6 = app.add_subcommand("verify-identities", "exact randomized identity suite");
  add_common(c6, common, false);
  c6->add_option("--trials", ident.trials, "evaluation points per identity");
  c6->add_option("--height", ident.height, "bound on numerators and denominators");

  auto* c7 = app.add_subcommand("classify-boundary", "boundary predicate for sextic directions");
  add_common(c7, common, false);
  c7->add_option("--direction", classify.direction, "x,y,z on the sextic (default: traced points)");

  auto* c8 = app.add_subcommand("generate-scene", "reproducible random scene");
  add_common(c8, common, false);
  c8->add_option("--n", gen.n, "number of balls");
  c8->add_option("--dim", gen.dim, "dimension");
  c8->add_option("--layout", gen.layout, "box, transversal, triangle or corridors");
  c8->add_option("--r-min", gen.r_min, "smallest radius");
  c8->add_option("--r-max", gen.r_max, "largest radius");
  c8->add_option("--spread", gen.spread, "box / gap scale");
  c8->add_option("--write-scene", gen.write_scene, "also write the scene file here");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const auto t0 = Clock::now();
  Outcome o;
  try {
    resolve_tol(common);
    if (name == "check-convexity") o = check_convexity(common, conv);
    else if (name == "enumerate-permutations") o = enumerate_permutations(common, perm);
    else if (name == "count-components") o = count_components_cmd(common, perm);
    else if (name == "probe-flex") o = probe_flex(common);
    else if (name == "trace-curves") o = trace_curves_cmd(common, trace);
    else if (name == "verify-identities") o = verify_identities(common, ident);
    else if (name == "classify-boundary") o = classify_boundary(common, classify);
    else o = generate_scene(common, gen);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // GeometryError, DomainError, ...
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << name << ": " << e.what() << '\n';
    return kExitUsage;
  }

  json report;
  report["schema"] = kReportSchema;
  report["schema_version"] = kReportSchemaVersion;
  report["command"] = name;
  json config = config_json(name, common);
  config.update(o.config);
  report["config"] = config;
  report["verdict"] = o.pass ? "pass" : "fail";
  report["result"] = o.result;
  report["warnings"] = o.warnings;
  json artifacts = json::array();
  if (common.format != "json" && !common.out.empty()) artifacts.push_back(common.out);
  report["artifacts"] = artifacts;
  if (common.timings) {
    json t = json::object();
    for (const auto& [k, v] : o.timings) t[k] = v;
    t["total"] = std::chrono::duration<double>(Clock::now() - t0).count();
    report["timings"] = t;
  }
  for (const auto& w : o.warnings) err << "warning: " << w << '\n';

  try {
    if (common.format == "json") {
      write_text(common.out, report.dump(2) + "\n", out);
    } else {
      write_text(common.out, o.artifact, out);
      if (!common.report.empty()) write_text(common.report, report.dump(2) + "\n", out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return o.pass ? kExitPass : kExitViolation;
}

}  // namespace ballcone::cli
