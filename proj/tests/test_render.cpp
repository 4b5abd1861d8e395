#include <doctest.h>

#include "ballcone/render.hpp"
#include "ballcone/scene_io.hpp"

using namespace ballcone;

TEST_SUITE("render") {
  TEST_CASE("empty input still gives a valid document") {
    const Rendered r = render_svg({});
    CHECK(r.text.rfind("<?xml", 0) == 0);
    CHECK(r.text.find("</svg>") != std::string::npos);
    CHECK(r.warnings.size() == 1);

    TraceSet empty;
    const Rendered c = render_csv(empty);
    CHECK(c.text == "curve,chart,x,y\n");
    CHECK_FALSE(c.warnings.empty());
  }

  TEST_CASE("fixed colours") {
    CHECK(std::string(curve_colour("sigma")) == "red");
    CHECK(std::string(curve_colour("hessian")) == "black");
    CHECK(std::string(curve_colour("conic02")) == "blue");
    CHECK(std::string(curve_colour("conic01")) == "green");
    CHECK(std::string(curve_colour("conic12")) == "gray");
    CHECK(chart_name(Chart::coordinate(0)) == "u1=1");
  }

  TEST_CASE("traced scene renders every curve and the region") {
    const Scene s = load_scene(BALLCONE_DATA_DIR "/fig1.json");
    TraceOptions o;
    o.chart = Chart::coordinate(1);
    o.center = Eigen::Vector2d(0.51, 0.18);
    o.half_width = 0.8;
    o.resolution = 120;
    Panel p;
    p.title = "scene <fig>";
    p.traces = trace_curves(Triple::from_scene(s), o);
    p.region = feasible_region(s, o, 40, std::vector<int>{1, 0, 2});
    CHECK_FALSE(p.region->empty());
    const Rendered r = render_svg({p});
    CHECK(r.warnings.empty());
    for (const char* colour : {"\"red\"", "\"black\"", "\"blue\"", "\"green\"", "\"gray\""})
      CHECK(r.text.find(std::string("stroke=") + colour) != std::string::npos);
    CHECK(r.text.find("url(#hatch)") != std::string::npos);
    CHECK(r.text.find("scene &lt;fig&gt;") != std::string::npos);
    // same input, same bytes
    CHECK(render_svg({p}).text == r.text);

    const Rendered csv = render_csv(p.traces);
    CHECK(csv.text.rfind("curve,chart,x,y\n", 0) == 0);
    CHECK(csv.text.find("\nsigma,u2=1,") != std::string::npos);
  }

  TEST_CASE("feasible region of an ordered query is a subset of the scene region") {
    const Scene s = load_scene(BALLCONE_DATA_DIR "/fig1.json");
    TraceOptions o;
    o.chart = Chart::coordinate(1);
    o.center = Eigen::Vector2d(0.51, 0.18);
    o.half_width = 0.8;
    const auto all = feasible_region(s, o, 30);
    const auto one = feasible_region(s, o, 30, std::vector<int>{1, 0, 2});
    for (std::size_t k = 0; k < all.mask.size(); ++k)
      if (one.mask[k]) CHECK(all.mask[k]);
  }
}
