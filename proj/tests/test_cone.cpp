#include <doctest.h>

#include <cmath>

#include "ballcone/cone.hpp"
#include "ballcone/scene_io.hpp"
#include "ballcone/sphere.hpp"
#include "ballcone/trace.hpp"
#include "oracles.hpp"

using namespace ballcone;

namespace {

Scene data_scene(const char* name) { return load_scene(std::string(BALLCONE_DATA_DIR) + "/" + name); }

GeneratedScene transversal_scene(std::uint64_t seed, int n = 3, int d = 3) {
  SceneGenOptions g;
  g.seed = seed;
  g.n = n;
  g.dimension = d;
  g.r_min = 0.5;
  g.r_max = 1.5;
  g.with_transversal = true;
  return random_disjoint_scene(g);
}

double oracle_slack(const Scene& s, const Vec& u) {
  std::vector<Vector3d> c;
  std::vector<double> r;
  for (const auto& b : s.balls) {
    c.push_back(b.center);
    r.push_back(b.radius);
  }
  return oracle::line_slack(c, r, u);
}

}  // namespace

TEST_SUITE("cone") {
  TEST_CASE("collinear feasibility depends on the order") {
    const Scene s = data_scene("collinear.json");
    const Direction x = Direction::axis(3, 0);
    CHECK(direction_feasible(OrderedQuery::make(s, {0, 1, 2}), x).feasible());
    CHECK(direction_feasible(OrderedQuery::make(s, {0, 2, 1}), x).verdict == Feasibility::Infeasible);
    CHECK(direction_feasible(OrderedQuery::make(s, {2, 1, 0}), x.antipode()).feasible());
    // across the axis the disks are far apart: infeasible, tie or not
    CHECK(direction_feasible(OrderedQuery::make(s, {0, 1, 2}), Direction::axis(3, 1)).verdict ==
          Feasibility::Infeasible);
    // a tie with meeting disks needs overlapping balls
    const Scene over = make_scene(3, {{Vec(Vector3d(0, 0, 0)), 1}, {Vec(Vector3d(1.5, 0, 0)), 1}}, true);
    const auto tie = direction_feasible(OrderedQuery::make(over, {0, 1}), Direction::axis(3, 1));
    CHECK(tie.verdict == Feasibility::Indeterminate);
    CHECK(tie.tie);
    CHECK_THROWS_AS(OrderedQuery::make(s, {0, 1, 1}), GeometryError);
  }

  TEST_CASE("library feasibility agrees with the projection oracle") {
    Rng rng(1);
    int decided = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Scene s = transversal_scene(seed, 4).scene;
      for (int k = 0; k < 200; ++k) {
        const Vec u = random_unit_vector(3, rng);
        const double brute = oracle_slack(s, u);
        if (std::abs(brute) < 1e-7) continue;
        ++decided;
        CHECK(scene_direction_feasible(s, Direction(u)).feasible() == (brute < 0));
      }
    }
    CHECK(decided > 1900);
  }

  TEST_CASE("nudging across boundary points") {
    int nudged = 0;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
      const GeneratedScene gs = transversal_scene(seed);
      const auto q = OrderedQuery::make(gs.scene, gs.construction_order);
      Rng rng(seed);
      for (const BoundarySample& b : sample_cone_boundary(q, gs.construction_direction->vec(), 20, rng)) {
        REQUIRE(direction_feasible(q, Direction(b.direction)).feasible());
        REQUIRE_FALSE(direction_feasible(q, Direction(b.outside)).feasible());
        // step 1e-4 rad either way along the crossing ray
        Vec t = b.outside - b.direction;
        t -= t.dot(b.direction) * b.direction;
        if (t.norm() == 0) continue;
        t.normalize();
        const Vec in = move_along(b.direction, -t, 1e-4), out = move_along(b.direction, t, 1e-4);
        const double si = oracle_slack(gs.scene, in), so = oracle_slack(gs.scene, out);
        if (std::abs(si) > 1e-9) CHECK(direction_feasible(q, Direction(in)).feasible() == (si < 0));
        if (std::abs(so) > 1e-9) CHECK(direction_feasible(q, Direction(out)).feasible() == (so < 0));
        CHECK(si < 1e-9);
        ++nudged;
      }
    }
    CHECK(nudged > 100);
  }

  TEST_CASE("nudging a traced sextic boundary along the gradient") {
    // directions on sigma where exactly three disks are active bound the cone;
    // the gradient of the slack there is normal to the sextic
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 20 && checked < 40; ++seed) {
      const GeneratedScene gs = transversal_scene(seed);
      const Triple t = Triple::from_scene(gs.scene);
      const SexticModel m(t);
      TraceOptions o;
      o.chart = Chart::coordinate(2);
      o.half_width = 4;
      o.resolution = 120;
      const TraceSet ts = trace_curves(t, o);
      const CurveTrace* c = ts.find("sigma");
      if (!c) continue;
      for (const auto& line : c->polylines)
        for (std::size_t k = 0; k < line.points.size(); k += 7) {
          const Vector3d u = o.chart.at(line.points[k].x(), line.points[k].y()).normalized();
          const auto v = scene_direction_feasible(gs.scene, Direction(Vec(u)));
          if (v.active.size() < 3 || std::abs(v.slack) > 1e-9) continue;
          Vector3d g = m.gradient(u);
          g -= g.dot(u) * u;
          g.normalize();
          const double sp = oracle_slack(gs.scene, (u + 1e-5 * g).normalized());
          const double sm = oracle_slack(gs.scene, (u - 1e-5 * g).normalized());
          // one side feasible, the other not
          CHECK(sp * sm < 0);
          const Direction inside(Vec((u + (sp < 0 ? 1e-5 : -1e-5) * g).normalized()));
          const Direction outside(Vec((u + (sp < 0 ? -1e-5 : 1e-5) * g).normalized()));
          CHECK(scene_direction_feasible(gs.scene, inside).feasible());
          CHECK_FALSE(scene_direction_feasible(gs.scene, outside).feasible());
          ++checked;
        }
    }
    CHECK(checked >= 20);
  }

  TEST_CASE("reversal symmetry") {
    Rng rng(5);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GeneratedScene gs = transversal_scene(seed, 4);
      const auto q = OrderedQuery::make(gs.scene, gs.construction_order);
      const auto r = q.reversed();
      for (int k = 0; k < 300; ++k) {
        const Vec u = k % 2 ? random_unit_vector(3, rng) : cap_sample(gs.construction_direction->vec(), 0.3, rng);
        const auto a = direction_feasible(q, Direction(u)), b = direction_feasible(r, Direction(-u));
        CHECK(a.verdict == b.verdict);
        CHECK(a.slack == doctest::Approx(b.slack).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("Helly consistency over triples") {
    Rng rng(6);
    int mismatches = 0, feasible = 0;
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const GeneratedScene gs = transversal_scene(seed, 5);
      for (int k = 0; k < 200; ++k) {
        const Vec u = k % 2 ? random_unit_vector(3, rng) : cap_sample(gs.construction_direction->vec(), 0.3, rng);
        const auto all = scene_direction_feasible(gs.scene, Direction(u));
        if (std::abs(all.slack) < 1e-9) continue;
        bool each = true;
        for (int i = 0; i < 5; ++i)
          for (int j = i + 1; j < 5; ++j)
            for (int l = j + 1; l < 5; ++l) {
              const Scene sub = make_scene(3, {gs.scene.balls[i], gs.scene.balls[j], gs.scene.balls[l]});
              each = each && scene_direction_feasible(sub, Direction(u)).feasible();
            }
        mismatches += each != all.feasible();
        feasible += all.feasible();
      }
    }
    CHECK(mismatches == 0);
    CHECK(feasible > 50);
  }

  TEST_CASE("convexity holds for disjoint scenes") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const GeneratedScene gs = transversal_scene(seed, seed % 2 ? 3 : 5, seed % 2 ? 3 : 4);
      ConvexityOptions o;
      o.pairs = 300;
      o.seed = seed;
      o.hint = gs.construction_direction->vec();
      const auto r = cone_convexity_check(OrderedQuery::make(gs.scene, gs.construction_order), o);
      CHECK_FALSE(r.inconclusive);
      CHECK(r.violations == 0);
      CHECK(r.pairs_tested >= 290);
      CHECK(r.min_midpoint_depth > 0);
    }
    ConvexityOptions o;
    o.pairs = 500;
    const auto d = cone_convexity_check(OrderedQuery::make(data_scene("sweep_disjoint.json"), {0, 1, 2}), o);
    CHECK(d.violations == 0);
  }

  TEST_CASE("convexity fails once two balls overlap") {
    ConvexityOptions o;
    o.pairs = 3333;
    const auto r = cone_convexity_check(OrderedQuery::make(data_scene("sweep_overlap.json"), {0, 1, 2}), o);
    CHECK(r.violations > 0);
    REQUIRE_FALSE(r.witnesses.empty());
    const auto& w = r.witnesses.front();
    CHECK(angle_between(w.first, w.midpoint) == doctest::Approx(angle_between(w.midpoint, w.second)).epsilon(1e-9));
    if (w.kind == "infeasible midpoint") {
      CHECK(w.slack > 0);
      CHECK(oracle_slack(data_scene("sweep_overlap.json"), w.midpoint) > 0);
    }
  }

  TEST_CASE("too few feasible samples is inconclusive") {
    // the pinned scene has a single transversal direction
    ConvexityOptions o;
    o.pairs = 10;
    o.search_samples = 2000;
    const auto r = cone_convexity_check(OrderedQuery::make(data_scene("pinned.json"), {0, 1, 2}), o);
    CHECK(r.inconclusive);
  }

  TEST_CASE("permutations and components") {
    SamplingOptions so;
    so.samples = 20000;
    const Scene col = data_scene("collinear.json");
    const auto cat = enumerate_geometric_permutations(col, so);
    REQUIRE(cat.size() == 1);
    CHECK(cat.permutations[0].order == std::vector<int>{0, 1, 2});
    CHECK(count_components(col, so).components == 1);
    CHECK(canonical_permutation({2, 1, 0}) == std::vector<int>{0, 1, 2});
    CHECK(canonical_permutation({1, 0, 2}) == std::vector<int>{1, 0, 2});
    CHECK(canonical_permutation({2, 0, 1}) == std::vector<int>{1, 0, 2});

    so.samples = 40000;
    int two = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      SceneGenOptions g;
      g.seed = seed;
      g.layout = SceneLayout::Triangle;
      const Scene tri = random_disjoint_scene(g).scene;
      const auto rep = count_components(tri, so);
      CHECK(rep.catalog.size() == 3);
      CHECK(rep.components == 3);
      for (const auto& p : rep.catalog.permutations)
        CHECK(direction_feasible(OrderedQuery::make(tri, p.order), Direction(p.witness)).feasible());

      g.layout = SceneLayout::Corridors;
      g.n = 4 + static_cast<int>(seed % 2);
      const auto cor = count_components(random_disjoint_scene(g).scene, so);
      CHECK(cor.matches_catalog);
      CHECK(cor.components == static_cast<int>(cor.catalog.size()));
      two += cor.components == 2;
    }
    CHECK(two >= 2);
  }

  TEST_CASE("pinned planar predicate") {
    const Triple pinned = Triple::from_scene(data_scene("pinned.json"));
    const PinnedResult p = pinned_planar_tritangent(pinned);
    REQUIRE(p.pinned);
    CHECK(is_pinned_planar(pinned));
    for (int k = 0; k < 3; ++k) CHECK(distance_point_line(pinned.centers[k], p.line) == doctest::Approx(pinned.radii[k]));
    FeasibilityOptions fo;
    fo.tol = 1e-9;
    const auto q = OrderedQuery::make(data_scene("pinned.json"), {0, 1, 2});
    CHECK(direction_feasible(q, Direction(Vec(p.line.direction)), fo).feasible());
    CHECK(find_feasible_directions(q, 100000, 7).empty());

    CHECK_FALSE(is_pinned_planar(Triple::from_scene(data_scene("collinear.json"))));
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      CHECK_FALSE(is_pinned_planar(Triple::from_scene(transversal_scene(seed).scene)));
  }

  TEST_CASE("boundary classification along traced sextic points") {
    int on = 0, off = 0, stabbing = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Triple t = Triple::from_scene(transversal_scene(seed).scene);
      TraceOptions o;
      o.chart = Chart::coordinate(2);
      o.half_width = 4;
      o.resolution = 100;
      const TraceSet ts = trace_curves(t, o);
      const CurveTrace* c = ts.find("sigma");
      if (!c) continue;
      for (const auto& line : c->polylines)
        for (std::size_t k = 0; k < line.points.size(); k += 11) {
          const Vector3d u = o.chart.at(line.points[k].x(), line.points[k].y());
          const auto b = classify_boundary_direction(t, u, seed);
          if (b.skipped) continue;
          CHECK(b.consistent);
          if (b.on_boundary) {
            ++on;
            CHECK(b.empirical_on_boundary);
          } else {
            ++off;
            if (b.stabbing_line) {
              ++stabbing;
              // the stabbing line meets all three open balls
              for (int i = 0; i < 3; ++i) CHECK(distance_point_line(t.centers[i], *b.stabbing_line) < t.radii[i]);
            }
          }
        }
    }
    CHECK(on > 5);
    CHECK(off > 5);
    CHECK(stabbing > 0);
    const auto col = classify_boundary_direction(Triple::from_scene(data_scene("collinear.json")), Vector3d(1, 0, 0));
    CHECK(col.skipped);
    CHECK_FALSE(col.tag.empty());
  }
}
