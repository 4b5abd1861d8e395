#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ballcone/geom.hpp"
#include "ballcone/sextic.hpp"
#include "ballcone/sphere.hpp"
#include "ballcone/trace.hpp"
#include "oracles.hpp"

using namespace ballcone;

namespace {

Triple collinear_triple() { return Triple::make({Vector3d(0, 0, 0), Vector3d(4, 0, 0), Vector3d(8, 0, 0)}, {1, 1, 1}); }

Triple random_triple(std::uint64_t seed, bool transversal = false) {
  SceneGenOptions g;
  g.seed = seed;
  g.r_min = 0.5;
  g.r_max = 1.5;
  g.with_transversal = transversal;
  return Triple::from_scene(random_disjoint_scene(g).scene);
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// lines of a traced sigma curve, as directions
std::vector<Vector3d> sigma_directions(const Triple& t, int axis, double half_width, int resolution = 160) {
  TraceOptions o;
  o.chart = Chart::coordinate(axis);
  o.half_width = half_width;
  o.resolution = resolution;
  const TraceSet ts = trace_curves(t, o);
  std::vector<Vector3d> out;
  if (const CurveTrace* c = ts.find("sigma"))
    for (const auto& line : c->polylines)
      for (const auto& p : line.points) out.push_back(o.chart.at(p.x(), p.y()));
  return out;
}

}  // namespace

TEST_SUITE("sextic") {
  TEST_CASE("axis direction of the collinear triple is on sigma") {
    const Triple t = collinear_triple();
    const SexticModel m(t);
    CHECK(std::abs(eval_sigma(t, Vector3d(1, 0, 0))) <= 1e-12 * m.coefficient_norm());
    CHECK(std::abs(m.value(Vector3d(1, 0, 0))) <= 1e-12 * m.coefficient_norm());
    // the lines y^2 + z^2 = 1 along x touch all three spheres
    for (double a : {0.0, 0.7, 2.0}) {
      const Line3 l{Vector3d(0, std::cos(a), std::sin(a)), Vector3d(1, 0, 0)};
      for (int k = 0; k < 3; ++k) CHECK(distance_point_line(t.centers[k], l) == doctest::Approx(1.0));
    }
    CHECK(t.collinear());
  }

  TEST_CASE("homogeneity, relabeling, translation and rotation") {
    Rng rng(3);
    for (std::uint64_t s = 0; s < 25; ++s) {
      const Triple t = random_triple(s);
      const SexticModel m(t);
      const Vector3d u = random_unit_vector(3, rng);
      const double v = eval_sigma(t, u);
      CHECK(rel(eval_sigma(t, 2 * u), 64 * v) < 1e-10);
      CHECK(rel(m.hessian(2 * u), 4096 * m.hessian(u)) < 1e-10);
      CHECK(rel(m.value(u), v) < 1e-10);

      std::array<int, 3> perm{0, 1, 2};
      do {
        const Triple p = Triple::make({t.centers[perm[0]], t.centers[perm[1]], t.centers[perm[2]]},
                                      {t.radii[perm[0]], t.radii[perm[1]], t.radii[perm[2]]});
        CHECK(rel(eval_sigma(p, u), v) < 1e-9);
      } while (std::next_permutation(perm.begin(), perm.end()));

      const Vector3d shift(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5));
      const Triple moved = Triple::make({t.centers[0] + shift, t.centers[1] + shift, t.centers[2] + shift}, t.radii);
      CHECK(rel(eval_sigma(moved, u), v) < 1e-9);

      const Eigen::Matrix3d q = random_rotation(3, rng);
      const Triple turned = Triple::make({q * t.centers[0], q * t.centers[1], q * t.centers[2]}, t.radii);
      CHECK(rel(eval_sigma(turned, q * u), v) < 1e-9);
    }
  }

  TEST_CASE("matches an independent determinant") {
    Rng rng(8);
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Triple t = random_triple(100 + s);
      const SexticModel m(t);
      for (int k = 0; k < 5; ++k) {
        const Vector3d u = random_unit_vector(3, rng);
        const double want = oracle::sigma_value(t.centers, t.radii, u);
        CHECK(std::abs(m.value(u) - want) <= 1e-10 * m.coefficient_norm());
        CHECK(std::abs(eval_sigma(t, u) - want) <= 1e-10 * m.coefficient_norm());
      }
    }
  }

  TEST_CASE("exact Hessian against central differences") {
    Rng rng(12);
    int compared = 0;
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Triple t = random_triple(200 + s);
      const SexticModel m(t);
      const Vector3d u = random_unit_vector(3, rng);
      auto f = [&](const Vector3d& x) { return oracle::sigma_value(t.centers, t.radii, x); };
      // Richardson on two steps
      const Eigen::Matrix3d h1 = oracle::fd_hessian(f, u, 1e-3), h2 = oracle::fd_hessian(f, u, 5e-4);
      const Eigen::Matrix3d fd = (4 * h2 - h1) / 3;
      const Eigen::Matrix3d ex = m.hessian_matrix(u);
      CHECK((fd - ex).norm() <= 1e-6 * ex.norm());
      const double scale = std::pow(ex.norm(), 3);
      if (std::abs(ex.determinant()) > 1e-3 * scale) {
        CHECK(rel(fd.determinant(), m.hessian(u)) < 1e-5);
        ++compared;
      }
      CHECK(rel(eval_hessian_sigma(t, u), m.hessian(u)) < 1e-9);
    }
    CHECK(compared >= 10);
  }

  TEST_CASE("Hessian vanishes along the axis of the collinear triple") {
    // projecting along the axis collapses the triangle of centers, and the
    // lifted decomposition carries the factor a^6 c^6
    const SexticModel m(collinear_triple());
    const Eigen::Matrix3d h = m.hessian_matrix(Vector3d(1, 0, 0));
    CHECK(std::abs(h.determinant()) <= 1e-12 * std::pow(h.norm(), 3) + 1e-300);
  }

  TEST_CASE("tangent lines for the collinear triple form a circle") {
    const TangentSet ts = tangent_lines_for_direction(collinear_triple(), Vector3d(1, 0, 0));
    REQUIRE(ts.family);
    CHECK(ts.family->radius == doctest::Approx(1.0));
    CHECK(std::abs(ts.family->normal.dot(Vector3d(1, 0, 0))) == doctest::Approx(1.0));
    CHECK(ts.family->center.tail<2>().norm() < 1e-12);
    CHECK(ts.rank < 3);
  }

  TEST_CASE("tangent lines off sigma are refused") {
    const Triple t = collinear_triple();
    CHECK_THROWS_AS(tangent_lines_for_direction(t, Vector3d(0, 0, 1)), PreconditionError);
    CHECK_THROWS_AS(tangent_lines_for_direction(t, Vector3d(1, 0.3, 0.2)), PreconditionError);
  }

  TEST_CASE("recovered tangent lines touch all three spheres") {
    int lines = 0, triples = 0;
    for (std::uint64_t s = 0; s < 40 && triples < 8; ++s) {
      const Triple t = random_triple(300 + s, true);
      const auto dirs = sigma_directions(t, 2, 4.0);
      if (dirs.size() < 20) continue;
      ++triples;
      for (std::size_t k = 0; k < dirs.size(); k += dirs.size() / 20) {
        const TangentSet ts = tangent_lines_for_direction(t, dirs[k]);
        for (const Line3& l : ts.lines) {
          ++lines;
          CHECK(std::abs(l.direction.dot(dirs[k].normalized())) == doctest::Approx(1.0));
          for (int b = 0; b < 3; ++b) CHECK(std::abs(distance_point_line(t.centers[b], l) - t.radii[b]) <= 1e-8);
        }
      }
    }
    CHECK(triples >= 5);
    CHECK(lines >= 100);
  }

  TEST_CASE("pair cone quadratic") {
    const Ball a{Vec(Vector3d(0, 0, 0)), 1.0}, b{Vec(Vector3d(4, 0, 0)), 1.0};
    const QuadraticFormOnDirections m = pair_cone_quadratic(a, b);
    CHECK_FALSE(m.degenerate);
    // half-angle 30 degrees about the axis
    for (double deg : {0.0, 10.0, 29.0, 29.9, 30.1, 31.0, 60.0, 90.0}) {
      const double th = deg * 3.14159265358979323846 / 180;
      const Vector3d u(std::cos(th), std::sin(th) * 0.6, std::sin(th) * 0.8);
      CHECK((m(u) < 0) == (deg < 30));
      const double brute = oracle::line_slack({Vector3d(0, 0, 0), Vector3d(4, 0, 0)}, {1, 1}, u);
      CHECK((brute <= 0) == (deg < 30));
    }
    CHECK(m(Vector3d(1, 0, 0)) == doctest::Approx(-4.0));
    CHECK(m(Vector3d(0, 1, 0)) == doctest::Approx(16.0 - 4.0));

    Rng rng(4);
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Triple t = random_triple(400 + s);
      const auto q = pair_cone_quadratic(Ball{Vec(t.centers[0]), t.radii[0]}, Ball{Vec(t.centers[1]), t.radii[1]});
      const Vector3d e = t.edge(0, 1).normalized();
      CHECK(q(e) == doctest::Approx(-std::pow(t.radii[0] + t.radii[1], 2)));
      const Vector3d perp = e.unitOrthogonal();
      CHECK(q(perp) == doctest::Approx(t.squared_edge(0, 1) - std::pow(t.radii[0] + t.radii[1], 2)));
      CHECK(q(perp) > 0);
      for (int k = 0; k < 10; ++k) {
        const Vector3d u = random_unit_vector(3, rng);
        const double brute = oracle::line_slack({t.centers[0], t.centers[1]}, {t.radii[0], t.radii[1]}, u);
        if (std::abs(brute) > 1e-6) CHECK((q(u) < 0) == (brute < 0));
      }
    }
    const auto over = pair_cone_quadratic(a, Ball{Vec(Vector3d(1.5, 0, 0)), 1.0});
    CHECK(over.degenerate);
  }

  TEST_CASE("traced sigma points are roots") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Triple t = random_triple(500 + s, true);
      const SexticModel m(t);
      for (int axis = 0; axis < 3; ++axis)
        for (const Vector3d& u : sigma_directions(t, axis, 3.0, 100)) CHECK(m.relative_value(u) <= 1e-8);
    }
  }

  TEST_CASE("collinear pair conics are concentric circles") {
    TraceOptions o;
    o.chart = Chart::coordinate(0);
    o.half_width = 1.5;
    o.resolution = 150;
    const TraceSet ts = trace_curves(collinear_triple(), o);
    // distance d between centers: circle radius 2 / sqrt(d^2 - 4)
    const std::pair<const char*, double> expect[] = {{"conic01", 4}, {"conic02", 8}, {"conic12", 4}};
    for (const auto& [name, d] : expect) {
      const CurveTrace* c = ts.find(name);
      REQUIRE(c);
      REQUIRE_FALSE(c->polylines.empty());
      for (const auto& line : c->polylines)
        for (const auto& p : line.points) CHECK(p.norm() == doctest::Approx(2 / std::sqrt(d * d - 4)).epsilon(1e-9));
    }
  }

  TEST_CASE("chart coordinates invert chart points") {
    for (int axis = 0; axis < 3; ++axis) {
      const Chart c = Chart::coordinate(axis);
      const Vector3d u = c.at(0.3, -1.2);
      CHECK(u[axis] == 1.0);
      const auto xy = c.coordinates(-2.0 * u);
      REQUIRE(xy);
      CHECK(xy->x() == doctest::Approx(0.3));
      CHECK(xy->y() == doctest::Approx(-1.2));
    }
  }
}
