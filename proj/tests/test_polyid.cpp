#include <doctest.h>

#include <cmath>

#include "ballcone/flexprobe.hpp"
#include "ballcone/polyid.hpp"

using namespace ballcone;

namespace {

const IdentitySpec& by_id(const std::vector<IdentitySpec>& cat, const std::string& id) {
  for (const auto& s : cat)
    if (s.id == id) return s;
  throw std::runtime_error("no identity " + id);
}

MultiPoint q_point(ExactScalar q0, ExactScalar q1, ExactScalar q2) { return {{"q0", q0}, {"q1", q1}, {"q2", q2}}; }

}  // namespace

TEST_SUITE("polyid") {
  TEST_CASE("catalog") {
    const auto cat = identity_catalog();
    CHECK(cat.size() == 6);
    for (const auto& s : cat) {
      CHECK_FALSE(s.constants.empty());
      CHECK(s.degree_bound > 0);
      CHECK_FALSE(s.variables.empty());
    }
  }

  TEST_CASE("rationals stay canonical") {
    ExactScalar x(6, -4);
    x.canonicalize();
    CHECK(x.get_num() == -3);
    CHECK(x.get_den() == 2);
    CHECK(ExactScalar(1, 3) + ExactScalar(1, 6) == ExactScalar(1, 2));
  }

  TEST_CASE("symmetric evaluations") {
    const auto cat = identity_catalog();
    const auto v = check_identity(by_id(cat, "vertex-factorization"), q_point(1, 1, 1));
    CHECK(v.equal);
    CHECK(v.lhs.front() == ExactScalar(3, 4));
    CHECK(v.rhs.front() == ExactScalar(3, 4));

    const auto b = check_identity(by_id(cat, "beta-pairs"), q_point(1, 1, 1));
    CHECK(b.equal);
    CHECK(b.lhs.front() == ExactScalar(27, 64));

    const auto p = check_identity(by_id(cat, "symmetric-plane"), {{"q0", ExactScalar(7, 3)}});
    CHECK(p.equal);
    CHECK(p.rhs.front() == ExactScalar(15, 8));

    // centroid of an isosceles triangle (the equilateral one is irrational)
    const ExactScalar third(1, 3);
    const MultiPoint iso{{"a", 2}, {"b", 1}, {"c", 1}, {"p0", third}, {"p1", third}, {"p2", third}};
    const auto d = check_identity(by_id(cat, "delta-q"), iso);
    CHECK(d.equal);
    CHECK(d.lhs.front() == 4);
    CHECK(check_identity(by_id(cat, "gram"), iso).equal);
    // floating equilateral: a^2 c^2 = 3/4
    const auto eq = LiftedConfig::make(1, 0.5, std::sqrt(3.0) / 2, {1, 1, 1}, {0, 0, 0});
    CHECK(q_invariant(eq).delta == doctest::Approx(0.75));
  }

  TEST_CASE("master identity at random points of height 100") {
    const auto cat = identity_catalog();
    const auto& spec = by_id(cat, "hessian-decomposition");
    Rng rng(17);
    for (int t = 0; t < 5; ++t) {
      const MultiPoint pt = spec.sample(rng, 100);
      const auto v = check_identity(spec, pt);
      CHECK(v.equal);
    }
  }

  TEST_CASE("exact and floating expansions agree") {
    const auto cat = identity_catalog();
    const auto& spec = by_id(cat, "hessian-decomposition");
    Rng rng(23);
    for (int t = 0; t < 5; ++t) {
      const MultiPoint pt = spec.sample(rng, 50);
      auto d = [&](const char* n) { return pt.at(n).get_d(); };
      const auto cfg = LiftedConfig::make(d("a"), d("b"), d("c"), {d("p0"), d("p1"), d("p2")}, {d("x0"), d("x1"), d("x2")});
      const SexticModel m(cfg.lifted_triple());
      const TernaryForm<ExactScalar> exact = exact_lifted_sextic(pt);
      for (const auto& u : {Vector3d(0.3, -0.4, 1.0), Vector3d(1, 2, 3), Vector3d(-1, 0.5, 0.25)}) {
        const double want = exact(u[0], u[1], u[2]).get_d();
        CHECK(std::abs(m.value(u) - want) <= 1e-12 * m.coefficient_norm() * std::pow(u.norm(), 6));
      }
      const double h = exact_hessian_at_pole(exact).get_d();
      CHECK(m.hessian(Vector3d(0, 0, 1)) == doctest::Approx(h).epsilon(1e-8));
    }
  }

  TEST_CASE("mutated constants are caught") {
    const auto cat = identity_catalog();
    const auto& vf = by_id(cat, "vertex-factorization");
    const auto bad = mutate_constant(vf, 0, 2);
    const MultiPoint pt = q_point(ExactScalar(3, 2), ExactScalar(5, 4), 2);
    const auto v = check_identity(bad, pt);
    CHECK_FALSE(v.equal);
    CHECK(v.witness == pt);

    const auto suite = schwartz_zippel_suite(3, 100, 5, {bad});
    REQUIRE(suite.identities.size() == 1);
    CHECK(suite.identities[0].passed == 0);
    CHECK_FALSE(suite.identities[0].witnesses.empty());
    CHECK_FALSE(suite.all_pass());

    // every constant of every identity matters
    Rng rng(3);
    for (const auto& spec : cat)
      for (std::size_t k = 0; k < spec.constants.size(); ++k) {
        const auto m = mutate_constant(spec, k, spec.constants[k].value + 1);
        const MultiPoint p = spec.sample(rng, 50);
        CHECK_MESSAGE(!check_identity(m, p).equal, spec.id << " constant " << spec.constants[k].name);
      }
  }

  TEST_CASE("domain is enforced before evaluation") {
    const auto cat = identity_catalog();
    CHECK_THROWS_AS(check_identity(by_id(cat, "vertex-factorization"), q_point(1, 1, 3)), DomainError);
    CHECK_THROWS_AS(check_identity(by_id(cat, "vertex-factorization"), {{"q0", 1}, {"q1", 1}}), DomainError);
    const ExactScalar third(1, 3);
    // weights must sum to one for the master identity
    CHECK_THROWS_AS(check_identity(by_id(cat, "hessian-decomposition"),
                                   {{"a", 2}, {"b", 1}, {"c", 1}, {"p0", 1}, {"p1", 1}, {"p2", 1}, {"x0", 0}, {"x1", 1}, {"x2", 2}}),
                    DomainError);
    CHECK_THROWS_AS(check_identity(by_id(cat, "gram"), {{"a", -2}, {"b", 1}, {"c", 1}, {"p0", third}, {"p1", third}, {"p2", third}}),
                    DomainError);
    CHECK_THROWS_AS(schwartz_zippel_suite(0, 100, 1), DomainError);
  }

  TEST_CASE("suite is deterministic and a single trial passes") {
    const auto a = to_json(schwartz_zippel_suite(3, 100, 42)).dump();
    const auto b = to_json(schwartz_zippel_suite(3, 100, 42)).dump();
    CHECK(a == b);
    const auto one = schwartz_zippel_suite(1, 1000, 9);
    CHECK(one.all_pass());
    for (const auto& r : one.identities) {
      CHECK(r.trials == 1);
      CHECK(r.passed == 1);
      CHECK(r.failure_bound <= 1.0);
    }
  }

  TEST_CASE("random rationals respect the height") {
    Rng rng(1);
    for (int t = 0; t < 500; ++t) {
      const ExactScalar x = random_positive_rational(rng, 10);
      CHECK(x > 0);
      CHECK(x.get_num() <= 10);
      CHECK(x.get_den() <= 10);
    }
  }
}
