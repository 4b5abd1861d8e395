#include "ballcone/polyid.hpp"

#include <algorithm>
#include <cmath>

#include "ballcone/flexprobe.hpp"
#include "ballcone/sextic.hpp"

namespace ballcone {
namespace {

using Q = ExactScalar;

const Q& var(const MultiPoint& pt, const std::string& name) {
  auto it = pt.find(name);
  if (it == pt.end()) throw DomainError("missing variable " + name);
  return it->second;
}

Q signed_rational(Rng& rng, int height) {
  Q v = random_positive_rational(rng, height);
  return rng.integer(0, 1) ? Q(v) : Q(-v);
}

// Weights p0, p1, p2 > 0 with sum 1.
void sample_weights(MultiPoint& pt, Rng& rng, int height) {
  const Q w0 = random_positive_rational(rng, height), w1 = random_positive_rational(rng, height),
          w2 = random_positive_rational(rng, height);
  const Q sum = w0 + w1 + w2;
  pt["p0"] = w0 / sum;
  pt["p1"] = w1 / sum;
  pt["p2"] = w2 / sum;
}

void sample_triangle(MultiPoint& pt, Rng& rng, int height) {
  pt["a"] = random_positive_rational(rng, height);
  pt["b"] = signed_rational(rng, height);
  pt["c"] = random_positive_rational(rng, height);
}

bool normalized_weights(const MultiPoint& pt) {
  const Q &p0 = var(pt, "p0"), &p1 = var(pt, "p1"), &p2 = var(pt, "p2");
  return p0 > 0 && p1 > 0 && p2 > 0 && p0 + p1 + p2 == 1;
}

bool triangle_domain(const MultiPoint& pt) { return var(pt, "a") > 0 && var(pt, "c") > 0; }

// q satisfying the strict triangle inequality.
bool q_triangle(const MultiPoint& pt) {
  const Q &q0 = var(pt, "q0"), &q1 = var(pt, "q1"), &q2 = var(pt, "q2");
  return q0 > 0 && q1 > 0 && q2 > 0 && q0 + q1 > q2 && q1 + q2 > q0 && q0 + q2 > q1;
}

MultiPoint sample_q(Rng& rng, int height) {
  for (;;) {
    MultiPoint pt;
    pt["q0"] = random_positive_rational(rng, height);
    pt["q1"] = random_positive_rational(rng, height);
    pt["q2"] = random_positive_rational(rng, height);
    if (q_triangle(pt)) return pt;
  }
}

struct Planar {
  std::array<std::array<Q, 2>, 3> vertex;
  std::array<Q, 3> p;
  std::array<Q, 2> point;
  std::array<Q, 3> s;   // |point - vertex_k|^2
  std::array<Q, 3> q2;  // p_k^2 s_k
};

Planar planar_from(const MultiPoint& pt) {
  Planar g;
  g.vertex = {{{Q(0), Q(0)}, {var(pt, "a"), Q(0)}, {var(pt, "b"), var(pt, "c")}}};
  g.p = {var(pt, "p0"), var(pt, "p1"), var(pt, "p2")};
  const Q sum = g.p[0] + g.p[1] + g.p[2];
  for (int a = 0; a < 2; ++a) g.point[a] = (g.p[0] * g.vertex[0][a] + g.p[1] * g.vertex[1][a] + g.p[2] * g.vertex[2][a]) / sum;
  for (int k = 0; k < 3; ++k) {
    const Q dx = g.point[0] - g.vertex[k][0], dy = g.point[1] - g.vertex[k][1];
    g.s[k] = dx * dx + dy * dy;
    g.q2[k] = g.p[k] * g.p[k] * g.s[k];
  }
  return g;
}

Q det3(const std::array<std::array<Q, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::array<Q, 3> q_of(const MultiPoint& pt) { return {var(pt, "q0"), var(pt, "q1"), var(pt, "q2")}; }

std::array<Q, 3> canonical_a(const std::array<Q, 3>& q, const Q& big_q) {
  std::array<Q, 3> a;
  for (int k = 0; k < 3; ++k) {
    const Q& qi = q[kOpposite[k][0]];
    const Q& qj = q[kOpposite[k][1]];
    a[k] = big_q / (4 * qi * qi * qj * qj);
  }
  return a;
}

std::array<Q, 3> octant_vertex(const std::array<Q, 3>& q) {
  std::array<Q, 3> v;
  for (int k = 0; k < 3; ++k) {
    const Q d = (q[kOpposite[k][0]] - q[kOpposite[k][1]]) / q[k];
    v[k] = 1 - d * d;
  }
  return v;
}

Q big_q_of(const std::array<Q, 3>& q) {
  return q_from_squares<Q>({q[0] * q[0], q[1] * q[1], q[2] * q[2]});
}

Q star_h(const std::array<Q, 3>& a, const std::array<Q, 3>& w) {
  return w[0] * w[1] + w[1] * w[2] + w[0] * w[2] - (a[0] * w[0] + a[1] * w[1] + a[2] * w[2]);
}

const Q& constant(const std::vector<NamedConstant>& c, std::size_t k) { return c.at(k).value; }

}  // namespace

ExactScalar random_positive_rational(Rng& rng, int height) {
  const auto h = std::max(1, height);
  const auto num = rng.integer(1, h);
  const auto den = rng.integer(1, h);
  Q v{mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))};
  v.canonicalize();
  return v;
}

TernaryForm<ExactScalar> exact_lifted_sextic(const MultiPoint& pt) {
  const Planar g = planar_from(pt);
  const std::array<Q, 3> x{var(pt, "x0"), var(pt, "x1"), var(pt, "x2")};
  std::array<std::array<Q, 3>, 3> centers;
  for (int k = 0; k < 3; ++k) centers[k] = {g.vertex[k][0], g.vertex[k][1], x[k]};
  return expand_direction_sextic<Q>(centers, g.s);
}

ExactScalar exact_hessian_at_pole(const TernaryForm<ExactScalar>& form) {
  std::array<TernaryForm<Q>, 3> first;
  for (int a = 0; a < 3; ++a) first[a] = form.derivative(a);
  std::array<std::array<Q, 3>, 3> h;
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) h[a][b] = h[b][a] = first[a].derivative(b)(Q(0), Q(0), Q(1));
  return det3(h);
}

std::vector<IdentitySpec> identity_catalog() {
  std::vector<IdentitySpec> cat;
  const std::vector<std::string> lifted_vars{"a", "b", "c", "p0", "p1", "p2", "x0", "x1", "x2"};
  const std::vector<std::string> planar_vars{"a", "b", "c", "p0", "p1", "p2"};

  {
    IdentitySpec s;
    s.id = "hessian-decomposition";
    s.title = "H(sigma)(0,0,1) = 2^12 5^2 a^6 c^6 (H2 + H4) for the lifted triple";
    s.variables = lifted_vars;
    s.domain = "a > 0, c > 0, p_k > 0, sum p_k = 1";
    s.degree_bound = 48;
    s.constants = {{"2^12 5^2", Q(102400)}};
    s.lhs = [](const MultiPoint& pt) { return std::vector<Q>{exact_hessian_at_pole(exact_lifted_sextic(pt))}; };
    s.rhs = [](const MultiPoint& pt, const std::vector<NamedConstant>& c) {
      const Planar g = planar_from(pt);
      const std::array<Q, 3> x{var(pt, "x0"), var(pt, "x1"), var(pt, "x2")};
      const Q a = var(pt, "a"), cc = var(pt, "c");
      const Q a2c2 = a * a * cc * cc;
      const auto h = lifted_h2_h4<Q>(a2c2, g.p, g.s, x);
      return std::vector<Q>{constant(c, 0) * a2c2 * a2c2 * a2c2 * (h[0] + h[1])};
    };
    s.in_domain = [](const MultiPoint& pt) { return triangle_domain(pt) && normalized_weights(pt); };
    s.sample = [](Rng& rng, int height) {
      MultiPoint pt;
      sample_triangle(pt, rng, height);
      sample_weights(pt, rng, height);
      pt["x0"] = signed_rational(rng, height);
      pt["x1"] = signed_rational(rng, height);
      pt["x2"] = signed_rational(rng, height);
      return pt;
    };
    cat.push_back(std::move(s));
  }
  {
    IdentitySpec s;
    s.id = "delta-q";
    s.title = "a^2 c^2 = Q / (4 prod p_k^2), Q = sum (2 q_i^2 q_j^2 - q_k^4)";
    s.variables = planar_vars;
    s.domain = "a > 0, c > 0, p_k > 0, sum p_k = 1";
    s.degree_bound = 16;
    s.constants = {{"4", Q(4)}, {"2 (in Q)", Q(2)}};
    s.lhs = [](const MultiPoint& pt) {
      const Q a = var(pt, "a"), c = var(pt, "c");
      return std::vector<Q>{a * a * c * c};
    };
    s.rhs = [](const MultiPoint& pt, const std::vector<NamedConstant>& c) {
      const Planar g = planar_from(pt);
      const auto& q2 = g.q2;
      const Q big_q = constant(c, 1) * (q2[0] * q2[1] + q2[1] * q2[2] + q2[0] * q2[2]) -
                      (q2[0] * q2[0] + q2[1] * q2[1] + q2[2] * q2[2]);
      const Q pp = g.p[0] * g.p[1] * g.p[2];
      return std::vector<Q>{big_q / (constant(c, 0) * pp * pp)};
    };
    s.in_domain = [](const MultiPoint& pt) { return triangle_domain(pt) && normalized_weights(pt); };
    s.sample = [](Rng& rng, int height) {
      MultiPoint pt;
      sample_triangle(pt, rng, height);
      sample_weights(pt, rng, height);
      return pt;
    };
    cat.push_back(std::move(s));
  }
  {
    IdentitySpec s;
    s.id = "gram";
    s.title = "<v_i, v_j> = (q_k^2 - q_i^2 - q_j^2) / (2 p_i p_j)";
    s.variables = planar_vars;
    s.domain = "a > 0, c > 0, p_k > 0, sum p_k = 1";
    s.degree_bound = 12;
    s.constants = {{"2", Q(2)}};
    s.lhs = [](const MultiPoint& pt) {
      const Planar g = planar_from(pt);
      std::vector<Q> out;
      for (int k = 0; k < 3; ++k) {
        const int i = kOpposite[k][0], j = kOpposite[k][1];
        const Q vix = g.point[0] - g.vertex[i][0], viy = g.point[1] - g.vertex[i][1];
        const Q vjx = g.point[0] - g.vertex[j][0], vjy = g.point[1] - g.vertex[j][1];
        out.push_back(vix * vjx + viy * vjy);
      }
      return out;
    };
    s.rhs = [](const MultiPoint& pt, const std::vector<NamedConstant>& c) {
      const Planar g = planar_from(pt);
      std::vector<Q> out;
      for (int k = 0; k < 3; ++k) {
        const int i = kOpposite[k][0], j = kOpposite[k][1];
        out.push_back((g.q2[k] - g.q2[i] - g.q2[j]) / (constant(c, 0) * g.p[i] * g.p[j]));
      }
      return out;
    };
    s.in_domain = [](const MultiPoint& pt) { return triangle_domain(pt) && normalized_weights(pt); };
    s.sample = [](Rng& rng, int height) {
      MultiPoint pt;
      sample_triangle(pt, rng, height);
      sample_weights(pt, rng, height);
      return pt;
    };
    cat.push_back(std::move(s));
  }
  {
    IdentitySpec s;
    s.id = "beta-pairs";
    s.title = "sum beta_i beta_j = Q^3 / (4^3 prod q_k^4)";
    s.variables = {"q0", "q1", "q2"};
    s.domain = "q_k > 0 with the strict triangle inequality";
    s.degree_bound = 36;
    s.constants = {{"4^3", Q(64)}};
    s.lhs = [](const MultiPoint& pt) {
      const auto q = q_of(pt);
      const auto a = canonical_a(q, big_q_of(q));
      std::array<Q, 3> beta;
      for (int k = 0; k < 3; ++k) beta[k] = (a[kOpposite[k][0]] + a[kOpposite[k][1]] - a[k]) / 2;
      return std::vector<Q>{beta[0] * beta[1] + beta[1] * beta[2] + beta[0] * beta[2]};
    };
    s.rhs = [](const MultiPoint& pt, const std::vector<NamedConstant>& c) {
      const auto q = q_of(pt);
      const Q bq = big_q_of(q);
      const Q p2 = q[0] * q[0] * q[1] * q[1] * q[2] * q[2];
      return std::vector<Q>{bq * bq * bq / (constant(c, 0) * p2 * p2)};
    };
    s.in_domain = q_triangle;
    s.sample = sample_q;
    cat.push_back(std::move(s));
  }
  {
    IdentitySpec s;
    s.id = "vertex-factorization";
    s.title = "*H(V) = 3 prod (q_i + q_j - q_k)^2 / (4 prod q_k^2)";
    s.variables = {"q0", "q1", "q2"};
    s.domain = "q_k > 0 with the strict triangle inequality";
    s.degree_bound = 24;
    s.constants = {{"3", Q(3)}, {"4", Q(4)}};
    s.lhs = [](const MultiPoint& pt) {
      const auto q = q_of(pt);
      return std::vector<Q>{star_h(canonical_a(q, big_q_of(q)), octant_vertex(q))};
    };
    s.rhs = [](const MultiPoint& pt, const std::vector<NamedConstant>& c) {
      const auto q = q_of(pt);
      Q num = constant(c, 0), den = constant(c, 1);
      for (int k = 0; k < 3; ++k) {
        const Q e = q[kOpposite[k][0]] + q[kOpposite[k][1]] - q[k];
        num *= e * e;
        den *= q[k] * q[k];
      }
      return std::vector<Q>{num / den};
    };
    s.in_domain = q_triangle;
    s.sample = sample_q;
    cat.push_back(std::move(s));
  }
  {
    IdentitySpec s;
    s.id = "symmetric-plane";
    s.title = "sum V_k - Q sum q_k^2 / (8 prod q_k^2) = 15/8 at q_0 = q_1 = q_2";
    s.variables = {"q0"};
    s.domain = "q_0 > 0 (q_1 = q_2 = q_0)";
    s.degree_bound = 12;
    s.constants = {{"15/8", Q(15, 8)}};
    s.lhs = [](const MultiPoint& pt) {
      const Q& q0 = var(pt, "q0");
      const std::array<Q, 3> q{q0, q0, q0};
      const auto v = octant_vertex(q);
      const Q sum_q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
      const Q prod_q2 = q[0] * q[0] * q[1] * q[1] * q[2] * q[2];
      return std::vector<Q>{v[0] + v[1] + v[2] - big_q_of(q) * sum_q2 / (8 * prod_q2)};
    };
    s.rhs = [](const MultiPoint&, const std::vector<NamedConstant>& c) { return std::vector<Q>{constant(c, 0)}; };
    s.in_domain = [](const MultiPoint& pt) { return var(pt, "q0") > 0; };
    s.sample = [](Rng& rng, int height) {
      MultiPoint pt;
      pt["q0"] = random_positive_rational(rng, height);
      return pt;
    };
    cat.push_back(std::move(s));
  }
  return cat;
}

IdentitySpec mutate_constant(const IdentitySpec& spec, std::size_t index, const ExactScalar& value) {
  IdentitySpec m = spec;
  m.constants.at(index).value = value;
  return m;
}

IdentityVerdict check_identity(const IdentitySpec& spec, const MultiPoint& point) {
  for (const auto& v : spec.variables)
    if (!point.count(v)) throw DomainError(spec.id + ": missing variable " + v);
  if (!spec.in_domain(point)) throw DomainError(spec.id + ": point outside the domain (" + spec.domain + ")");
  IdentityVerdict v;
  v.lhs = spec.lhs(point);
  v.rhs = spec.rhs(point, spec.constants);
  v.equal = v.lhs == v.rhs;
  if (!v.equal) v.witness = point;
  return v;
}

bool SuiteReport::all_pass() const {
  return std::all_of(identities.begin(), identities.end(),
                     [](const IdentityRun& r) { return r.trials > 0 && r.passed == r.trials; });
}

SuiteReport schwartz_zippel_suite(int trials, int height, std::uint64_t seed, const std::vector<IdentitySpec>& catalog) {
  if (trials < 1) throw DomainError("trials must be at least 1");
  SuiteReport rep;
  rep.trials = trials;
  rep.height = height;
  rep.seed = seed;
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const IdentitySpec& spec = catalog[k];
    Rng rng(seed + 0x9e3779b97f4a7c15ULL * (k + 1));
    IdentityRun run;
    run.id = spec.id;
    run.title = spec.title;
    run.degree_bound = spec.degree_bound;
    for (int t = 0; t < trials; ++t) {
      const MultiPoint pt = spec.sample(rng, height);
      const IdentityVerdict v = check_identity(spec, pt);
      ++run.trials;
      if (v.equal)
        ++run.passed;
      else if (run.witnesses.size() < 4)
        run.witnesses.push_back(pt);
    }
    // A nonzero polynomial of degree D vanishes at a point drawn from a set
    // of size S per coordinate with probability at most D / S; numerators
    // alone give S >= height.
    const double per_trial = std::min(1.0, static_cast<double>(spec.degree_bound) / std::max(1, height));
    run.failure_bound = run.passed == run.trials ? std::pow(per_trial, run.trials) : 1.0;
    rep.identities.push_back(std::move(run));
  }
  return rep;
}

nlohmann::json to_json(const MultiPoint& point) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, value] : point) j[name] = value.get_str();
  return j;
}

nlohmann::json to_json(const SuiteReport& report) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& r : report.identities) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& pt : r.witnesses) w.push_back(to_json(pt));
    ids.push_back({{"id", r.id},
                   {"title", r.title},
                   {"degree_bound", r.degree_bound},
                   {"trials", r.trials},
                   {"passed", r.passed},
                   {"pass", r.passed == r.trials},
                   {"failure_probability_bound", r.failure_bound},
                   {"witnesses", w}});
  }
  return {{"trials", report.trials},
          {"height", report.height},
          {"seed", report.seed},
          {"identities", ids},
          {"pass", report.all_pass()}};
}

}  // namespace ballcone
