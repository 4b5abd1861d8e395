#include "ballcone/flexprobe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ballcone/cone.hpp"

namespace ballcone {

LiftedConfig LiftedConfig::make(double a, double b, double c, std::array<double, 3> weights,
                                std::array<double, 3> heights) {
  if (!(a > 0.0) || !(c > 0.0)) throw GeometryError("lifted configuration needs a > 0 and c > 0");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw GeometryError("barycentric weights must be positive");
    sum += w;
  }
  LiftedConfig cfg;
  cfg.a_ = a;
  cfg.b_ = b;
  cfg.c_ = c;
  for (int k = 0; k < 3; ++k) cfg.p_[k] = weights[k] / sum;
  cfg.x_ = heights;
  return cfg;
}

Eigen::Vector2d LiftedConfig::vertex(int k) const {
  switch (k) {
    case 0: return {0.0, 0.0};
    case 1: return {a_, 0.0};
    default: return {b_, c_};
  }
}

Eigen::Vector2d LiftedConfig::interior_point() const {
  return p_[0] * vertex(0) + p_[1] * vertex(1) + p_[2] * vertex(2);
}

double LiftedConfig::z(int k) const {
  const double d = x_[kOpposite[k][0]] - x_[kOpposite[k][1]];
  return d * d;
}

Triple LiftedConfig::lifted_triple() const {
  Triple t;
  for (int k = 0; k < 3; ++k) {
    const Eigen::Vector2d v = vertex(k);
    t.centers[k] = Vector3d(v.x(), v.y(), x_[k]);
    t.radii[k] = r(k);
  }
  t.allow_overlap = true;
  return t;
}

Eigen::Matrix3d gram_from_barycentrics(const LiftedConfig& cfg) {
  Eigen::Matrix3d g;
  const auto& p = cfg.weights();
  for (int k = 0; k < 3; ++k) {
    const int i = kOpposite[k][0], j = kOpposite[k][1];
    const double qi = cfg.q(i), qj = cfg.q(j), qk = cfg.q(k);
    g(i, j) = g(j, i) = (qk * qk - qi * qi - qj * qj) / (2.0 * p[i] * p[j]);
    g(k, k) = cfg.s(k);
  }
  return g;
}

namespace {

bool strict_triangle(const std::array<double, 3>& q) {
  for (int k = 0; k < 3; ++k)
    if (!(q[kOpposite[k][0]] + q[kOpposite[k][1]] > q[k])) return false;
  return true;
}

}  // namespace

QInvariant q_invariant_from_q(const std::array<double, 3>& q, const std::array<double, 3>& weights) {
  const double sum = weights[0] + weights[1] + weights[2];
  std::array<double, 3> q2;
  double pp = 1.0;
  for (int k = 0; k < 3; ++k) {
    q2[k] = q[k] * q[k];
    pp *= weights[k] / sum;
  }
  QInvariant out;
  out.Q = q_from_squares(q2);
  out.delta = out.Q / (4.0 * pp * pp);
  out.triangle = strict_triangle(q) && out.Q > 0.0;
  return out;
}

QInvariant q_invariant(const LiftedConfig& cfg) {
  return q_invariant_from_q({cfg.q(0), cfg.q(1), cfg.q(2)}, cfg.weights());
}

HessianDecomposition lifted_hessian_decomposition(const LiftedConfig& cfg) {
  const double a2c2 = cfg.a() * cfg.a() * cfg.c() * cfg.c();
  const std::array<double, 3> s{cfg.s(0), cfg.s(1), cfg.s(2)};
  const auto [h2, h4] = lifted_h2_h4<double>(a2c2, cfg.weights(), s, cfg.heights());
  HessianDecomposition d;
  d.h2 = h2;
  d.h4 = h4;
  d.prefactor = hessian_prefactor<double>(a2c2, 1.0);
  d.total = d.prefactor * (h2 + h4);
  return d;
}

CanonicalCoords CanonicalCoords::from_q(const std::array<double, 3>& q) {
  CanonicalCoords c;
  c.q = q;
  std::array<double, 3> q2{q[0] * q[0], q[1] * q[1], q[2] * q[2]};
  c.Q = q_from_squares(q2);
  for (int k = 0; k < 3; ++k) c.canonical_a[k] = c.Q / (4.0 * q2[kOpposite[k][0]] * q2[kOpposite[k][1]]);
  for (int k = 0; k < 3; ++k)
    c.beta[k] = 0.5 * (c.canonical_a[kOpposite[k][0]] + c.canonical_a[kOpposite[k][1]] - c.canonical_a[k]);
  c.beta_pair_sum = c.beta[0] * c.beta[1] + c.beta[1] * c.beta[2] + c.beta[0] * c.beta[2];
  const double pq4 = q2[0] * q2[0] * q2[1] * q2[1] * q2[2] * q2[2];
  c.hyperboloid_constant = c.Q * c.Q * c.Q / (64.0 * pq4);
  return c;
}

CanonicalCoords CanonicalCoords::from_config(const LiftedConfig& cfg) {
  return from_q({cfg.q(0), cfg.q(1), cfg.q(2)});
}

std::array<double, 3> CanonicalCoords::w_of(const LiftedConfig& cfg) {
  std::array<double, 3> w;
  const auto& p = cfg.weights();
  for (int k = 0; k < 3; ++k) {
    const double qk = cfg.q(k);
    w[k] = p[kOpposite[k][0]] * p[kOpposite[k][1]] * cfg.z(k) / (qk * qk);
  }
  return w;
}

std::array<double, 3> CanonicalCoords::t_of(const std::array<double, 3>& w) const {
  return {w[0] - beta[0], w[1] - beta[1], w[2] - beta[2]};
}

std::array<double, 3> CanonicalCoords::octant_vertex() const {
  std::array<double, 3> v;
  for (int k = 0; k < 3; ++k) {
    const double d = (q[kOpposite[k][0]] - q[kOpposite[k][1]]) / q[k];
    v[k] = 1.0 - d * d;
  }
  return v;
}

double star_h_canonical(const CanonicalCoords& coords, const std::array<double, 3>& w) {
  const auto& a = coords.canonical_a;
  return w[0] * w[1] + w[1] * w[2] + w[0] * w[2] - (a[0] * w[0] + a[1] * w[1] + a[2] * w[2]);
}

double asymptotic_cone(const CanonicalCoords& coords, const std::array<double, 3>& w) {
  const auto t = coords.t_of(w);
  return t[0] * t[1] + t[1] * t[2] + t[0] * t[2];
}

OctantCertificate certify_octant_separation(const CanonicalCoords& coords) {
  OctantCertificate cert;
  const auto& q = coords.q;
  const auto& a = coords.canonical_a;
  cert.vertex = coords.octant_vertex();
  const auto& v = cert.vertex;
  cert.star_h_at_vertex = star_h_canonical(coords, v);

  double num = 3.0, den = 4.0, flat = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    const double e = q[kOpposite[k][0]] + q[kOpposite[k][1]] - q[k];
    num *= e * e;
    den *= q[k] * q[k];
    flat = std::min(flat, e);
  }
  cert.closed_form = num / den;
  const double magnitude = std::abs(v[0] * v[1]) + std::abs(v[1] * v[2]) + std::abs(v[0] * v[2]) +
                           std::abs(a[0] * v[0]) + std::abs(a[1] * v[1]) + std::abs(a[2] * v[2]);
  cert.factorization_error = std::abs(cert.star_h_at_vertex - cert.closed_form) / std::max(magnitude, 1e-300);

  const double sum_q2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
  const double prod_q2 = q[0] * q[0] * q[1] * q[1] * q[2] * q[2];
  const double sum_v = v[0] + v[1] + v[2];
  const double rhs = coords.Q * sum_q2 / (8.0 * prod_q2);
  cert.plane_slack = sum_v - rhs;

  const double qmax = std::max({q[0], q[1], q[2]});
  if (flat <= 1e-12 * qmax) {
    cert.tag = "boundary case";
    cert.pass = false;
    return cert;
  }
  const double floor = 1e-12;
  cert.pass = cert.factorization_error <= 1e-10 && cert.star_h_at_vertex > floor * magnitude &&
              cert.plane_slack > floor * (std::abs(sum_v) + std::abs(rhs));
  if (!cert.pass) cert.tag = "separation not certified";
  return cert;
}

std::optional<LiftedConfig> lifted_config_for_tangent(const Triple& triple, const Vector3d& u_in,
                                                      const Eigen::Vector2d& tangent_point_in_plane,
                                                      const Eigen::Matrix<double, 3, 2>& plane_basis) {
  const Vector3d u = u_in.normalized();
  std::array<Eigen::Vector2d, 3> proj;
  std::array<double, 3> heights;
  for (int k = 0; k < 3; ++k) {
    proj[k] = plane_basis.transpose() * triple.centers[k];
    heights[k] = u.dot(triple.centers[k]);
  }
  const Eigen::Vector2d e1v = proj[1] - proj[0];
  const double a = e1v.norm();
  if (!(a > 0.0)) return std::nullopt;
  const Eigen::Vector2d ex = e1v / a;
  Eigen::Vector2d ey(-ex.y(), ex.x());
  auto local = [&](const Eigen::Vector2d& v) { return Eigen::Vector2d(ex.dot(v - proj[0]), ey.dot(v - proj[0])); };
  Eigen::Vector2d c2 = local(proj[2]);
  Eigen::Vector2d p = local(tangent_point_in_plane);
  if (c2.y() < 0.0) {  // reflect so that c > 0; the Hessian is unchanged by isometries
    c2.y() = -c2.y();
    p.y() = -p.y();
  }
  const double b = c2.x(), c = c2.y();
  const double scale = std::max(a, c2.norm());
  if (!(c > 1e-12 * scale)) return std::nullopt;
  const double l2 = p.y() / c;
  const double l1 = (p.x() - b * l2) / a;
  const double l0 = 1.0 - l1 - l2;
  if (!(l0 > 0.0 && l1 > 0.0 && l2 > 0.0)) return std::nullopt;
  return LiftedConfig::make(a, b, c, {l0, l1, l2}, heights);
}

FlexReport certify_flex_free(const Triple& triple, const FlexOptions& opts) {
  FlexReport rep;
  rep.requested = opts.boundary_samples;
  const Scene scene = triple.to_scene();
  validate(scene);

  SamplingOptions so;
  so.samples = 20000;
  so.seed = opts.seed;
  so.refine = false;
  const PermutationCatalog cat = enumerate_geometric_permutations(scene, so);
  struct Cone {
    std::vector<int> order;
    Vec witness;
  };
  std::vector<Cone> cones;
  for (const auto& gp : cat.permutations) {
    cones.push_back({gp.order, gp.witness});
    cones.push_back({std::vector<int>(gp.order.rbegin(), gp.order.rend()), -gp.witness});
  }
  if (cones.empty()) {
    rep.skip_tags.push_back("no transversal direction found");
    return rep;
  }

  const SexticModel model(triple);
  const double scale = scene.diameter();
  Rng rng(opts.seed);
  const int quota = (opts.boundary_samples + static_cast<int>(cones.size()) - 1) / static_cast<int>(cones.size());
  auto skip = [&](const std::string& tag) {
    ++rep.skipped;
    if (std::find(rep.skip_tags.begin(), rep.skip_tags.end(), tag) == rep.skip_tags.end()) rep.skip_tags.push_back(tag);
  };

  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_vertex_value = std::numeric_limits<double>::infinity();
  for (const Cone& cone : cones) {
    if (static_cast<int>(rep.samples.size()) >= opts.boundary_samples) break;
    const OrderedQuery query = OrderedQuery::make(scene, cone.order);
    int taken = 0;
    for (int round = 0; round < 20 && taken < quota; ++round) {
      const auto boundary = sample_cone_boundary(query, cone.witness, quota, rng, opts.tol);
      for (const auto& b : boundary) {
        if (taken >= quota || static_cast<int>(rep.samples.size()) >= opts.boundary_samples) break;
        // On a sextic arc the three disks share exactly one point: slack 0
        // with all three active. Slack below zero means the order constraint
        // cut the ray (possible only for overlapping balls).
        if (std::abs(b.verdict.slack) > 1e-9 * scale) {
          skip("order boundary");
          continue;
        }
        if (b.active.size() < 3) {
          skip("pair-conic arc");
          continue;
        }
        const Vector3d u(b.direction[0], b.direction[1], b.direction[2]);
        const Eigen::Matrix<double, 3, 2> basis = orthonormal_complement(Direction(b.direction));
        const auto cfg = lifted_config_for_tangent(triple, u, b.verdict.point, basis);
        if (!cfg) {
          skip("tangent point outside projected triangle");
          continue;
        }
        const HessianDecomposition dec = lifted_hessian_decomposition(*cfg);
        const CanonicalCoords coords = CanonicalCoords::from_config(*cfg);
        FlexSample s;
        s.direction = u;
        std::copy(cone.order.begin(), cone.order.end(), s.order.begin());
        s.h2 = dec.h2;
        s.h4 = dec.h4;
        const double mag = std::abs(dec.h2) + std::abs(dec.h4);
        s.margin = mag > 0.0 ? (dec.h2 + dec.h4) / mag : 0.0;
        s.hessian_sextic = model.hessian(u);
        s.hessian_lifted = dec.total;
        s.w = CanonicalCoords::w_of(*cfg);
        s.vertex = coords.octant_vertex();
        for (int k = 0; k < 3; ++k)
          if (!(s.w[k] > s.vertex[k])) s.disjointness_ok = false;
        s.star_h_vertex = star_h_canonical(coords, s.vertex);
        if (!s.disjointness_ok) ++rep.disjointness_violations;
        if (!(s.margin > opts.margin_floor)) ++rep.nonpositive;
        rep.min_margin = std::min(rep.min_margin, s.margin);
        rep.min_vertex_value = std::min(rep.min_vertex_value, s.star_h_vertex);
        rep.samples.push_back(s);
        ++taken;
      }
    }
  }
  if (rep.samples.empty()) {
    rep.min_margin = 0.0;
    rep.min_vertex_value = 0.0;
  }
  rep.pass = !rep.samples.empty() && rep.nonpositive == 0 && rep.disjointness_violations == 0;
  return rep;
}

}  // namespace ballcone
