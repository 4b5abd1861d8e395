#include "ballcone/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "ballcone/parallel.hpp"
#include "ballcone/sphere.hpp"

namespace ballcone {

// ---------------------------------------------------------------------------
// Queries and pointwise feasibility

OrderedQuery OrderedQuery::make(Scene scene, std::vector<int> order) {
  validate(scene);
  const std::size_t n = scene.size();
  if (order.size() != n) throw GeometryError("order length differs from the number of balls");
  std::vector<char> seen(n, 0);
  for (int i : order) {
    if (i < 0 || static_cast<std::size_t>(i) >= n || seen[i]) throw GeometryError("order is not a permutation");
    seen[i] = 1;
  }
  return {std::move(scene), std::move(order)};
}

OrderedQuery OrderedQuery::listed(Scene scene) {
  std::vector<int> order(scene.size());
  std::iota(order.begin(), order.end(), 0);
  return make(std::move(scene), std::move(order));
}

OrderedQuery OrderedQuery::reversed() const {
  OrderedQuery r = *this;
  std::reverse(r.order.begin(), r.order.end());
  return r;
}

const char* to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible: return "feasible";
    case Feasibility::Infeasible: return "infeasible";
    case Feasibility::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

DirectionVerdict solve_projection(const Scene& scene, const Direction& u, const FeasibilityOptions& opts) {
  const auto disks = project_to_orthogonal_plane(scene, u);
  const DiskIntersection r = disks_common_point(disks, opts.tol, opts.mode);
  DirectionVerdict v;
  v.slack = r.slack;
  v.status = r.status;
  v.point = r.point;
  v.active = r.active;
  if (r.feasible)
    v.verdict = Feasibility::Feasible;
  else
    v.verdict = r.status == SolverStatus::Uncertified ? Feasibility::Indeterminate : Feasibility::Infeasible;
  return v;
}

}  // namespace

DirectionVerdict direction_feasible(const OrderedQuery& query, const Direction& u, const FeasibilityOptions& opts) {
  const OrderResult ord = transversal_order(query.scene, u, opts.tie_tol);
  const bool order_ok = !ord.tie && ord.order == query.order;
  if (!order_ok && opts.mode == SolveMode::Decide && !ord.tie) {
    DirectionVerdict v;
    v.verdict = Feasibility::Infeasible;
    v.slack = std::numeric_limits<double>::infinity();
    v.status = SolverStatus::LowerBound;
    v.realized_order = ord.order;
    return v;
  }
  DirectionVerdict v = solve_projection(query.scene, u, opts);
  v.realized_order = ord.order;
  v.tie = ord.tie;
  if (v.verdict == Feasibility::Feasible) {
    if (ord.tie)
      v.verdict = Feasibility::Indeterminate;
    else if (!order_ok)
      v.verdict = Feasibility::Infeasible;
  }
  return v;
}

DirectionVerdict scene_direction_feasible(const Scene& scene, const Direction& u, const FeasibilityOptions& opts) {
  DirectionVerdict v = solve_projection(scene, u, opts);
  const OrderResult ord = transversal_order(scene, u, opts.tie_tol);
  v.realized_order = ord.order;
  v.tie = ord.tie;
  return v;
}

// ---------------------------------------------------------------------------
// Boundary sampling and convexity

namespace {

Vec random_tangent(const Vec& u, Rng& rng) {
  for (;;) {
    Vec g(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) g[k] = rng.normal();
    g -= g.dot(u) * u;
    if (g.norm() > 1e-8) return g.normalized();
  }
}

bool decide(const OrderedQuery& q, const Vec& u, double tol) {
  FeasibilityOptions o;
  o.tol = tol;
  o.mode = SolveMode::Decide;
  return direction_feasible(q, Direction(u), o).feasible();
}

}  // namespace

std::vector<BoundarySample> sample_cone_boundary(const OrderedQuery& query, const Vec& interior, int count, Rng& rng,
                                                 double tol) {
  std::vector<BoundarySample> out;
  const Vec u0 = interior.normalized();
  if (!decide(query, u0, tol)) throw GeometryError("sample_cone_boundary: seed direction is not feasible");
  const double half_pi = 0.5 * std::numbers::pi;
  for (int attempt = 0; attempt < 4 * count && static_cast<int>(out.size()) < count; ++attempt) {
    const Vec t = random_tangent(u0, rng);
    double lo = 0.0, hi = 1e-6;
    while (hi < half_pi && decide(query, move_along(u0, t, hi), tol)) {
      lo = hi;
      hi *= 2.0;
    }
    if (hi >= half_pi) {
      hi = half_pi;
      if (decide(query, move_along(u0, t, hi), tol)) continue;
    }
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      (decide(query, move_along(u0, t, mid), tol) ? lo : hi) = mid;
    }
    BoundarySample s;
    s.direction = move_along(u0, t, lo);
    s.outside = move_along(u0, t, hi);
    FeasibilityOptions exact;
    exact.tol = tol;
    s.verdict = direction_feasible(query, Direction(s.direction), exact);
    s.active = s.verdict.active;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Vec> find_feasible_directions(const OrderedQuery& query, std::size_t count, std::uint64_t seed,
                                          std::size_t limit) {
  const auto dirs = sphere_samples(query.scene.dimension, count, seed);
  std::vector<char> ok(dirs.size(), 0);
  parallel_for(dirs.size(), [&](std::size_t i) { ok[i] = decide(query, dirs[i], kDefaultTol); });
  std::vector<Vec> out;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (!ok[i]) continue;
    out.push_back(dirs[i]);
    if (limit && out.size() >= limit) break;
  }
  return out;
}

ConvexityReport cone_convexity_check(const OrderedQuery& query, const ConvexityOptions& opts) {
  ConvexityReport rep;
  Rng rng(opts.seed);

  std::vector<Vec> lattice;
  if (opts.hint && decide(query, opts.hint->normalized(), opts.tol)) lattice.push_back(opts.hint->normalized());
  if (lattice.empty() || opts.search_samples > 0) {
    auto found = find_feasible_directions(query, opts.search_samples, opts.seed);
    for (auto& f : found) lattice.push_back(std::move(f));
  }
  if (lattice.empty()) {
    rep.inconclusive = true;
    return rep;
  }

  // Seed the ray shooting from the feasible sample closest to the mean direction.
  Vec mean = Vec::Zero(query.scene.dimension);
  for (const auto& v : lattice) mean += v;
  Vec seed_dir = lattice.front();
  if (mean.norm() > 1e-12) {
    mean.normalize();
    double best = -2.0;
    for (const auto& v : lattice)
      if (v.dot(mean) > best) {
        best = v.dot(mean);
        seed_dir = v;
      }
  }

  const int nb = std::max(2, opts.pool_size);
  const auto boundary = sample_cone_boundary(query, seed_dir, nb, rng, opts.tol);
  std::vector<Vec> edge, inner;
  for (const auto& b : boundary) {
    edge.push_back(b.direction);
    inner.push_back(slerp(seed_dir, b.direction, rng.uniform()));
  }
  // Sort boundary points by ray angle around the seed so that neighbours
  // along the boundary can be paired; a concave stretch of boundary shows up
  // between neighbours long before random pairs hit it.
  {
    const Eigen::MatrixXd tb = orthonormal_complement(Direction(seed_dir));
    std::vector<std::pair<double, std::size_t>> by_angle;
    for (std::size_t k = 0; k < edge.size(); ++k) {
      const Vec c = tb.transpose() * edge[k];
      by_angle.emplace_back(std::atan2(c.size() > 1 ? c[1] : 0.0, c[0]), k);
    }
    std::sort(by_angle.begin(), by_angle.end());
    std::vector<Vec> sorted;
    for (const auto& [ang, k] : by_angle) sorted.push_back(edge[k]);
    edge.swap(sorted);
  }
  const std::size_t stride = std::max<std::size_t>(1, lattice.size() / static_cast<std::size_t>(nb));
  for (std::size_t k = 0; k < lattice.size(); k += stride) inner.push_back(lattice[k]);
  rep.feasible_pool = static_cast<int>(edge.size() + inner.size());
  if (rep.feasible_pool < 2) {
    rep.inconclusive = true;
    return rep;
  }

  rep.min_midpoint_depth = std::numeric_limits<double>::infinity();
  rep.min_boundary_depth = std::numeric_limits<double>::infinity();
  const double max_angle = std::numbers::pi - opts.antipodal_margin;
  // Midpoint depth of a smooth boundary arc scales with the square of the
  // chord; closer boundary pairs cannot be resolved at tolerance tol.
  const double min_boundary_angle = 1e-2;
  FeasibilityOptions exact;
  exact.tol = opts.tol;

  auto pick = [&](const std::vector<Vec>& pool) -> const Vec& {
    return pool[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pool.size()) - 1))];
  };
  for (int trial = 0; trial < opts.pairs; ++trial) {
    // 0: two boundary points, 1: two inner points, 2: mixed, 3: boundary neighbours.
    const int kind = static_cast<int>(rng.integer(0, 3));
    const bool both_edge = (kind == 0 || kind == 3) && edge.size() >= 2;
    std::size_t ia = 0, ib = 0;
    if (both_edge) {
      ia = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(edge.size()) - 1));
      ib = kind == 3 ? (ia + static_cast<std::size_t>(rng.integer(1, 4))) % edge.size()
                     : static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(edge.size()) - 1));
    }
    const Vec& a = both_edge ? edge[ia] : (kind == 2 && !edge.empty()) ? pick(edge) : pick(inner);
    const Vec& b = both_edge ? edge[ib] : pick(inner);
    const double angle = angle_between(a, b);
    if (angle > max_angle || angle < 1e-12) continue;
    const Vec m = geodesic_midpoint(a, b);
    const DirectionVerdict v = direction_feasible(query, Direction(m), exact);
    ++rep.pairs_tested;
    const double depth = -v.slack;
    rep.min_midpoint_depth = std::min(rep.min_midpoint_depth, depth);
    std::string kind_tag;
    if (!v.feasible()) kind_tag = v.verdict == Feasibility::Indeterminate ? "indeterminate midpoint" : "infeasible midpoint";
    if (both_edge && angle >= min_boundary_angle) {
      ++rep.boundary_pairs;
      rep.min_boundary_depth = std::min(rep.min_boundary_depth, depth);
      if (kind_tag.empty() && !(depth > opts.tol)) kind_tag = "flat boundary arc";
    }
    if (!kind_tag.empty()) {
      ++rep.violations;
      if (rep.witnesses.size() < 8) rep.witnesses.push_back({a, b, m, v.slack, kind_tag});
    }
  }
  if (rep.pairs_tested == 0) rep.inconclusive = true;
  if (!std::isfinite(rep.min_midpoint_depth)) rep.min_midpoint_depth = 0.0;
  if (!std::isfinite(rep.min_boundary_depth)) rep.min_boundary_depth = 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Permutations and components

std::vector<int> canonical_permutation(std::vector<int> order) {
  std::vector<int> rev(order.rbegin(), order.rend());
  return std::min(order, rev);
}

const GeometricPermutation* PermutationCatalog::find(const std::vector<int>& order) const {
  const auto key = canonical_permutation(order);
  for (const auto& p : permutations)
    if (p.order == key) return &p;
  return nullptr;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root wins, so labels do not depend on union order.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Bucket grid over points of the unit sphere in R^d for radius queries.
class SphereGrid {
 public:
  SphereGrid(const std::vector<Vec>& pts, double cell) : pts_(pts), cell_(cell) {
    dim_ = pts.empty() ? 0 : static_cast<int>(pts[0].size());
    base_ = static_cast<std::int64_t>(std::ceil(1.0 / cell)) * 2 + 4;
    for (std::size_t i = 0; i < pts.size(); ++i) cells_[key(coords(pts[i]))].push_back(i);
  }

  // Indices j with chord |p_j - x| <= r, in increasing order.
  std::vector<std::size_t> near(const Vec& x, double r) const {
    std::vector<std::size_t> out;
    const auto c = coords(x);
    std::vector<std::int64_t> off(dim_, -1);
    for (;;) {
      std::vector<std::int64_t> cc(c);
      for (int k = 0; k < dim_; ++k) cc[k] += off[k];
      auto it = cells_.find(key(cc));
      if (it != cells_.end())
        for (std::size_t j : it->second)
          if ((pts_[j] - x).norm() <= r) out.push_back(j);
      int k = 0;
      while (k < dim_ && off[k] == 1) off[k++] = -1;
      if (k == dim_) break;
      ++off[k];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::int64_t> coords(const Vec& x) const {
    std::vector<std::int64_t> c(dim_);
    for (int k = 0; k < dim_; ++k) c[k] = static_cast<std::int64_t>(std::floor(x[k] / cell_)) + base_ / 2;
    return c;
  }
  std::uint64_t key(const std::vector<std::int64_t>& c) const {
    std::uint64_t h = 0;
    for (int k = 0; k < dim_; ++k) h = h * static_cast<std::uint64_t>(base_) + static_cast<std::uint64_t>(c[k]);
    return h;
  }

  const std::vector<Vec>& pts_;
  double cell_;
  int dim_ = 0;
  std::int64_t base_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

double chord_of(double angle) { return 2.0 * std::sin(0.5 * angle); }

// Feasible sampled directions of a scene (any order). Entries come in
// antipodal pairs: k and k ^ 1 after reordering, see `partner`.
struct DirectionCloud {
  std::vector<Vec> dirs;
  std::vector<std::vector<int>> orders;
  std::vector<std::size_t> partner;  // index of the antipode
  std::size_t lattice = 0;           // total lattice samples evaluated
  std::size_t refined = 0;
  double spacing = 0.0;
};

bool scene_ok(const Scene& scene, const Vec& u, double tol, std::vector<int>* order = nullptr) {
  FeasibilityOptions o;
  o.tol = tol;
  o.mode = SolveMode::Decide;
  const Direction d(u);
  const DirectionVerdict v = solve_projection(scene, d, o);
  if (!v.feasible()) return false;
  const OrderResult ord = transversal_order(scene, d);
  if (ord.tie) return false;  // measure zero; excluded
  if (order) *order = ord.order;
  return true;
}

DirectionCloud sample_cloud(const Scene& scene, const SamplingOptions& opts) {
  validate(scene);
  DirectionCloud cloud;
  const auto lattice = sphere_samples(scene.dimension, opts.samples, opts.seed);
  const std::size_t n = lattice.size(), half = n / 2;
  cloud.lattice = n;
  cloud.spacing = sample_spacing(scene.dimension, n);

  // Feasibility of u and -u coincide, so only the first half is solved.
  std::vector<char> ok(half, 0);
  std::vector<std::vector<int>> orders(half);
  parallel_for(half, [&](std::size_t i) { ok[i] = scene_ok(scene, lattice[i], opts.tol, &orders[i]); });

  auto push_pair = [&](const Vec& v, const std::vector<int>& order) {
    const std::size_t k = cloud.dirs.size();
    cloud.dirs.push_back(v);
    cloud.orders.push_back(order);
    cloud.dirs.push_back(-v);
    cloud.orders.emplace_back(order.rbegin(), order.rend());
    cloud.partner.push_back(k + 1);
    cloud.partner.push_back(k);
  };
  std::vector<std::size_t> feasible_idx;
  for (std::size_t i = 0; i < half; ++i)
    if (ok[i]) {
      feasible_idx.push_back(i);
      push_pair(lattice[i], orders[i]);
    }

  if (opts.refine && !feasible_idx.empty()) {
    // Bisect toward infeasible lattice neighbours to put samples on the
    // boundary, which keeps thin cones connected in the graph.
    std::vector<Vec> half_pts(lattice.begin(), lattice.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<Vec> all_pts = lattice;
    const double r = chord_of(1.5 * cloud.spacing);
    SphereGrid grid(all_pts, r);
    std::vector<std::vector<std::pair<Vec, std::vector<int>>>> extra(feasible_idx.size());
    parallel_for(feasible_idx.size(), [&](std::size_t f) {
      const Vec& a = lattice[feasible_idx[f]];
      int added = 0;
      for (std::size_t j : grid.near(a, r)) {
        if (added >= 2) break;
        const bool j_ok = j < half ? ok[j] : ok[j - half];
        if (j_ok) continue;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 30; ++it) {
          const double mid = 0.5 * (lo + hi);
          (scene_ok(scene, slerp(a, lattice[j], mid), opts.tol) ? lo : hi) = mid;
        }
        std::vector<int> order;
        const Vec b = slerp(a, lattice[j], lo);
        if (lo > 0.0 && scene_ok(scene, b, opts.tol, &order)) {
          extra[f].emplace_back(b, order);
          ++added;
        }
      }
    });
    for (auto& list : extra)
      for (auto& [v, order] : list) {
        push_pair(v, order);
        cloud.refined += 2;
      }
  }
  return cloud;
}

PermutationCatalog catalog_from(const DirectionCloud& cloud, const SamplingOptions& opts) {
  PermutationCatalog cat;
  cat.samples = cloud.lattice;
  cat.feasible_samples = cloud.dirs.size() - cloud.refined;
  cat.refined_samples = cloud.refined;
  cat.spacing = cloud.spacing;
  cat.seed = opts.seed;
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < cloud.dirs.size(); ++i) {
    const auto key = canonical_permutation(cloud.orders[i]);
    auto [it, inserted] = index.emplace(key, cat.permutations.size());
    if (inserted) {
      GeometricPermutation gp;
      gp.order = key;
      gp.witness = cloud.orders[i] == key ? cloud.dirs[i] : Vec(-cloud.dirs[i]);
      cat.permutations.push_back(std::move(gp));
    }
    ++cat.permutations[it->second].samples;
  }
  std::sort(cat.permutations.begin(), cat.permutations.end(),
            [](const GeometricPermutation& a, const GeometricPermutation& b) { return a.order < b.order; });
  return cat;
}

bool arc_feasible(const Scene& scene, const Vec& a, const Vec& b, double step, double tol) {
  const double angle = angle_between(a, b);
  const int pieces = std::max(2, static_cast<int>(std::ceil(angle / step)));
  for (int k = 1; k < pieces; ++k)
    if (!scene_ok(scene, slerp(a, b, static_cast<double>(k) / pieces), tol)) return false;
  return true;
}

}  // namespace

PermutationCatalog enumerate_geometric_permutations(const Scene& scene, const SamplingOptions& opts) {
  return catalog_from(sample_cloud(scene, opts), opts);
}

ComponentReport count_components(const Scene& scene, const SamplingOptions& opts) {
  const DirectionCloud cloud = sample_cloud(scene, opts);
  ComponentReport rep;
  rep.catalog = catalog_from(cloud, opts);
  const std::size_t n = cloud.dirs.size();
  if (n == 0) {
    rep.matches_catalog = rep.catalog.size() == 0;
    return rep;
  }

  const double radius = opts.graph_radius * cloud.spacing;
  const double step = cloud.spacing / 8.0;
  UnionFind uf(n);
  {
    SphereGrid grid(cloud.dirs, chord_of(radius));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j : grid.near(cloud.dirs[i], chord_of(radius))) {
        if (j <= i || uf.find(i) == uf.find(j)) continue;
        if (arc_feasible(scene, cloud.dirs[i], cloud.dirs[j], step, opts.tol)) uf.unite(i, j);
      }
  }

  // Second pass across clusters: a sampled arc of feasible directions joins them.
  auto roots = [&] {
    std::map<std::size_t, std::vector<std::size_t>> m;
    for (std::size_t i = 0; i < n; ++i) m[uf.find(i)].push_back(i);
    return m;
  };
  {
    auto clusters = roots();
    std::vector<std::vector<std::size_t>> reps;
    for (auto& [root, members] : clusters) {
      std::vector<std::size_t> r;
      const std::size_t stride = std::max<std::size_t>(1, members.size() / 24);
      for (std::size_t k = 0; k < members.size(); k += stride) r.push_back(members[k]);
      reps.push_back(std::move(r));
    }
    const std::size_t c = std::min<std::size_t>(reps.size(), 200);
    for (std::size_t a = 0; a < c; ++a)
      for (std::size_t b = a + 1; b < c; ++b) {
        if (uf.find(reps[a][0]) == uf.find(reps[b][0])) continue;
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i : reps[a])
          for (std::size_t j : reps[b]) {
            const double ang = angle_between(cloud.dirs[i], cloud.dirs[j]);
            if (ang < best) {
              best = ang;
              bi = i;
              bj = j;
            }
          }
        if (best > std::numbers::pi - 1e-2) continue;
        if (arc_feasible(scene, cloud.dirs[bi], cloud.dirs[bj], step, opts.tol)) {
          uf.unite(bi, bj);
          ++rep.merged_by_arcs;
        }
      }
  }

  const auto oriented = roots();
  rep.oriented_clusters = static_cast<int>(oriented.size());
  for (const auto& [root, members] : oriented) {
    rep.cluster_sizes.push_back(members.size());
    if (members.size() < 10) rep.undersampled = true;
  }
  if (rep.undersampled)
    rep.warnings.push_back("under-sampled: a cluster has fewer than 10 samples; raise --samples");

  for (std::size_t i = 0; i < n; ++i) uf.unite(i, cloud.partner[i]);
  std::map<std::size_t, int> label;
  for (std::size_t i = 0; i < n; ++i) label.emplace(uf.find(i), static_cast<int>(label.size()));
  rep.components = static_cast<int>(label.size());

  for (auto& gp : rep.catalog.permutations) {
    for (std::size_t i = 0; i < n; ++i)
      if (cloud.dirs[i] == gp.witness) {
        gp.component = label[uf.find(i)];
        break;
      }
  }
  rep.matches_catalog = rep.components == static_cast<int>(rep.catalog.size());
  return rep;
}

// ---------------------------------------------------------------------------
// Triples: boundary classification and pinning

BoundaryClassification classify_boundary_direction(const Triple& triple, const Vector3d& u_in, std::uint64_t seed,
                                                   const TangentOptions& topts) {
  BoundaryClassification c;
  if (triple.collinear()) {
    c.skipped = true;
    c.consistent = true;
    c.tag = "collinear centers: no triangle";
    return c;
  }
  const Vector3d u = u_in.normalized();
  const TangentSet ts = tangent_lines_for_direction(triple, u, topts);
  const Scene scene = triple.to_scene();
  const double scale = scene.diameter();

  const Vector3d& c0 = triple.centers[0];
  const Vector3d n = triple.edge(0, 1).cross(triple.edge(0, 2)).normalized();
  const double area = n.dot(triple.edge(0, 1).cross(triple.edge(0, 2)));
  const OrderResult ord = transversal_order(scene, Direction(Vec(u)));
  for (const Line3& line : ts.lines) {
    TritangentClass tc;
    tc.line = line;
    tc.order = ord.order;
    const double un = n.dot(u);
    if (std::abs(un) <= 1e-12) {
      const double off = n.dot(line.point - c0);
      if (std::abs(off) <= 1e-9 * scale) {
        // In the plane: it crosses the triangle iff the vertices are not all strictly on one side.
        const Vector3d m = n.cross(u);
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto& ck : triple.centers) {
          const double s = m.dot(ck - line.point);
          lo = std::min(lo, s);
          hi = std::max(hi, s);
        }
        tc.crosses_triangle = lo <= 1e-12 * scale && hi >= -1e-12 * scale;
        tc.tag = tc.crosses_triangle ? "in plane of centers: crosses triangle" : "in plane of centers: misses triangle";
      } else {
        tc.tag = "parallel to plane of centers";
      }
    } else {
      const double t = n.dot(c0 - line.point) / un;
      const Vector3d x = line.point + t * u;
      constexpr int other[3][2] = {{1, 2}, {0, 2}, {0, 1}};
      for (int k = 0; k < 3; ++k) {
        const Vector3d& ci = triple.centers[other[k][0]];
        const Vector3d& cj = triple.centers[other[k][1]];
        tc.barycentric[k] = n.dot((ci - x).cross(cj - x)) / area;
      }
      // Orientation of (c_i, c_j) for k = 1 is reversed relative to the cyclic order.
      tc.barycentric[1] = -tc.barycentric[1];
      const double lo = *std::min_element(tc.barycentric.begin(), tc.barycentric.end());
      tc.crosses_triangle = lo >= -1e-12;
      tc.tag = tc.crosses_triangle ? "crosses triangle" : "misses triangle";
    }
    c.crosses_triangle = c.crosses_triangle || tc.crosses_triangle;
    c.tritangents.push_back(tc);
  }
  c.on_boundary = c.crosses_triangle;
  if (ts.family) c.tag = "tangent family";
  else if (ts.lines.empty()) c.tag = "no real tritangent";
  else c.tag = c.tritangents.front().tag;
  if (ts.lines.empty()) c.skipped = true;

  FeasibilityOptions exact;
  const Direction du{Vec(u)};
  const DirectionVerdict v = scene_direction_feasible(scene, du, exact);
  c.slack = v.slack;
  Rng rng(seed);
  for (int k = 0; k < 64; ++k) {
    const Vec w = cap_sample(Vec(u), 1e-4, rng);
    (scene_ok(scene, w, kDefaultTol) ? c.probe_feasible : c.probe_infeasible)++;
  }
  const double zero = 1e-8 * scale;
  c.empirical_on_boundary = std::abs(v.slack) <= zero && c.probe_feasible > 0 && c.probe_infeasible > 0;
  if (v.slack < -zero) {
    const Eigen::MatrixXd basis = orthonormal_complement(du);
    const Vec p = basis * v.point;
    c.stabbing_line = Line3{Vector3d(p[0], p[1], p[2]), u};
  }
  c.consistent = c.skipped || c.on_boundary == c.empirical_on_boundary;
  return c;
}

PinnedResult pinned_planar_tritangent(const Triple& triple, double rel_tol) {
  PinnedResult res;
  if (triple.collinear()) {
    res.tag = "collinear centers";
    return res;
  }
  const Vector3d n = triple.edge(0, 1).cross(triple.edge(0, 2)).normalized();
  const Vector3d e1 = triple.edge(0, 1).normalized();
  const Vector3d e2 = n.cross(e1);
  std::array<Eigen::Vector2d, 3> p;
  for (int k = 0; k < 3; ++k) {
    const Vector3d d = triple.edge(0, k);
    p[k] = {d.dot(e1), d.dot(e2)};
  }
  const auto& r = triple.radii;
  // nu . P_k - h = eps_k r_k with eps = (+1, -1, +1); the opposite pattern is nu -> -nu.
  Eigen::Matrix2d a;
  a.row(0) = (p[1] - p[0]).transpose();
  a.row(1) = (p[2] - p[0]).transpose();
  const Eigen::Vector2d b(-r[1] - r[0], r[2] - r[0]);
  const Eigen::Vector2d nu = a.fullPivLu().solve(b);
  if (std::abs(nu.norm() - 1.0) > rel_tol) {
    res.tag = "no tritangent in the plane with B_1 on the other side";
    return res;
  }
  const Eigen::Vector2d nn = nu.normalized();
  Eigen::Vector2d tau(-nn.y(), nn.x());
  const std::array<double, 3> eps{1.0, -1.0, 1.0};
  std::array<double, 3> t;
  std::array<Eigen::Vector2d, 3> touch;
  for (int k = 0; k < 3; ++k) {
    touch[k] = p[k] - eps[k] * r[k] * nn;
    t[k] = tau.dot(touch[k]);
  }
  if (t[2] < t[0]) {
    tau = -tau;
    for (auto& x : t) x = -x;
  }
  if (!(t[0] < t[1] && t[1] < t[2])) {
    res.tag = "B_1 is not met between B_0 and B_2";
    return res;
  }
  res.pinned = true;
  res.tag = "pinned";
  const Vector3d dir = (tau.x() * e1 + tau.y() * e2).normalized();
  const Vector3d pt = triple.centers[0] + touch[0].x() * e1 + touch[0].y() * e2;
  res.line = Line3{pt, dir};
  res.normal = nn.x() * e1 + nn.y() * e2;
  return res;
}

bool is_pinned_planar(const Triple& triple, double rel_tol) { return pinned_planar_tritangent(triple, rel_tol).pinned; }

}  // namespace ballcone
