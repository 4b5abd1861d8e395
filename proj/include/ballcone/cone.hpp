#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ballcone/geom.hpp"
#include "ballcone/random.hpp"
#include "ballcone/sextic.hpp"

namespace ballcone {

/// A scene plus the order in which an oriented transversal must meet it.
/// An order and its reverse are distinct queries.
struct OrderedQuery {
  Scene scene;
  std::vector<int> order;

  /// Validates the scene and that `order` is a permutation of 0..n-1.
  static OrderedQuery make(Scene scene, std::vector<int> order);
  /// The order in which the balls are listed.
  static OrderedQuery listed(Scene scene);
  OrderedQuery reversed() const;
};

enum class Feasibility { Feasible, Infeasible, Indeterminate };

const char* to_string(Feasibility f);

struct DirectionVerdict {
  Feasibility verdict = Feasibility::Infeasible;
  double slack = 0.0;  // minimax slack of the projected disks
  std::vector<int> realized_order;
  bool tie = false;
  SolverStatus status = SolverStatus::Optimal;
  Vec point;                // common point in orthonormal_complement(u) coordinates
  std::vector<int> active;  // disks attaining the slack

  bool feasible() const { return verdict == Feasibility::Feasible; }
};

struct FeasibilityOptions {
  double tol = kDefaultTol;
  SolveMode mode = SolveMode::Exact;
  double tie_tol = -1.0;  // < 0: 1e-9 * scene diameter
};

/// Feasible iff the projected disks share a point and the balls are met in
/// query.order. An order tie is Indeterminate, as is an uncertified solver
/// answer that would otherwise decide infeasibility.
DirectionVerdict direction_feasible(const OrderedQuery& query, const Direction& u, const FeasibilityOptions& opts = {});

/// Some line with direction u meets every ball, in whatever order.
DirectionVerdict scene_direction_feasible(const Scene& scene, const Direction& u, const FeasibilityOptions& opts = {});

struct BoundarySample {
  Vec direction;             // feasible, within ~1e-15 rad of the boundary
  Vec outside;               // infeasible partner across the boundary
  DirectionVerdict verdict;  // exact solve at `direction`
  std::vector<int> active;   // scene ball indices touching the common point
};

/// Boundary of the cone of `query` around the feasible direction `interior`:
/// random great-circle rays from `interior`, bisected to the first infeasible
/// point. Rays that stay feasible up to the equator are dropped.
std::vector<BoundarySample> sample_cone_boundary(const OrderedQuery& query, const Vec& interior, int count,
                                                 Rng& rng, double tol = kDefaultTol);

struct ConvexityOptions {
  int pairs = 1000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  int pool_size = 200;            // feasible directions drawn before pairing
  std::size_t search_samples = 20000;  // sphere samples used to find a feasible seed
  double antipodal_margin = 1e-3;  // pairs closer than pi - margin to antipodal are skipped
  std::optional<Vec> hint;         // known feasible direction
};

struct MidpointViolation {
  Vec first, second, midpoint;
  double slack = 0.0;
  std::string kind;  // "infeasible midpoint" or "flat boundary arc"
};

struct ConvexityReport {
  int pairs_tested = 0;
  int boundary_pairs = 0;       // pairs of near-boundary directions
  int violations = 0;
  double min_midpoint_depth = 0.0;  // min over midpoints of -slack; > 0 is strictly inside
  double min_boundary_depth = 0.0;  // same, restricted to boundary pairs
  int feasible_pool = 0;
  bool inconclusive = false;
  std::vector<MidpointViolation> witnesses;  // first few
};

/// Geodesic-midpoint test of the cone of `query`. Pairs mix random feasible
/// directions and boundary points of the cone; a midpoint must be feasible,
/// and midpoints of two boundary points must lie strictly inside
/// (slack < -tol), which excludes flat boundary arcs.
ConvexityReport cone_convexity_check(const OrderedQuery& query, const ConvexityOptions& opts = {});

/// Feasible directions of `query` among `count` sphere samples (by index order).
std::vector<Vec> find_feasible_directions(const OrderedQuery& query, std::size_t count, std::uint64_t seed,
                                          std::size_t limit = 0);

struct GeometricPermutation {
  std::vector<int> order;    // the lexicographically smaller of an ordering and its reverse
  Vec witness;               // realizes `order`
  std::size_t samples = 0;   // feasible samples realizing either orientation
  int component = -1;
};

struct PermutationCatalog {
  std::vector<GeometricPermutation> permutations;
  std::size_t samples = 0;
  std::size_t feasible_samples = 0;
  std::size_t refined_samples = 0;
  double spacing = 0.0;
  std::uint64_t seed = 0;

  std::size_t size() const { return permutations.size(); }
  const GeometricPermutation* find(const std::vector<int>& order) const;
};

/// Canonical representative of an ordering up to reversal.
std::vector<int> canonical_permutation(std::vector<int> order);

struct SamplingOptions {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  bool refine = true;
  double graph_radius = 2.5;  // in units of the sample spacing
};

PermutationCatalog enumerate_geometric_permutations(const Scene& scene, const SamplingOptions& opts = {});

struct ComponentReport {
  int components = 0;           // after antipodal identification
  int oriented_clusters = 0;    // before it
  std::vector<std::size_t> cluster_sizes;  // oriented clusters, by first sample index
  int merged_by_arcs = 0;
  bool undersampled = false;
  std::vector<std::string> warnings;
  PermutationCatalog catalog;   // from the same samples
  bool matches_catalog = false;
};

/// Connected clusters of feasible sampled directions. Two samples are adjacent
/// when they are within graph_radius * spacing and the arc between them is
/// feasible; clusters are then joined when a sampled arc between them is
/// feasible, and finally identified with their antipodal clusters.
ComponentReport count_components(const Scene& scene, const SamplingOptions& opts = {});

struct TritangentClass {
  Line3 line;
  std::vector<int> order;            // order of the balls along line.direction
  std::string tag;                   // "crosses triangle", "misses triangle", "parallel to plane", ...
  bool crosses_triangle = false;
  std::array<double, 3> barycentric{};  // of the crossing point, when it exists
};

struct BoundaryClassification {
  bool on_boundary = false;       // some tritangent crosses the triangle of centers
  bool crosses_triangle = false;  // same, kept under the predicate's name
  bool skipped = false;
  std::string tag;
  std::vector<TritangentClass> tritangents;
  double slack = 0.0;             // minimax slack at u (<= 0 on the sextic)
  bool empirical_on_boundary = false;  // slack vanishes and both sides are observed nearby
  int probe_feasible = 0, probe_infeasible = 0;
  bool consistent = false;
  std::optional<Line3> stabbing_line;  // transversal in direction u meeting the open balls
};

/// Classifies a sextic direction u of a triple: u bounds the cone iff a real
/// tritangent with direction u crosses the triangle of centers. The empirical
/// side compares against the minimax slack at u and a small cap probe.
BoundaryClassification classify_boundary_direction(const Triple& triple, const Vector3d& u,
                                                   std::uint64_t seed = 1, const TangentOptions& topts = {});

struct PinnedResult {
  bool pinned = false;
  std::string tag;
  Line3 line;           // the planar tritangent, oriented from B_0 to B_2
  Vector3d normal;      // unit normal of the tangent line within the plane of centers
};

/// A line in the plane of centers tangent to the three traced discs, with
/// B_1's disc on the other side from those of B_0 and B_2 and B_1 met between
/// them.
PinnedResult pinned_planar_tritangent(const Triple& triple, double rel_tol = 1e-9);
bool is_pinned_planar(const Triple& triple, double rel_tol = 1e-9);

}  // namespace ballcone
