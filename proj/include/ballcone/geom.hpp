#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ballcone {

using Vec = Eigen::VectorXd;

/// Default feasibility tolerance, in scene length units.
inline constexpr double kDefaultTol = 1e-10;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Ball {
  Vec center;
  double radius = 1.0;

  double squared_radius() const { return radius * radius; }
};

/// Balls in R^d listed in their prescribed intersection order.
///
/// The balls must be pairwise disjoint (strictly). Scenes that deliberately
/// model tangent or overlapping balls set `allow_overlap`.
struct Scene {
  int dimension = 3;
  std::vector<Ball> balls;
  bool allow_overlap = false;

  std::size_t size() const { return balls.size(); }
  /// Largest center-to-center distance plus the largest radius; 1 for a single ball.
  double diameter() const;
};

/// Checks dimensions, radii and (unless allowed) strict pairwise disjointness.
/// Throws GeometryError describing the first violation.
void validate(const Scene& scene);

Scene make_scene(int dimension, std::vector<Ball> balls, bool allow_overlap = false);

/// A unit vector. Antipodes are distinct directions; use antipode() explicitly.
class Direction {
 public:
  explicit Direction(const Vec& v, double zero_tol = 1e-300);

  static Direction axis(int dimension, int k);

  const Vec& vec() const { return v_; }
  int dimension() const { return static_cast<int>(v_.size()); }
  double operator[](Eigen::Index k) const { return v_[k]; }
  Direction antipode() const { return Direction(-v_); }

 private:
  Vec v_;
};

struct ProjectedDisk {
  Vec center;  // coordinates in orthonormal_complement(u)
  double radius = 0.0;
};

/// Orthonormal basis of u-perp as the columns of a d x (d-1) matrix.
/// Gram-Schmidt over the standard basis with the axis of largest |u_k| dropped.
Eigen::MatrixXd orthonormal_complement(const Direction& u);

std::vector<ProjectedDisk> project_to_orthogonal_plane(const Scene& scene, const Direction& u);

enum class SolverStatus {
  Optimal,      // point is a certified minimiser
  LowerBound,   // decide mode: a disk pair already separates by more than tol
  Uncertified,  // no candidate passed the optimality certificate
};

enum class SolveMode {
  Exact,   // always locate the minimiser
  Decide,  // allowed to stop at a pairwise separation certificate
};

/// Result of min_x max_i (|x - c_i| - r_i).
struct DiskIntersection {
  Vec point;                 // minimiser (or best point found; empty for LowerBound)
  double slack = 0.0;        // objective value at `point`; <= 0 means a common point
  bool feasible = false;     // slack <= tol
  SolverStatus status = SolverStatus::Optimal;
  std::vector<int> active;   // disks attaining the max at `point`
};

/// Decides whether closed disks (balls, in any dimension) share a point.
///
/// The minimax optimum lies in the convex hull of its active centers, so it is
/// found among the weighted-equidistant points of subsets of at most m+1
/// disks. A candidate is accepted only with a KKT certificate (non-negative
/// hull weights and no dominating disk). A positive slack without certificate
/// is reported as Uncertified rather than as infeasible.
/// In Decide mode the slack of an infeasible instance may be a lower bound only.
DiskIntersection disks_common_point(std::span<const ProjectedDisk> disks, double tol = kDefaultTol,
                                    SolveMode mode = SolveMode::Exact);

struct OrderResult {
  std::vector<int> order;
  bool tie = false;
  int tie_first = -1;
  int tie_second = -1;
};

/// Indices sorted by <c_i, u>. Chord midpoints of a line are the projections
/// of the centers, so for disjoint balls this is the order of traversal.
/// `tie_tol` < 0 selects 1e-9 * scene diameter.
OrderResult transversal_order(const Scene& scene, const Direction& u, double tie_tol = -1.0);

struct SceneFlags {
  bool thinly_distributed = false;   // |c_i - c_j| >= 2 (r_i + r_j)
  bool pairwise_inflatable = false;  // |c_i - c_j|^2 >= 2 (r_i^2 + r_j^2)
  bool collinear_centers = false;    // centers span an affine space of dim <= 1
  bool pairwise_disjoint = false;
};

SceneFlags scene_classification(const Scene& scene, double rank_tol = 1e-9);

enum class SceneLayout {
  Box,          // rejection sampling in a box
  Transversal,  // balls strung along a random line
  Triangle,     // three nearly touching balls on a triangle: three permutations
  Corridors,    // triangle plus one or two large balls on its axis: two permutations
};

const char* to_string(SceneLayout layout);
SceneLayout parse_layout(const std::string& name);

struct SceneGenOptions {
  int n = 3;
  int dimension = 3;
  double r_min = 1.0;
  double r_max = 1.0;
  std::uint64_t seed = 0;
  bool with_transversal = false;
  double spread = 1.0;        // scales the sampling box / gaps
  int max_attempts = 100000;
  SceneLayout layout = SceneLayout::Box;  // with_transversal overrides Box
};

struct GeneratedScene {
  Scene scene;
  std::optional<Direction> construction_direction;  // set when with_transversal
  std::vector<int> construction_order;
};

/// Reproducible rejection sampler for strictly disjoint scenes (margin 1e-6).
/// With `with_transversal`, centers are placed near a random line so that the
/// line meets every ball in `construction_order`. Triangle needs n = 3,
/// Corridors n in {4, 5}; both are scaled by r_max and rotated at random.
GeneratedScene random_disjoint_scene(const SceneGenOptions& opts);

}  // namespace ballcone
