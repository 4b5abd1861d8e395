#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ballcone/sextic.hpp"

namespace ballcone {

// Flex probe for boundary arcs of the direction-sextic.
//
// A boundary tritangent direction is rotated to e_3. Projecting along it gives
// a planar triangle c~_0 = 0, c~_1 = (a, 0), c~_2 = (b, c) with an interior
// point p of barycentric weights p_k; the balls are recovered by lifting the
// vertices to heights x_k. In this frame H(sigma)(0,0,1) factors into a
// positive prefactor times H2 + H4, and the sign of H2 + H4 is read off a
// two-sheeted hyperboloid in the canonical coordinates w_k.
//
// Index convention: for a slot k, (i, j) are the other two slots in
// increasing order, so z_k = (x_i - x_j)^2 is the edge opposite k.

inline constexpr std::array<std::array<int, 2>, 3> kOpposite{{{1, 2}, {0, 2}, {0, 1}}};

/// Triangle + interior point + lift heights. Barycentric weights are
/// normalized to sum 1 on construction.
class LiftedConfig {
 public:
  static LiftedConfig make(double a, double b, double c, std::array<double, 3> weights, std::array<double, 3> heights);

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  const std::array<double, 3>& weights() const { return p_; }
  const std::array<double, 3>& heights() const { return x_; }

  Eigen::Vector2d vertex(int k) const;
  Eigen::Vector2d interior_point() const;
  Eigen::Vector2d v(int k) const { return interior_point() - vertex(k); }
  double s(int k) const { return v(k).squaredNorm(); }
  double r(int k) const { return v(k).norm(); }
  double q(int k) const { return p_[k] * r(k); }
  double z(int k) const;

  /// Balls c~_k + x_k e_3 with radius r_k; the line through p along e_3 is tangent to all.
  Triple lifted_triple() const;

 private:
  double a_ = 1, b_ = 0, c_ = 1;
  std::array<double, 3> p_{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::array<double, 3> x_{0, 0, 0};
};

/// <v_i, v_j> from barycentrics alone: (q_k^2 - q_i^2 - q_j^2) / (2 p_i p_j), diagonal s_k.
Eigen::Matrix3d gram_from_barycentrics(const LiftedConfig& cfg);

/// Q = sum(2 q_i^2 q_j^2 - q_k^4) from the squared edges q_k^2.
template <class T>
T q_from_squares(const std::array<T, 3>& q2) {
  return T(2) * (q2[0] * q2[1] + q2[1] * q2[2] + q2[0] * q2[2]) - (q2[0] * q2[0] + q2[1] * q2[1] + q2[2] * q2[2]);
}

struct QInvariant {
  double Q = 0.0;
  double delta = 0.0;  // Q / (4 prod p_k^2), equals a^2 c^2
  bool triangle = true;
};

QInvariant q_invariant(const LiftedConfig& cfg);
/// Same from explicit q (e.g. constructed to violate the triangle inequality).
QInvariant q_invariant_from_q(const std::array<double, 3>& q, const std::array<double, 3>& weights);

/// H2 = -a^2 c^2 prod p_k sum p_i p_j (x_i - x_j)^2 and
/// H4 = sum p_k^3 s_k (x_i - x_k)^2 (x_j - x_k)^2, over any field.
template <class T>
std::array<T, 2> lifted_h2_h4(const T& a2c2, const std::array<T, 3>& p, const std::array<T, 3>& s,
                              const std::array<T, 3>& x) {
  T pairs(0), quartic(0);
  for (int k = 0; k < 3; ++k) {
    const int i = kOpposite[k][0], j = kOpposite[k][1];
    const T dij = x[i] - x[j];
    pairs += p[i] * p[j] * dij * dij;
    const T dik = x[i] - x[k], djk = x[j] - x[k];
    quartic += p[k] * p[k] * p[k] * s[k] * dik * dik * djk * djk;
  }
  return {-a2c2 * p[0] * p[1] * p[2] * pairs, quartic};
}

/// 2^12 5^2 a^6 c^6 / (sum p)^5.
template <class T>
T hessian_prefactor(const T& a2c2, const T& weight_sum) {
  const T w2 = weight_sum * weight_sum;
  return T(4096 * 25) * a2c2 * a2c2 * a2c2 / (w2 * w2 * weight_sum);
}

struct HessianDecomposition {
  double h2 = 0.0;
  double h4 = 0.0;
  double prefactor = 0.0;
  double total = 0.0;  // prefactor * (h2 + h4) = H(sigma)(0,0,1) of the lifted triple
};

HessianDecomposition lifted_hessian_decomposition(const LiftedConfig& cfg);

/// Canonical coordinates attached to triangle edges q_k.
struct CanonicalCoords {
  std::array<double, 3> q{1, 1, 1};
  double Q = 3.0;
  std::array<double, 3> canonical_a{};  // Q / (4 q_i^2 q_j^2)
  std::array<double, 3> beta{};         // (a_i + a_j - a_k) / 2
  double beta_pair_sum = 0.0;           // sum beta_i beta_j
  double hyperboloid_constant = 0.0;    // Q^3 / (4^3 prod q_k^4)

  static CanonicalCoords from_q(const std::array<double, 3>& q);
  static CanonicalCoords from_config(const LiftedConfig& cfg);

  /// w_k with p_i p_j z_k = q_k^2 w_k.
  static std::array<double, 3> w_of(const LiftedConfig& cfg);
  std::array<double, 3> t_of(const std::array<double, 3>& w) const;
  /// Octant vertex V_k = 1 - ((q_i - q_j)/q_k)^2.
  std::array<double, 3> octant_vertex() const;
};

/// *H(w) = sum w_i w_j - sum a_k w_k.
double star_h_canonical(const CanonicalCoords& coords, const std::array<double, 3>& w);
/// sum t_i t_j with t = w - beta; *H = asymptotic_cone - hyperboloid_constant.
double asymptotic_cone(const CanonicalCoords& coords, const std::array<double, 3>& w);

struct OctantCertificate {
  std::array<double, 3> vertex{};
  double star_h_at_vertex = 0.0;
  double closed_form = 0.0;        // 3 prod (q_i + q_j - q_k)^2 / (4 prod q_k^2)
  double factorization_error = 0.0;  // relative
  double plane_slack = 0.0;        // sum V_k - Q sum q_k^2 / (8 prod q_k^2)
  bool pass = false;
  std::string tag;                 // "boundary case" when the q-triangle is flat
};

OctantCertificate certify_octant_separation(const CanonicalCoords& coords);

struct FlexSample {
  Vector3d direction;
  std::array<int, 3> order{};
  double h2 = 0.0, h4 = 0.0;
  double margin = 0.0;              // (h2 + h4) / (|h2| + |h4|)
  double hessian_sextic = 0.0;      // H(sigma)(u) of the triple itself
  double hessian_lifted = 0.0;      // prefactor * (h2 + h4)
  std::array<double, 3> w{}, vertex{};
  bool disjointness_ok = true;      // w_k > V_k for every k
  double star_h_vertex = 0.0;       // normalized *H(V)
};

struct FlexReport {
  int requested = 0;
  std::vector<FlexSample> samples;
  int skipped = 0;
  std::vector<std::string> skip_tags;
  double min_margin = 0.0;
  double min_vertex_value = 0.0;
  int disjointness_violations = 0;
  int nonpositive = 0;
  bool pass = false;
};

struct FlexOptions {
  int boundary_samples = 200;
  std::uint64_t seed = 1;
  double tol = kDefaultTol;
  double margin_floor = 1e-12;
};

/// Samples sextic arcs on the boundary of every non-empty direction cone of
/// the triple and checks H2 + H4 > 0 there.
FlexReport certify_flex_free(const Triple& triple, const FlexOptions& opts = {});

/// LiftedConfig of a tritangent: project along u, take the tangent point as
/// interior point, heights along u. Fails (nullopt) if the point is not
/// interior to the projected triangle.
std::optional<LiftedConfig> lifted_config_for_tangent(const Triple& triple, const Vector3d& u,
                                                      const Eigen::Vector2d& tangent_point_in_plane,
                                                      const Eigen::Matrix<double, 3, 2>& plane_basis);

}  // namespace ballcone
