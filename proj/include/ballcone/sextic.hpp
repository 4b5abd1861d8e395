#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "ballcone/geom.hpp"
#include "ballcone/ternary_form.hpp"

namespace ballcone {

using Eigen::Vector3d;

class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Three balls in R^3. Pairwise disjoint unless `allow_overlap`.
struct Triple {
  std::array<Vector3d, 3> centers;
  std::array<double, 3> radii{1.0, 1.0, 1.0};
  bool allow_overlap = false;

  static Triple make(const std::array<Vector3d, 3>& centers, const std::array<double, 3>& radii,
                     bool allow_overlap = false);
  static Triple from_scene(const Scene& scene, std::array<int, 3> index = {0, 1, 2});
  Scene to_scene() const;

  double squared_radius(int k) const { return radii[k] * radii[k]; }
  Vector3d edge(int i, int j) const { return centers[j] - centers[i]; }
  double squared_edge(int i, int j) const { return edge(i, j).squaredNorm(); }
  bool collinear(double rel_tol = 1e-10) const;
};

/// The direction-sextic as a ternary sextic form, from centers and squared
/// radii over any ring. Entries: q s_k on the first row/column and
/// t_ij = delta_ij q - <e_ij, u>^2 elsewhere, bordered by ones.
template <class T>
TernaryForm<T> expand_direction_sextic(const std::array<std::array<T, 3>, 3>& centers,
                                       const std::array<T, 3>& squared_radii) {
  using Form = TernaryForm<T>;
  const Form q = Form::quadratic({T(1), T(0), T(0), T(0), T(1), T(0), T(0), T(0), T(1)});
  auto t_form = [&](int i, int j) {
    std::array<T, 3> e;
    for (int a = 0; a < 3; ++a) e[a] = centers[j][a] - centers[i][a];
    const T delta = e[0] * e[0] + e[1] * e[1] + e[2] * e[2];
    std::array<T, 9> m;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m[3 * a + b] = (a == b ? delta : T(0)) - e[a] * e[b];
    return Form::quadratic(m);
  };
  const Form one = Form::constant(T(1));
  const Form zero;
  std::array<Form, 3> qs{q * squared_radii[0], q * squared_radii[1], q * squared_radii[2]};
  const Form t01 = t_form(0, 1), t02 = t_form(0, 2), t12 = t_form(1, 2);
  const std::array<std::array<Form, 5>, 5> cayley{{
      {zero, one, one, one, one},
      {one, zero, qs[0], qs[1], qs[2]},
      {one, qs[0], zero, t01, t02},
      {one, qs[1], t01, zero, t12},
      {one, qs[2], t02, t12, zero},
  }};
  return determinant<T, 5>(cayley);
}

/// sigma(u) by a floating 5x5 determinant. Homogeneous of degree 6 in u.
double eval_sigma(const Triple& triple, const Vector3d& u);

/// Cached expansion of sigma (28 coefficients) and its derivatives.
class SexticModel {
 public:
  explicit SexticModel(const Triple& triple);

  const Triple& triple() const { return triple_; }
  const TernaryForm<double>& sigma() const { return sigma_; }

  double value(const Vector3d& u) const { return sigma_(u[0], u[1], u[2]); }
  Vector3d gradient(const Vector3d& u) const;
  Eigen::Matrix3d hessian_matrix(const Vector3d& u) const;
  /// det of the second derivatives; homogeneous of degree 12.
  double hessian(const Vector3d& u) const { return hessian_matrix(u).determinant(); }

  /// Sum of |coefficients|; bounds |sigma(u)| for unit u.
  double coefficient_norm() const { return coeff_norm_; }
  /// |sigma(u/|u|)| / coefficient_norm().
  double relative_value(const Vector3d& u) const;

 private:
  Triple triple_;
  TernaryForm<double> sigma_;
  std::array<TernaryForm<double>, 3> first_;
  std::array<TernaryForm<double>, 6> second_;  // 00 01 02 11 12 22
  double coeff_norm_ = 0.0;
};

double eval_hessian_sigma(const Triple& triple, const Vector3d& u);

struct Line3 {
  Vector3d point;      // foot of the perpendicular from c_0
  Vector3d direction;  // unit
};

/// One-parameter family {c + rho (cos a e1 + sin a e2)} of tangent lines sharing a direction.
struct TangentCircle {
  Vector3d center;
  double radius = 0.0;
  Vector3d normal;  // the common direction
};

struct TangentSet {
  std::vector<Line3> lines;
  std::optional<TangentCircle> family;
  int rank = 3;  // rank of the linear part of the tangent system
};

struct TangentOptions {
  double sigma_tol = 1e-8;   // |sigma| / coefficient norm, u normalized
  double rank_tol = 1e-10;   // singular values below rank_tol * max are zero
  double sphere_tol = 1e-6;  // | |p|^2 - s_0 | / s_0 accepted for the unique solution
};

/// Real common tangents with direction u. Throws PreconditionError when
/// sigma(u) is not zero within tolerance.
TangentSet tangent_lines_for_direction(const Triple& triple, const Vector3d& u, const TangentOptions& opts = {});

double distance_point_line(const Vector3d& c, const Line3& line);

/// Conic of directions {u : u^T M u = 0}.
struct QuadraticFormOnDirections {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
  int positive = 0, negative = 0, zero = 0;  // signature
  bool degenerate = false;                   // pair not disjoint: every direction is feasible

  double operator()(const Vector3d& u) const { return u.dot(matrix * u); }
};

/// u^T M u = t_ij - (r_i + r_j)^2 q; negative exactly on directions admitting
/// a transversal of the pair, zero on inner special bitangent directions.
QuadraticFormOnDirections pair_cone_quadratic(const Ball& first, const Ball& second);

}  // namespace ballcone
