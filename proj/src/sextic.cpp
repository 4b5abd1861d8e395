#include "ballcone/sextic.hpp"

#include <cmath>
#include <sstream>

namespace ballcone {

Triple Triple::make(const std::array<Vector3d, 3>& centers, const std::array<double, 3>& radii, bool allow_overlap) {
  Triple t{centers, radii, allow_overlap};
  validate(t.to_scene());
  return t;
}

Triple Triple::from_scene(const Scene& scene, std::array<int, 3> index) {
  if (scene.dimension != 3) throw GeometryError("a ball triple lives in R^3");
  Triple t;
  t.allow_overlap = scene.allow_overlap;
  for (int k = 0; k < 3; ++k) {
    const int i = index[k];
    if (i < 0 || static_cast<std::size_t>(i) >= scene.balls.size()) throw GeometryError("triple index out of range");
    t.centers[k] = scene.balls[i].center;
    t.radii[k] = scene.balls[i].radius;
  }
  return t;
}

Scene Triple::to_scene() const {
  Scene s;
  s.dimension = 3;
  s.allow_overlap = allow_overlap;
  for (int k = 0; k < 3; ++k) s.balls.push_back({centers[k], radii[k]});
  return s;
}

bool Triple::collinear(double rel_tol) const {
  const Vector3d a = edge(0, 1), b = edge(0, 2);
  return a.cross(b).norm() <= rel_tol * std::max(a.squaredNorm(), b.squaredNorm());
}

double eval_sigma(const Triple& triple, const Vector3d& u) {
  const double q = u.squaredNorm();
  auto t = [&](int i, int j) {
    const Vector3d e = triple.edge(i, j);
    return e.squaredNorm() * q - std::pow(e.dot(u), 2);
  };
  Eigen::Matrix<double, 5, 5> m;
  const double qs0 = q * triple.squared_radius(0), qs1 = q * triple.squared_radius(1),
               qs2 = q * triple.squared_radius(2);
  const double t01 = t(0, 1), t02 = t(0, 2), t12 = t(1, 2);
  m << 0, 1, 1, 1, 1,
       1, 0, qs0, qs1, qs2,
       1, qs0, 0, t01, t02,
       1, qs1, t01, 0, t12,
       1, qs2, t02, t12, 0;
  return m.determinant();
}

SexticModel::SexticModel(const Triple& triple) : triple_(triple) {
  std::array<std::array<double, 3>, 3> c;
  std::array<double, 3> s;
  // sigma depends on edges only; centering on c_0 keeps coefficients small.
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) c[k][a] = triple.centers[k][a] - triple.centers[0][a];
    s[k] = triple.squared_radius(k);
  }
  sigma_ = expand_direction_sextic<double>(c, s);
  for (int a = 0; a < 3; ++a) first_[a] = sigma_.derivative(a);
  second_[0] = first_[0].derivative(0);
  second_[1] = first_[0].derivative(1);
  second_[2] = first_[0].derivative(2);
  second_[3] = first_[1].derivative(1);
  second_[4] = first_[1].derivative(2);
  second_[5] = first_[2].derivative(2);
  for (double x : sigma_.coefficients()) coeff_norm_ += std::abs(x);
}

Vector3d SexticModel::gradient(const Vector3d& u) const {
  return {first_[0](u[0], u[1], u[2]), first_[1](u[0], u[1], u[2]), first_[2](u[0], u[1], u[2])};
}

Eigen::Matrix3d SexticModel::hessian_matrix(const Vector3d& u) const {
  auto ev = [&](int k) { return second_[k](u[0], u[1], u[2]); };
  Eigen::Matrix3d h;
  h(0, 0) = ev(0);
  h(0, 1) = h(1, 0) = ev(1);
  h(0, 2) = h(2, 0) = ev(2);
  h(1, 1) = ev(3);
  h(1, 2) = h(2, 1) = ev(4);
  h(2, 2) = ev(5);
  return h;
}

double SexticModel::relative_value(const Vector3d& u) const {
  const Vector3d n = u.normalized();
  return std::abs(value(n)) / std::max(coeff_norm_, 1e-300);
}

double eval_hessian_sigma(const Triple& triple, const Vector3d& u) { return SexticModel(triple).hessian(u); }

double distance_point_line(const Vector3d& c, const Line3& line) {
  const Vector3d d = c - line.point;
  return (d - d.dot(line.direction) * line.direction).norm();
}

TangentSet tangent_lines_for_direction(const Triple& triple, const Vector3d& u_in, const TangentOptions& opts) {
  if (!(u_in.norm() > 0.0)) throw GeometryError("tangent_lines_for_direction: zero direction");
  const Vector3d u = u_in.normalized();
  const SexticModel model(triple);
  const double rel = model.relative_value(u);
  if (!(rel <= opts.sigma_tol)) {
    std::ostringstream os;
    os << "direction is not on the direction-sextic (|sigma|/norm = " << rel << " > " << opts.sigma_tol << ")";
    throw PreconditionError(os.str());
  }

  // Frame with c_0 at the origin: <p, c_i> = a_i / (2q), <p, u> = 0, <p, p> = s_0.
  const double q = 1.0;
  const double s0 = triple.squared_radius(0);
  Eigen::Matrix3d a;
  Vector3d rhs;
  for (int i = 1; i <= 2; ++i) {
    const Vector3d ci = triple.edge(0, i);
    const double t0i = ci.squaredNorm() * q - std::pow(ci.dot(u), 2);
    const double ai = t0i + (s0 - triple.squared_radius(i)) * q;
    a.row(i - 1) = ci.transpose();
    rhs[i - 1] = ai / (2.0 * q);
  }
  a.row(2) = u.transpose();
  rhs[2] = 0.0;

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector3d sv = svd.singularValues();
  int rank = 0;
  for (int k = 0; k < 3; ++k)
    if (sv[k] > opts.rank_tol * sv[0]) ++rank;

  TangentSet out;
  out.rank = rank;
  // Minimum-norm solution restricted to the numerical range.
  Vector3d p0 = Vector3d::Zero();
  const Eigen::Matrix3d& U = svd.matrixU();
  const Eigen::Matrix3d& V = svd.matrixV();
  for (int k = 0; k < rank; ++k) p0 += (U.col(k).dot(rhs) / sv[k]) * V.col(k);
  const double scale = std::max({s0, triple.squared_edge(0, 1), triple.squared_edge(0, 2)});
  if ((a * p0 - rhs).norm() > 1e-7 * scale) return out;  // inconsistent: no real tangent

  const Vector3d& c0 = triple.centers[0];
  if (rank == 3) {
    if (std::abs(p0.squaredNorm() - s0) <= opts.sphere_tol * s0) out.lines.push_back({c0 + p0, u});
  } else if (rank == 2) {
    const Vector3d n = V.col(2);
    const double rem = s0 - p0.squaredNorm();
    if (rem >= -opts.sphere_tol * s0) {
      const double lam = std::sqrt(std::max(0.0, rem));
      out.lines.push_back({c0 + p0 + lam * n, u});
      if (lam > 0.0) out.lines.push_back({c0 + p0 - lam * n, u});
    }
  } else {
    const double rem = s0 - p0.squaredNorm();
    if (rem >= -opts.sphere_tol * s0) out.family = TangentCircle{c0 + p0, std::sqrt(std::max(0.0, rem)), u};
  }
  return out;
}

QuadraticFormOnDirections pair_cone_quadratic(const Ball& first, const Ball& second) {
  if (first.center.size() != 3 || second.center.size() != 3) throw GeometryError("pair cone conic needs R^3 balls");
  const Vector3d e = second.center - first.center;
  const double delta = e.squaredNorm();
  const double rsum2 = std::pow(first.radius + second.radius, 2);
  QuadraticFormOnDirections f;
  f.matrix = (delta - rsum2) * Eigen::Matrix3d::Identity() - e * e.transpose();
  f.degenerate = !(delta > rsum2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(f.matrix);
  const double tol = 1e-12 * std::max(delta, rsum2);
  for (int k = 0; k < 3; ++k) {
    const double ev = es.eigenvalues()[k];
    if (ev > tol)
      ++f.positive;
    else if (ev < -tol)
      ++f.negative;
    else
      ++f.zero;
  }
  return f;
}

}  // namespace ballcone
