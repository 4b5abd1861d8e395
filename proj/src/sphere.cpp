#include "ballcone/sphere.hpp"

#include <cmath>
#include <numbers>

namespace ballcone {

Vec random_unit_vector(int dimension, Rng& rng) {
  Vec v(dimension);
  do {
    for (int k = 0; k < dimension; ++k) v[k] = rng.normal();
  } while (v.norm() < 1e-12);
  return v.normalized();
}

Eigen::MatrixXd random_rotation(int dimension, Rng& rng) {
  Eigen::MatrixXd g(dimension, dimension);
  for (int i = 0; i < dimension; ++i)
    for (int j = 0; j < dimension; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dimension; ++k)
    if (r(k, k) < 0) q.col(k) = -q.col(k);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return q;
}

std::vector<Vec> sphere_samples(int dimension, std::size_t count, std::uint64_t seed) {
  const std::size_t half = (count + 1) / 2;
  std::vector<Vec> out;
  out.reserve(2 * half);
  Rng rng(seed);
  if (dimension == 2) {
    const double phase = rng.uniform() * std::numbers::pi / static_cast<double>(half);
    for (std::size_t k = 0; k < half; ++k) {
      const double a = phase + std::numbers::pi * static_cast<double>(k) / static_cast<double>(half);
      Vec v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
    }
  } else if (dimension == 3) {
    // Fibonacci lattice on the upper hemisphere; the antipodes complete it.
    const Eigen::MatrixXd rot = random_rotation(3, rng);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < half; ++k) {
      const double z = 1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(half);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(k);
      Vec v(3);
      v << r * std::cos(phi), r * std::sin(phi), z;
      out.push_back(rot * v);
    }
  } else {
    for (std::size_t k = 0; k < half; ++k) out.push_back(random_unit_vector(dimension, rng));
  }
  for (std::size_t k = 0; k < half; ++k) out.push_back(-out[k]);
  return out;
}

double sample_spacing(int dimension, std::size_t count) {
  const double n = static_cast<double>(std::max<std::size_t>(count, 1));
  if (dimension == 2) return 2.0 * std::numbers::pi / n;
  // area of S^{d-1}: 2 pi^{d/2} / Gamma(d/2)
  const double area = 2.0 * std::pow(std::numbers::pi, dimension / 2.0) / std::tgamma(dimension / 2.0);
  return std::pow(area / n, 1.0 / (dimension - 1));
}

double angle_between(const Vec& a, const Vec& b) {
  // atan2 form stays accurate for tiny and near-pi angles.
  const double s = (a - b).norm(), t = (a + b).norm();
  return 2.0 * std::atan2(s, t);
}

Vec geodesic_midpoint(const Vec& a, const Vec& b) { return (a + b).normalized(); }

Vec slerp(const Vec& a, const Vec& b, double s) {
  const double theta = angle_between(a, b);
  if (theta < 1e-15) return a;
  Vec t = b - a.dot(b) * a;
  const double tn = t.norm();
  if (tn < 1e-300) return a;
  return move_along(a, t / tn, s * theta);
}

Vec move_along(const Vec& u, const Vec& tangent, double theta) {
  return (std::cos(theta) * u + std::sin(theta) * tangent).normalized();
}

Vec cap_sample(const Vec& u, double radius, Rng& rng) {
  const int d = static_cast<int>(u.size());
  Vec t(d);
  for (int k = 0; k < d; ++k) t[k] = rng.normal();
  t -= t.dot(u) * u;
  const double tn = t.norm();
  if (tn < 1e-300) return u;
  const double theta = radius * std::pow(rng.uniform(), 1.0 / std::max(1, d - 1));
  return move_along(u, t / tn, theta);
}

}  // namespace ballcone
