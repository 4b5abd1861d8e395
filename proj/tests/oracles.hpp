#pragma once

// Slow reference computations used to check the library. None of them call
// into the code under test beyond plain data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ballcone/random.hpp"

namespace oracle {

using Eigen::Vector2d;
using Eigen::Vector3d;

struct Disk2 {
  Vector2d c;
  double r;
};

inline double max_excess(const std::vector<Disk2>& d, const Vector2d& x) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& k : d) m = std::max(m, (x - k.c).norm() - k.r);
  return m;
}

/// Do the disks inflated by t share a point? A non-empty intersection holds
/// its leftmost point, which is the leftmost point of a disk or a crossing of
/// two circles.
inline bool inflated_meet(const std::vector<Disk2>& d, double t) {
  const double eps = 1e-12 * (1.0 + std::abs(t));
  std::vector<Vector2d> cand;
  for (const auto& k : d) {
    if (k.r + t < 0) return false;
    cand.push_back(k.c - Vector2d(k.r + t, 0));
  }
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const double ri = d[i].r + t, rj = d[j].r + t;
      const Vector2d e = d[j].c - d[i].c;
      const double L = e.norm();
      if (L == 0 || L > ri + rj || L < std::abs(ri - rj)) continue;
      const double a = (L * L + ri * ri - rj * rj) / (2 * L);
      const double h = std::sqrt(std::max(0.0, ri * ri - a * a));
      const Vector2d m = d[i].c + a * e / L, n(-e.y() / L, e.x() / L);
      cand.push_back(m + h * n);
      cand.push_back(m - h * n);
    }
  for (const auto& x : cand) {
    bool in = true;
    for (const auto& k : d) in = in && (x - k.c).norm() <= k.r + t + eps;
    if (in) return true;
  }
  return false;
}

/// min_x max_k (|x - c_k| - r_k) by bisection on inflated_meet.
inline double minimax_slack(const std::vector<Disk2>& d) {
  double lo = -std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& k : d) lo = std::max(lo, -k.r);  // no point is deeper than the smallest disk
  for (const auto& k : d) hi = std::max(hi, (k.c - d[0].c).norm() - k.r);
  while (hi - lo > 1e-13 * (1.0 + std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    (inflated_meet(d, mid) ? hi : lo) = mid;
  }
  return hi;
}

/// Cayley-style sextic value from pairwise data, via a fresh LU determinant.
inline double sigma_value(const std::array<Vector3d, 3>& c, const std::array<double, 3>& r, const Vector3d& u) {
  const double q = u.squaredNorm();
  auto t = [&](int i, int j) {
    const Vector3d e = c[j] - c[i];
    return e.squaredNorm() * q - std::pow(e.dot(u), 2);
  };
  Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
  for (int k = 1; k < 5; ++k) m(0, k) = m(k, 0) = 1.0;
  for (int k = 0; k < 3; ++k) m(1, k + 2) = m(k + 2, 1) = q * r[k] * r[k];
  m(2, 3) = m(3, 2) = t(0, 1);
  m(2, 4) = m(4, 2) = t(0, 2);
  m(3, 4) = m(4, 3) = t(1, 2);
  return m.partialPivLu().determinant();
}

/// Central-difference Hessian matrix of a function on R^3.
template <class F>
Eigen::Matrix3d fd_hessian(const F& f, const Vector3d& u, double h) {
  Eigen::Matrix3d H;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Vector3d ea = Vector3d::Unit(a) * h, eb = Vector3d::Unit(b) * h;
      H(a, b) = (f(u + ea + eb) - f(u + ea - eb) - f(u - ea + eb) + f(u - ea - eb)) / (4 * h * h);
    }
  return H;
}

/// Minimax slack of the balls projected along u; <= 0 iff a line with direction u meets all.
inline double line_slack(const std::vector<Vector3d>& c, const std::vector<double>& r, const Vector3d& u_in) {
  const Vector3d u = u_in.normalized();
  Vector3d a = u.unitOrthogonal();
  Vector3d b = u.cross(a);
  std::vector<Disk2> d;
  for (std::size_t k = 0; k < c.size(); ++k) d.push_back({Vector2d(a.dot(c[k]), b.dot(c[k])), r[k]});
  return minimax_slack(d);
}

}  // namespace oracle
