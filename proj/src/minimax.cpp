// Exact active-set solver for min_x max_i (|x - c_i| - r_i).

#include <algorithm>
#include <cmath>
#include <limits>

#include "ballcone/geom.hpp"

namespace ballcone {
namespace {

struct Candidate {
  Vec x;
  double t = 0.0;
  bool hull_ok = false;  // x is a non-negative combination of the subset centers
};

double objective(std::span<const ProjectedDisk> disks, const Vec& x) {
  double f = -std::numeric_limits<double>::infinity();
  for (const auto& d : disks) f = std::max(f, (x - d.center).norm() - d.radius);
  return f;
}

// Points x in aff(centers of S) with |x - c_i| - r_i = t for all i in S.
// Writing x = c_0 + E alpha, the differences of the squared equations are
// linear in (alpha, t); substituting back into |x - c_0| = r_0 + t leaves a
// quadratic in t.
int equidistant_points(std::span<const ProjectedDisk> disks, std::span<const int> subset, double scale,
                       Candidate out[2]) {
  const int k = static_cast<int>(subset.size());
  const ProjectedDisk& d0 = disks[subset[0]];
  const double r0 = d0.radius;
  const Eigen::Index m = d0.center.size();
  Eigen::MatrixXd edges(m, k - 1);
  Eigen::VectorXd g(k - 1), h(k - 1);
  for (int a = 1; a < k; ++a) {
    const ProjectedDisk& da = disks[subset[a]];
    edges.col(a - 1) = da.center - d0.center;
    g[a - 1] = 0.5 * (edges.col(a - 1).squaredNorm() - da.radius * da.radius + r0 * r0);
    h[a - 1] = r0 - da.radius;
  }
  const Eigen::MatrixXd gram = edges.transpose() * edges;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  lu.setThreshold(1e-12);
  if (lu.rank() < k - 1) return 0;
  const Eigen::VectorXd a0 = lu.solve(g);
  const Eigen::VectorXd a1 = lu.solve(h);
  const Eigen::VectorXd y0 = edges * a0;
  const Eigen::VectorXd y1 = edges * a1;

  const double qa = y1.squaredNorm() - 1.0;
  const double qb = 2.0 * (y0.dot(y1) - r0);
  const double qc = y0.squaredNorm() - r0 * r0;
  double roots[2];
  int nroots = 0;
  if (std::abs(qa) <= 1e-14 * (1.0 + std::abs(qb) + std::abs(qc) / scale)) {
    if (qb != 0.0) roots[nroots++] = -qc / qb;
  } else {
    double disc = qb * qb - 4.0 * qa * qc;
    const double disc_floor = 1e-13 * (qb * qb + std::abs(4.0 * qa * qc));
    if (disc < 0.0 && disc > -disc_floor) disc = 0.0;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double qq = -0.5 * (qb + std::copysign(sq, qb));
      if (qq != 0.0) {
        roots[nroots++] = qq / qa;
        roots[nroots++] = qc / qq;
      } else {
        roots[nroots++] = 0.0;
      }
    }
  }

  const double weight_eps = 1e-10;
  int count = 0;
  for (int ri = 0; ri < nroots; ++ri) {
    const double t = roots[ri];
    if (!std::isfinite(t)) continue;
    bool radii_ok = true;
    for (int a = 0; a < k; ++a)
      if (disks[subset[a]].radius + t < -1e-12 * scale) radii_ok = false;
    if (!radii_ok) continue;
    const Eigen::VectorXd alpha = a0 + t * a1;
    Candidate& c = out[count++];
    c.x = d0.center + edges * alpha;
    c.t = t;
    c.hull_ok = (1.0 - alpha.sum()) >= -weight_eps && (alpha.array() >= -weight_eps).all();
  }
  return count;
}

// Lexicographic k-subsets of {0..n-1}.
bool next_subset(std::vector<int>& s, int n) {
  const int k = static_cast<int>(s.size());
  for (int i = k - 1; i >= 0; --i) {
    if (s[i] < n - k + i) {
      ++s[i];
      for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

DiskIntersection disks_common_point(std::span<const ProjectedDisk> disks, double tol, SolveMode mode) {
  if (disks.empty()) throw GeometryError("disks_common_point: empty disk list");
  const int n = static_cast<int>(disks.size());
  const Eigen::Index m = disks[0].center.size();
  for (const auto& d : disks)
    if (d.center.size() != m) throw GeometryError("disks_common_point: mixed dimensions");

  double scale = 0.0;
  double pair_bound = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    scale = std::max(scale, disks[i].radius);
    for (int j = i + 1; j < n; ++j) {
      const double dist = (disks[i].center - disks[j].center).norm();
      scale = std::max(scale, dist);
      pair_bound = std::max(pair_bound, 0.5 * (dist - disks[i].radius - disks[j].radius));
    }
  }
  scale = std::max(scale, 1e-300);

  DiskIntersection result;
  if (mode == SolveMode::Decide && pair_bound > tol) {
    result.slack = pair_bound;
    result.feasible = false;
    result.status = SolverStatus::LowerBound;
    return result;
  }

  const double dominate_eps = 1e-12 * scale;
  Vec best_x = disks[0].center;
  double best_f = objective(disks, best_x);
  bool certified = false;

  const int max_k = std::min<int>(n, static_cast<int>(m) + 1);
  for (int k = 1; k <= max_k && !certified; ++k) {
    std::vector<int> subset(k);
    for (int a = 0; a < k; ++a) subset[a] = a;
    do {
      if (k == 1) {
        const Vec& x = disks[subset[0]].center;
        const double f = objective(disks, x);
        if (f < best_f) {
          best_f = f;
          best_x = x;
        }
        if (f <= -disks[subset[0]].radius + dominate_eps) {
          best_f = f;
          best_x = x;
          certified = true;
        }
      } else {
        Candidate cand[2];
        const int nc = equidistant_points(disks, subset, scale, cand);
        for (int ci = 0; ci < nc; ++ci) {
          const double f = objective(disks, cand[ci].x);
          if (f < best_f) {
            best_f = f;
            best_x = cand[ci].x;
          }
          if (cand[ci].hull_ok && f <= cand[ci].t + dominate_eps) {
            best_f = f;
            best_x = cand[ci].x;
            certified = true;
            break;
          }
        }
      }
    } while (!certified && next_subset(subset, n));
  }

  result.point = best_x;
  result.slack = best_f;
  result.feasible = best_f <= tol;
  // A feasible point is its own witness; only the minimal slack value needs the certificate.
  result.status = certified ? SolverStatus::Optimal : SolverStatus::Uncertified;
  const double act_eps = 1e-9 * scale;
  for (int i = 0; i < n; ++i)
    if ((best_x - disks[i].center).norm() - disks[i].radius >= best_f - act_eps) result.active.push_back(i);
  return result;
}

}  // namespace ballcone
