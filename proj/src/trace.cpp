#include "ballcone/trace.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace ballcone {

Chart Chart::coordinate(int axis) {
  if (axis < 0 || axis > 2) throw GeometryError("coordinate chart axis must be 0, 1 or 2");
  Chart c;
  c.axis = axis;
  c.origin = Vector3d::Unit(axis);
  const int a = axis == 0 ? 1 : 0;
  const int b = axis == 2 ? 1 : 2;
  c.ex = Vector3d::Unit(a);
  c.ey = Vector3d::Unit(b);
  return c;
}

Chart Chart::plane(const Vector3d& origin, const Vector3d& ex, const Vector3d& ey) {
  Chart c;
  c.axis = -1;
  c.origin = origin;
  c.ex = ex;
  c.ey = ey;
  if (std::abs(origin.dot(ex.cross(ey))) < 1e-12) throw GeometryError("chart plane passes through the origin");
  return c;
}

std::optional<Eigen::Vector2d> Chart::coordinates(const Vector3d& u) const {
  // Solve lambda u = origin + x ex + y ey.
  Eigen::Matrix3d m;
  m.col(0) = u;
  m.col(1) = -ex;
  m.col(2) = -ey;
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) return std::nullopt;
  const Vector3d sol = lu.solve(origin);
  if (std::abs(sol[0]) < 1e-14) return std::nullopt;
  return Eigen::Vector2d(sol[1], sol[2]);
}

const CurveTrace* TraceSet::find(const std::string& name) const {
  for (const auto& c : curves)
    if (c.name == name) return &c;
  return nullptr;
}

std::vector<Polyline> contour_zero_set(const std::function<double(double, double)>& f, const TraceOptions& opts) {
  const int n = opts.resolution;
  if (n < 1) throw GeometryError("trace resolution must be positive");
  const double h = 2.0 * opts.half_width / n;
  const double x0 = opts.center.x() - opts.half_width, y0 = opts.center.y() - opts.half_width;
  auto gx = [&](int i) { return x0 + h * i; };
  auto gy = [&](int j) { return y0 + h * j; };

  std::vector<double> val(static_cast<std::size_t>(n + 1) * (n + 1));
  auto at = [&](int i, int j) -> double& { return val[static_cast<std::size_t>(j) * (n + 1) + i]; };
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) at(i, j) = f(gx(i), gy(j));
  auto neg = [](double v) { return v < 0.0; };

  // Edge ids: 2*(j*(n+1)+i) horizontal from (i,j), +1 vertical from (i,j).
  auto hid = [&](int i, int j) { return 2L * (static_cast<long>(j) * (n + 1) + i); };
  auto vid = [&](int i, int j) { return 2L * (static_cast<long>(j) * (n + 1) + i) + 1; };

  std::unordered_map<long, Eigen::Vector2d> crossing;
  auto crossing_point = [&](long id) -> const Eigen::Vector2d& {
    auto it = crossing.find(id);
    if (it != crossing.end()) return it->second;
    const long base = id / 2;
    const int i = static_cast<int>(base % (n + 1)), j = static_cast<int>(base / (n + 1));
    Eigen::Vector2d a(gx(i), gy(j)), b = a;
    if (id % 2 == 0)
      b.x() += h;
    else
      b.y() += h;
    double fa = f(a.x(), a.y());
    for (int it2 = 0; it2 < 200; ++it2) {
      const Eigen::Vector2d mid = 0.5 * (a + b);
      if ((mid - a).norm() == 0.0 || (b - mid).norm() == 0.0) break;
      const double fm = f(mid.x(), mid.y());
      if (neg(fm) == neg(fa)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return crossing.emplace(id, 0.5 * (a + b)).first->second;
  };

  std::unordered_map<long, std::vector<long>> adj;
  auto link = [&](long a, long b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const bool s00 = neg(at(i, j)), s10 = neg(at(i + 1, j)), s11 = neg(at(i + 1, j + 1)), s01 = neg(at(i, j + 1));
      const long bottom = hid(i, j), right = vid(i + 1, j), top = hid(i, j + 1), left = vid(i, j);
      std::vector<long> cut;
      if (s00 != s10) cut.push_back(bottom);
      if (s10 != s11) cut.push_back(right);
      if (s01 != s11) cut.push_back(top);
      if (s00 != s01) cut.push_back(left);
      if (cut.size() == 2) {
        link(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const bool centre = neg(f(gx(i) + 0.5 * h, gy(j) + 0.5 * h));
        if (centre == s00) {
          link(bottom, right);
          link(top, left);
        } else {
          link(bottom, left);
          link(top, right);
        }
      }
    }

  std::map<long, std::vector<long>> ordered(adj.begin(), adj.end());
  std::unordered_map<long, bool> seen;
  std::vector<Polyline> out;
  auto walk = [&](long start) {
    Polyline pl;
    long prev = -1, cur = start;
    for (;;) {
      seen[cur] = true;
      pl.points.push_back(crossing_point(cur));
      long next = -1;
      for (long nb : ordered[cur])
        if (nb != prev && !seen[nb]) {
          next = nb;
          break;
        }
      if (next < 0) {
        for (long nb : ordered[cur])
          if (nb == start && nb != prev && pl.points.size() > 2) pl.closed = true;
        break;
      }
      prev = cur;
      cur = next;
    }
    out.push_back(std::move(pl));
  };
  for (const auto& [id, nbs] : ordered)
    if (nbs.size() == 1 && !seen[id]) walk(id);
  for (const auto& [id, nbs] : ordered)
    if (!seen[id]) walk(id);
  return out;
}

TraceSet trace_curves(const Triple& triple, const TraceOptions& opts) {
  const SexticModel model(triple);
  const Chart& chart = opts.chart;
  TraceSet set;
  set.options = opts;
  set.curves.push_back({"sigma", contour_zero_set([&](double x, double y) { return model.value(chart.at(x, y)); }, opts)});
  set.curves.push_back(
      {"hessian", contour_zero_set([&](double x, double y) { return model.hessian(chart.at(x, y)); }, opts)});
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& pr : pairs) {
    const auto conic = pair_cone_quadratic({triple.centers[pr[0]], triple.radii[pr[0]]},
                                           {triple.centers[pr[1]], triple.radii[pr[1]]});
    std::string name = "conic" + std::to_string(pr[0]) + std::to_string(pr[1]);
    set.curves.push_back({name, contour_zero_set([&](double x, double y) { return conic(chart.at(x, y)); }, opts)});
  }
  return set;
}

}  // namespace ballcone
