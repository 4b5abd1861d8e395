#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ballcone/sextic.hpp"

namespace ballcone {

/// Affine chart of the projective plane of directions: (x, y) -> origin + x ex + y ey.
struct Chart {
  Vector3d origin = Vector3d::UnitZ();
  Vector3d ex = Vector3d::UnitX();
  Vector3d ey = Vector3d::UnitY();
  int axis = 2;  // coordinate chart u_axis = 1, or -1 for a user plane

  /// Chart u_axis = 1 with the remaining axes in increasing order.
  static Chart coordinate(int axis);
  static Chart plane(const Vector3d& origin, const Vector3d& ex, const Vector3d& ey);

  Vector3d at(double x, double y) const { return origin + x * ex + y * ey; }
  /// Chart coordinates of the line through u; empty when u is parallel to the chart plane.
  std::optional<Eigen::Vector2d> coordinates(const Vector3d& u) const;
};

struct TraceOptions {
  Chart chart;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double half_width = 3.0;
  int resolution = 200;  // cells per side
};

struct Polyline {
  std::vector<Eigen::Vector2d> points;
  bool closed = false;
};

struct CurveTrace {
  std::string name;
  std::vector<Polyline> polylines;
};

struct TraceSet {
  TraceOptions options;
  std::vector<CurveTrace> curves;  // sigma, hessian, conic01, conic02, conic12

  const CurveTrace* find(const std::string& name) const;
};

/// Marching squares on the zero set of f over the chart window. Crossing
/// points are bisected along grid edges to full double precision and the
/// segments are chained into polylines. Components smaller than a cell can be
/// missed.
std::vector<Polyline> contour_zero_set(const std::function<double(double, double)>& f, const TraceOptions& opts);

TraceSet trace_curves(const Triple& triple, const TraceOptions& opts);

}  // namespace ballcone
