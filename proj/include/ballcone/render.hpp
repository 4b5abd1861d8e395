#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ballcone/geom.hpp"
#include "ballcone/trace.hpp"

namespace ballcone {

/// Chart cells whose central direction admits a transversal.
struct FeasibleRegion {
  Eigen::Vector2d lower = Eigen::Vector2d::Zero();  // window corner
  double cell = 0.0;
  int resolution = 0;
  std::vector<char> mask;  // row-major, row 0 at lower y

  bool empty() const;
};

/// Samples the chart window of `opts` on a resolution x resolution grid.
/// Directions are taken with both signs, so the region is that of the
/// geometric permutations, or of `order` and its reverse when given.
FeasibleRegion feasible_region(const Scene& scene, const TraceOptions& opts, int resolution = 80,
                               const std::optional<std::vector<int>>& order = std::nullopt);

struct Panel {
  std::string title;
  TraceSet traces;
  std::optional<FeasibleRegion> region;
};

struct RenderStyle {
  int panel_size = 480;  // px per panel, square
  bool legend = true;
};

struct Rendered {
  std::string text;
  std::vector<std::string> warnings;
};

/// Stroke colour of a named curve: sigma red, hessian black, conic02 blue,
/// conic01 green, conic12 gray.
const char* curve_colour(const std::string& name);

/// Panels side by side in one fixed viewBox, with legend and hatched feasible regions.
Rendered render_svg(const std::vector<Panel>& panels, const RenderStyle& style = {});

std::string chart_name(const Chart& chart);

/// `curve,chart,x,y` rows; polylines are separated by a blank-coordinate row.
Rendered render_csv(const TraceSet& traces);

}  // namespace ballcone
