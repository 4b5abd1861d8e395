#include "ballcone/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ballcone/cone.hpp"
#include "ballcone/parallel.hpp"

namespace ballcone {
namespace {

// Fixed-precision formatting keeps outputs byte-identical across runs.
std::string num(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v == 0.0 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kCurveOrder[] = {"sigma", "hessian", "conic01", "conic02", "conic12"};

}  // namespace

bool FeasibleRegion::empty() const { return std::find(mask.begin(), mask.end(), 1) == mask.end(); }

FeasibleRegion feasible_region(const Scene& scene, const TraceOptions& opts, int resolution,
                               const std::optional<std::vector<int>>& order) {
  if (scene.dimension != 3) throw GeometryError("feasible regions are drawn for scenes in R^3");
  std::optional<OrderedQuery> query;
  if (order) query = OrderedQuery::make(scene, *order);
  FeasibleRegion r;
  r.resolution = resolution;
  r.cell = 2.0 * opts.half_width / resolution;
  r.lower = opts.center - Eigen::Vector2d::Constant(opts.half_width);
  r.mask.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  parallel_for(r.mask.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx % resolution), j = static_cast<int>(idx / resolution);
    const Vector3d u = opts.chart.at(r.lower.x() + (i + 0.5) * r.cell, r.lower.y() + (j + 0.5) * r.cell);
    FeasibilityOptions fo;
    fo.mode = SolveMode::Decide;
    if (query) {
      const Direction d{Vec(u)};
      r.mask[idx] = direction_feasible(*query, d, fo).feasible() || direction_feasible(*query, d.antipode(), fo).feasible();
    } else {
      r.mask[idx] = scene_direction_feasible(scene, Direction(Vec(u)), fo).feasible() ? 1 : 0;
    }
  });
  return r;
}

const char* curve_colour(const std::string& name) {
  if (name == "sigma") return "red";
  if (name == "hessian") return "black";
  if (name == "conic02") return "blue";
  if (name == "conic01") return "green";
  if (name == "conic12") return "gray";
  return "purple";
}

std::string chart_name(const Chart& chart) {
  if (chart.axis >= 0) return "u" + std::to_string(chart.axis + 1) + "=1";
  return "plane";
}

Rendered render_svg(const std::vector<Panel>& panels, const RenderStyle& style) {
  Rendered out;
  const int size = style.panel_size;
  const int title_h = 22;
  const int count = std::max<int>(1, static_cast<int>(panels.size()));
  const int width = size * count;
  // six legend entries of 125 px, wrapped to the figure width
  const int per_row = std::max(1, (width - 10) / 125);
  const int legend_h = style.legend ? 28 * ((6 + per_row - 1) / per_row) : 0;
  const int height = size + title_h + legend_h;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
         "patternTransform=\"rotate(45)\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#888\" "
         "stroke-width=\"1\"/></pattern></defs>\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (panels.empty()) {
    out.warnings.push_back("no traces to render");
    svg << "<!-- empty: no traces -->\n";
  }

  bool any_curve = false;
  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& panel = panels[pi];
    const TraceOptions& o = panel.traces.options;
    const double ox = static_cast<double>(pi) * size;
    const double oy = title_h;
    const double lo_x = o.center.x() - o.half_width, lo_y = o.center.y() - o.half_width;
    const double scale = size / (2.0 * o.half_width);
    auto px = [&](double x) { return ox + (x - lo_x) * scale; };
    auto py = [&](double y) { return oy + size - (y - lo_y) * scale; };

    svg << "<g id=\"panel" << pi << "\">\n";
    svg << "<text x=\"" << num(ox + size / 2.0, 1) << "\" y=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\">" << escape(panel.title) << "</text>\n";
    svg << "<clipPath id=\"clip" << pi << "\"><rect x=\"" << num(ox, 1) << "\" y=\"" << num(oy, 1) << "\" width=\""
        << size << "\" height=\"" << size << "\"/></clipPath>\n";
    svg << "<g clip-path=\"url(#clip" << pi << ")\">\n";
    if (panel.region) {
      const FeasibleRegion& r = *panel.region;
      for (int j = 0; j < r.resolution; ++j) {
        int i = 0;
        while (i < r.resolution) {
          if (!r.mask[static_cast<std::size_t>(j) * r.resolution + i]) {
            ++i;
            continue;
          }
          int e = i;
          while (e < r.resolution && r.mask[static_cast<std::size_t>(j) * r.resolution + e]) ++e;
          const double x0 = px(r.lower.x() + i * r.cell), x1 = px(r.lower.x() + e * r.cell);
          const double y1 = py(r.lower.y() + j * r.cell), y0 = py(r.lower.y() + (j + 1) * r.cell);
          svg << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0) << "\" height=\""
              << num(y1 - y0) << "\" fill=\"url(#hatch)\" stroke=\"none\"/>\n";
          i = e;
        }
      }
    }
    for (const char* name : kCurveOrder) {
      const CurveTrace* c = panel.traces.find(name);
      if (!c) continue;
      for (const Polyline& line : c->polylines) {
        if (line.points.size() < 2) continue;
        any_curve = true;
        svg << "<polyline class=\"" << name << "\" fill=\"none\" stroke=\"" << curve_colour(name)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < line.points.size(); ++k) {
          if (k) svg << ' ';
          svg << num(px(line.points[k].x())) << ',' << num(py(line.points[k].y()));
        }
        if (line.closed) svg << ' ' << num(px(line.points[0].x())) << ',' << num(py(line.points[0].y()));
        svg << "\"/>\n";
      }
    }
    svg << "</g>\n";
    svg << "<rect x=\"" << num(ox, 1) << "\" y=\"" << num(oy, 1) << "\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    svg << "</g>\n";
  }
  if (!panels.empty() && !any_curve) out.warnings.push_back("traces contain no curve segments");

  if (style.legend) {
    double y = size + title_h + 18;
    double x = 10;
    const char* labels[] = {"direction-sextic", "Hessian", "pair 01", "pair 02", "pair 12"};
    auto next = [&](int k) {
      if (k % per_row == 0 && k > 0) {
        x = 10;
        y += 28;
      }
    };
    for (int k = 0; k < 5; ++k) {
      next(k);
      svg << "<line x1=\"" << num(x, 1) << "\" y1=\"" << num(y - 4, 1) << "\" x2=\"" << num(x + 18, 1) << "\" y2=\""
          << num(y - 4, 1) << "\" stroke=\"" << curve_colour(kCurveOrder[k]) << "\" stroke-width=\"2\"/>\n";
      svg << "<text x=\"" << num(x + 22, 1) << "\" y=\"" << num(y, 1)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << labels[k] << "</text>\n";
      x += 125;
    }
    next(5);
    svg << "<rect x=\"" << num(x, 1) << "\" y=\"" << num(y - 10, 1)
        << "\" width=\"18\" height=\"10\" fill=\"url(#hatch)\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << num(x + 22, 1) << "\" y=\"" << num(y, 1)
        << "\" font-family=\"sans-serif\" font-size=\"11\">transversal directions</text>\n";
  }
  svg << "</svg>\n";
  out.text = svg.str();
  return out;
}

Rendered render_csv(const TraceSet& traces) {
  Rendered out;
  std::ostringstream csv;
  csv << "curve,chart,x,y\n";
  const std::string chart = chart_name(traces.options.chart);
  bool any = false;
  for (const auto& c : traces.curves) {
    bool first = true;
    for (const auto& line : c.polylines) {
      if (!first) csv << c.name << ',' << chart << ",,\n";
      first = false;
      for (const auto& p : line.points) {
        any = true;
        csv << c.name << ',' << chart << ',' << num(p.x(), 12) << ',' << num(p.y(), 12) << '\n';
      }
    }
  }
  if (!any) out.warnings.push_back("traces contain no curve points");
  out.text = csv.str();
  return out;
}

}  // namespace ballcone
