#include "ballcone/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ballcone/random.hpp"
#include "ballcone/sphere.hpp"

namespace ballcone {

double Scene::diameter() const {
  double best = 0.0, rmax = 0.0;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    rmax = std::max(rmax, balls[i].radius);
    for (std::size_t j = i + 1; j < balls.size(); ++j)
      best = std::max(best, (balls[i].center - balls[j].center).norm());
  }
  const double d = best + 2.0 * rmax;
  return d > 0.0 ? d : 1.0;
}

void validate(const Scene& scene) {
  if (scene.dimension < 2) throw GeometryError("scene dimension must be >= 2");
  for (std::size_t i = 0; i < scene.balls.size(); ++i) {
    const Ball& b = scene.balls[i];
    if (b.center.size() != scene.dimension) {
      std::ostringstream os;
      os << "ball " << i << " has center of dimension " << b.center.size() << ", scene dimension is "
         << scene.dimension;
      throw GeometryError(os.str());
    }
    if (!(b.radius > 0.0) || !std::isfinite(b.radius) || !b.center.allFinite()) {
      std::ostringstream os;
      os << "ball " << i << " must have finite center and positive radius";
      throw GeometryError(os.str());
    }
  }
  if (scene.allow_overlap) return;
  for (std::size_t i = 0; i < scene.balls.size(); ++i)
    for (std::size_t j = i + 1; j < scene.balls.size(); ++j) {
      const double dist = (scene.balls[i].center - scene.balls[j].center).norm();
      if (!(dist > scene.balls[i].radius + scene.balls[j].radius)) {
        std::ostringstream os;
        os << "balls " << i << " and " << j << " are not disjoint (distance " << dist << ", radii sum "
           << scene.balls[i].radius + scene.balls[j].radius << ")";
        throw GeometryError(os.str());
      }
    }
}

Scene make_scene(int dimension, std::vector<Ball> balls, bool allow_overlap) {
  Scene s{dimension, std::move(balls), allow_overlap};
  validate(s);
  return s;
}

Direction::Direction(const Vec& v, double zero_tol) {
  const double n = v.norm();
  if (!std::isfinite(n) || n <= zero_tol) throw GeometryError("direction must be a finite non-zero vector");
  v_ = v / n;
}

Direction Direction::axis(int dimension, int k) {
  Vec e = Vec::Zero(dimension);
  e[k] = 1.0;
  return Direction(e);
}

Eigen::MatrixXd orthonormal_complement(const Direction& u) {
  const Vec& v = u.vec();
  const int d = u.dimension();
  Eigen::Index drop = 0;
  v.cwiseAbs().maxCoeff(&drop);
  Eigen::MatrixXd basis(d, d - 1);
  int col = 0;
  for (int k = 0; k < d; ++k) {
    if (k == drop) continue;
    Vec e = Vec::Zero(d);
    e[k] = 1.0;
    e -= v.dot(e) * v;
    for (int c = 0; c < col; ++c) e -= basis.col(c).dot(e) * basis.col(c);
    basis.col(col++) = e.normalized();
  }
  return basis;
}

std::vector<ProjectedDisk> project_to_orthogonal_plane(const Scene& scene, const Direction& u) {
  if (u.dimension() != scene.dimension) throw GeometryError("direction dimension does not match scene");
  const Eigen::MatrixXd basis = orthonormal_complement(u);
  std::vector<ProjectedDisk> out;
  out.reserve(scene.balls.size());
  for (const Ball& b : scene.balls) out.push_back({basis.transpose() * b.center, b.radius});
  return out;
}

OrderResult transversal_order(const Scene& scene, const Direction& u, double tie_tol) {
  if (u.dimension() != scene.dimension) throw GeometryError("direction dimension does not match scene");
  if (tie_tol < 0.0) tie_tol = 1e-9 * scene.diameter();
  const std::size_t n = scene.balls.size();
  std::vector<double> key(n);
  for (std::size_t i = 0; i < n; ++i) key[i] = scene.balls[i].center.dot(u.vec());
  OrderResult r;
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) { return key[a] < key[b]; });
  for (std::size_t k = 1; k < n; ++k) {
    if (key[r.order[k]] - key[r.order[k - 1]] < tie_tol) {
      r.tie = true;
      r.tie_first = r.order[k - 1];
      r.tie_second = r.order[k];
      break;
    }
  }
  return r;
}

SceneFlags scene_classification(const Scene& scene, double rank_tol) {
  SceneFlags f;
  f.thinly_distributed = f.pairwise_inflatable = f.pairwise_disjoint = true;
  const auto& b = scene.balls;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j) {
      const double d2 = (b[i].center - b[j].center).squaredNorm();
      const double d = std::sqrt(d2);
      const double rs = b[i].radius + b[j].radius;
      if (d < 2.0 * rs) f.thinly_distributed = false;
      if (d2 < 2.0 * (b[i].squared_radius() + b[j].squared_radius())) f.pairwise_inflatable = false;
      if (!(d > rs)) f.pairwise_disjoint = false;
    }
  if (b.size() <= 2) {
    f.collinear_centers = true;
  } else {
    Eigen::MatrixXd m(scene.dimension, b.size() - 1);
    for (std::size_t k = 1; k < b.size(); ++k) m.col(k - 1) = b[k].center - b[0].center;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    const double scale = std::max(sv.size() > 0 ? sv[0] : 0.0, 1e-300);
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] > rank_tol * scale) ++rank;
    f.collinear_centers = rank <= 1;
  }
  return f;
}

namespace {

Vec random_unit(Rng& rng, int d) {
  Vec v(d);
  do {
    for (int k = 0; k < d; ++k) v[k] = rng.normal();
  } while (v.norm() < 1e-12);
  return v.normalized();
}

constexpr double kGenMargin = 1e-6;

bool clear_of(const std::vector<Ball>& placed, const Vec& c, double r) {
  for (const Ball& b : placed)
    if ((b.center - c).norm() <= b.radius + r + kGenMargin) return false;
  return true;
}

}  // namespace

const char* to_string(SceneLayout layout) {
  switch (layout) {
    case SceneLayout::Box: return "box";
    case SceneLayout::Transversal: return "transversal";
    case SceneLayout::Triangle: return "triangle";
    case SceneLayout::Corridors: return "corridors";
  }
  return "box";
}

SceneLayout parse_layout(const std::string& name) {
  for (SceneLayout l : {SceneLayout::Box, SceneLayout::Transversal, SceneLayout::Triangle, SceneLayout::Corridors})
    if (name == to_string(l)) return l;
  throw GeometryError("unknown scene layout '" + name + "' (box, transversal, triangle, corridors)");
}

namespace {

// Planar template in the xy-plane, then a random rotation of R^d. Radii
// just under half the unit triangle's side leave room for lines crossing
// each near-contact, one permutation per edge; the axis balls keep the
// two orders through the contact of B_0 and B_1.
GeneratedScene planar_template(const SceneGenOptions& opts, Rng& rng) {
  const int d = opts.dimension;
  if (d < 3) throw GeometryError("triangle and corridors layouts need d >= 3");
  const bool corridors = opts.layout == SceneLayout::Corridors;
  if (!corridors && opts.n != 3) throw GeometryError("triangle layout needs n = 3");
  if (corridors && (opts.n < 4 || opts.n > 5)) throw GeometryError("corridors layout needs n = 4 or 5");

  const double h = std::sqrt(3.0);
  const double r = rng.uniform(0.9, 0.99);
  std::vector<Eigen::Vector3d> c{{-1, 0, 0}, {1, 0, 0}, {0, h, 0}};
  std::vector<double> radii;
  for (int k = 0; k < 3; ++k) radii.push_back(r * rng.uniform(0.97, 1.0));
  if (corridors) {
    c.emplace_back(rng.uniform(-0.2, 0.2), h + rng.uniform(4.5, 6.0), 0.0);
    radii.push_back(rng.uniform(2.3, 2.9));
    if (opts.n == 5) {
      c.emplace_back(rng.uniform(-0.2, 0.2), -rng.uniform(4.5, 6.0), 0.0);
      radii.push_back(rng.uniform(2.3, 2.9));
    }
  }
  const Eigen::MatrixXd rot = random_rotation(d, rng);
  GeneratedScene out;
  out.scene.dimension = d;
  for (int k = 0; k < opts.n; ++k) {
    Vec x = Vec::Zero(d);
    x.head(3) = c[k];
    out.scene.balls.push_back({opts.r_max * (rot * x), opts.r_max * radii[k]});
  }
  validate(out.scene);
  return out;
}

}  // namespace

GeneratedScene random_disjoint_scene(const SceneGenOptions& opts) {
  if (opts.n < 1 || opts.dimension < 2 || !(opts.r_min > 0.0) || opts.r_max < opts.r_min)
    throw GeometryError("random_disjoint_scene: need n >= 1, d >= 2, 0 < r_min <= r_max");
  Rng rng(opts.seed);
  const int d = opts.dimension;
  if (opts.layout == SceneLayout::Triangle || opts.layout == SceneLayout::Corridors) return planar_template(opts, rng);
  GeneratedScene out;
  out.scene.dimension = d;

  std::vector<double> radii(opts.n);
  for (double& r : radii) r = rng.uniform(opts.r_min, opts.r_max);

  if (opts.with_transversal || opts.layout == SceneLayout::Transversal) {
    const Vec dir = random_unit(rng, d);
    std::vector<int> perm(opts.n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = opts.n - 1; k > 0; --k) std::swap(perm[k], perm[rng.integer(0, k)]);
    // Consecutive balls along the line are separated by more than their radii,
    // so disjointness holds by construction; lateral offsets stay inside r.
    std::vector<Ball> along(opts.n);
    double t = 0.0;
    for (int k = 0; k < opts.n; ++k) {
      const double r = radii[k];
      if (k > 0) t += radii[k - 1] + r + kGenMargin * 2 + opts.spread * rng.uniform(0.1, 1.5) * opts.r_max;
      Vec off(d);
      for (int a = 0; a < d; ++a) off[a] = rng.normal();
      off -= off.dot(dir) * dir;
      const double on = off.norm();
      if (on > 0) off *= 0.9 * r * std::pow(rng.uniform(), 1.0 / (d - 1)) / on;
      along[k] = Ball{t * dir + off, r};
    }
    out.scene.balls.resize(opts.n);
    out.construction_order.resize(opts.n);
    for (int k = 0; k < opts.n; ++k) {
      out.scene.balls[perm[k]] = along[k];
      out.construction_order[k] = perm[k];
    }
    out.construction_direction = Direction(dir);
    validate(out.scene);
    return out;
  }

  const double half = opts.spread * 2.0 * opts.r_max * std::pow(static_cast<double>(opts.n), 1.0 / d) * 1.5;
  int attempts = 0;
  for (int k = 0; k < opts.n; ++k) {
    for (;;) {
      if (++attempts > opts.max_attempts) {
        std::ostringstream os;
        os << "random_disjoint_scene: rejection cap " << opts.max_attempts << " exceeded after placing " << k
           << " of " << opts.n << " balls (box half-width " << half << ")";
        throw GeometryError(os.str());
      }
      Vec c(d);
      for (int a = 0; a < d; ++a) c[a] = rng.uniform(-half, half);
      if (clear_of(out.scene.balls, c, radii[k])) {
        out.scene.balls.push_back({c, radii[k]});
        break;
      }
    }
  }
  validate(out.scene);
  return out;
}

}  // namespace ballcone
