#pragma once

#include <cstdint>
#include <vector>

#include "ballcone/geom.hpp"
#include "ballcone/random.hpp"

namespace ballcone {

/// Quasi-uniform, antipodally closed sample of S^{d-1}: `count` is rounded up
/// to even and entry k + count/2 is the antipode of entry k.
///
/// d = 3 uses a Fibonacci lattice turned by a seed-derived rotation, d = 2 an
/// evenly spaced circle, other d seeded Gaussian directions.
std::vector<Vec> sphere_samples(int dimension, std::size_t count, std::uint64_t seed);

/// Typical angular distance between neighbouring samples of sphere_samples.
double sample_spacing(int dimension, std::size_t count);

/// Random rotation (Haar, via QR of a Gaussian matrix with sign fix).
Eigen::MatrixXd random_rotation(int dimension, Rng& rng);

Vec random_unit_vector(int dimension, Rng& rng);

double angle_between(const Vec& a, const Vec& b);

/// Normalized (a + b); requires a != -b.
Vec geodesic_midpoint(const Vec& a, const Vec& b);

/// Point at fraction s in [0, 1] of the minor great-circle arc from a to b.
Vec slerp(const Vec& a, const Vec& b, double s);

/// Uniform-in-angle random point at angular distance <= radius from u.
Vec cap_sample(const Vec& u, double radius, Rng& rng);

/// exp map: move from u along unit tangent t by angle theta.
Vec move_along(const Vec& u, const Vec& tangent, double theta);

}  // namespace ballcone
