// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wpbn/rng.hpp"

namespace wpbn {

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

/// One realization of a homogeneous PPP on a disk centered at the origin.
struct PointSet2D {
    std::vector<Point2D> points;
    double window_radius = 0.0; // m
    double density = 0.0;       // points per m^2
};

/// The Np ascending distances from a reference node to its nearest process
/// points.  Strictly ascending, all positive.
struct OrderedDistances {
    std::vector<double> values; // m
};

/// Sample a homogeneous PPP of the given density on disk(window_radius).
/// Point count is Poisson(density*pi*R^2), locations uniform on the disk.
PointSet2D sample_ppp(double density, double window_radius, Rng& rng);
PointSet2D sample_ppp(double density, double window_radius, Seed seed);

/// As sample_ppp, but reuses the capacity of `out`.
void sample_ppp_into(double density, double window_radius, Rng& rng, PointSet2D& out);

/// Sample the joint law of the `count` ascending nearest-neighbor distances
/// of a PPP seen from a fixed point, using exponential spacings:
/// pi*density*x_i^2 are the arrival times of a unit-rate 1-D Poisson
/// process, so x_i = sqrt(G_i/(pi*density)) with G_i a sum of i unit-mean
/// exponentials.  Exact, unbounded support, O(count) per sample.
OrderedDistances sample_ordered_nearest(double density, int count, Rng& rng);
OrderedDistances sample_ordered_nearest(double density, int count, Seed seed);

/// Joint density of the ascending nearest distances:
///   (2*pi*lambda)^Np * (prod_i x_i) * exp(-pi*lambda*x_Np^2)
/// Returns 0 outside the support (non-ascending or non-positive input).
double joint_distance_pdf(const OrderedDistances& distances, double density);

} // namespace wpbn
