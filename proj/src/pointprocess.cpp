// SPDX-License-Identifier: Apache-2.0
#include "wpbn/pointprocess.hpp"

#include <cmath>
#include <numbers>

#include "wpbn/errors.hpp"

namespace wpbn {

namespace {

void check_density(double density)
{
    if (!(density > 0.0)) {
        throw ConfigError("point process density must be > 0");
    }
}

} // namespace

void sample_ppp_into(double density, double window_radius, Rng& rng, PointSet2D& out)
{
    check_density(density);
    if (!(window_radius > 0.0)) {
        throw ConfigError("window radius must be > 0");
    }

    const double area = std::numbers::pi * window_radius * window_radius;
    std::poisson_distribution<long> count(density * area);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    out.window_radius = window_radius;
    out.density = density;
    out.points.clear();
    const long n = count(rng);
    out.points.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        // Uniform on the disk: radius via sqrt of a uniform, independent angle.
        const double r = window_radius * std::sqrt(uni(rng));
        const double phi = 2.0 * std::numbers::pi * uni(rng);
        out.points.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
}

PointSet2D sample_ppp(double density, double window_radius, Rng& rng)
{
    PointSet2D set;
    sample_ppp_into(density, window_radius, rng, set);
    return set;
}

PointSet2D sample_ppp(double density, double window_radius, Seed seed)
{
    Rng rng = make_rng(seed);
    return sample_ppp(density, window_radius, rng);
}

OrderedDistances sample_ordered_nearest(double density, int count, Rng& rng)
{
    check_density(density);
    if (count < 1) {
        throw ConfigError("ordered-distance count must be >= 1");
    }

    std::exponential_distribution<double> exp1(1.0);
    OrderedDistances out;
    out.values.resize(static_cast<std::size_t>(count));
    double arrival = 0.0;
    double prev = 0.0;
    for (int i = 0; i < count; ++i) {
        // Ties have probability zero; redraw on the off chance the floating
        // increment vanishes so the strict ordering invariant holds.
        double step = exp1(rng);
        while (!(arrival + step > arrival)) {
            step = exp1(rng);
        }
        arrival += step;
        double x = std::sqrt(arrival / (std::numbers::pi * density));
        if (x <= prev) {
            x = std::nextafter(prev, std::numeric_limits<double>::infinity());
        }
        out.values[static_cast<std::size_t>(i)] = x;
        prev = x;
    }
    return out;
}

OrderedDistances sample_ordered_nearest(double density, int count, Seed seed)
{
    Rng rng = make_rng(seed);
    return sample_ordered_nearest(density, count, rng);
}

double joint_distance_pdf(const OrderedDistances& distances, double density)
{
    check_density(density);
    const auto& x = distances.values;
    if (x.empty()) {
        return 0.0;
    }
    double prev = 0.0;
    for (double xi : x) {
        if (!(xi > prev)) {
            return 0.0; // outside the support
        }
        prev = xi;
    }

    const double two_pi_lambda = 2.0 * std::numbers::pi * density;
    double value = std::exp(-std::numbers::pi * density * x.back() * x.back());
    for (double xi : x) {
        value *= two_pi_lambda * xi;
    }
    return value;
}

} // namespace wpbn
