// SPDX-License-Identifier: Apache-2.0
#include "wpbn/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_sf_gamma.h>

#include "wpbn/channel.hpp"
#include "wpbn/errors.hpp"

namespace wpbn {

namespace {

constexpr double kMarginOutageLimit = 1e-3;
constexpr double kPowerWindowOutage = 1e-12;
constexpr int kRealizeAttempts = 16;

double sq(double v)
{
    return v * v;
}

double dist_sq(Point2D a, Point2D b)
{
    return sq(a.x - b.x) + sq(a.y - b.y);
}

/// min(1, d^-alpha) from the squared distance, with fast paths for the
/// integer exponents the experiments sweep.
double bounded_gain_sq(double d2, double alpha)
{
    if (d2 <= 1.0) {
        return 1.0;
    }
    if (alpha == 4.0) {
        return 1.0 / (d2 * d2);
    }
    if (alpha == 3.0) {
        return 1.0 / (d2 * std::sqrt(d2));
    }
    return std::pow(d2, -0.5 * alpha);
}

/// d^-alpha from the squared distance (backward link, unbounded).
double unbounded_gain_sq(double d2, double alpha)
{
    if (alpha == 4.0) {
        return 1.0 / (d2 * d2);
    }
    if (alpha == 3.0) {
        return 1.0 / (d2 * std::sqrt(d2));
    }
    return std::pow(d2, -0.5 * alpha);
}

/// Per-node fading stream, keyed by the node position so draws do not
/// depend on the iteration order of the interferers.
Seed node_stream(Seed fading_seed, Point2D p)
{
    const auto xb = std::bit_cast<std::uint64_t>(p.x);
    const auto yb = std::bit_cast<std::uint64_t>(p.y);
    return splitmix64(splitmix64(fading_seed ^ xb) ^ splitmix64(yb + 0x100000001b3ULL));
}

/// Uniform grid over the source window for k-nearest queries.
class PbGrid {
  public:
    void build(const std::vector<Point2D>& pts, double extent, double density_hint)
    {
        pts_ = &pts;
        extent_ = extent;
        double cell = density_hint > 0.0 ? 1.0 / std::sqrt(density_hint) : extent;
        cell = std::clamp(cell, 2.0 * extent / 1024.0, std::max(extent, 1e-9));
        n_ = std::max(1, static_cast<int>(std::ceil(2.0 * extent / cell)));
        cell_ = 2.0 * extent / n_;

        const std::size_t cells = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
        start_.assign(cells + 1, 0);
        for (const auto& p : pts) {
            ++start_[cell_of(p) + 1];
        }
        for (std::size_t c = 1; c < start_.size(); ++c) {
            start_[c] += start_[c - 1];
        }
        order_.resize(pts.size());
        fill_.assign(cells, 0);
        for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
            const std::size_t c = cell_of(pts[static_cast<std::size_t>(i)]);
            order_[static_cast<std::size_t>(start_[c] + fill_[c]++)] = i;
        }
    }

    /// k smallest source distances from q, ascending.  Returns false when
    /// the window holds fewer than k sources.
    bool k_nearest(Point2D q, int k, std::vector<double>& out) const
    {
        out.clear();
        if (static_cast<int>(pts_->size()) < k) {
            return false;
        }
        // out acts as a max-heap of the best k squared distances.
        const int cx = axis_cell(q.x);
        const int cy = axis_cell(q.y);
        const int max_ring = 2 * n_;
        for (int ring = 0; ring <= max_ring; ++ring) {
            if (static_cast<int>(out.size()) == k) {
                // Everything not yet visited is at least (ring-1) cells away.
                const double bound = (ring - 1) * cell_;
                if (bound > 0.0 && out.front() <= bound * bound) {
                    break;
                }
            }
            scan_ring(q, cx, cy, ring, k, out);
        }
        if (static_cast<int>(out.size()) < k) {
            return false;
        }
        std::sort(out.begin(), out.end());
        for (auto& d2 : out) {
            d2 = std::sqrt(d2);
        }
        return true;
    }

    /// Sum of bounded forward gains from q to every source in the window.
    double bounded_gain_sum(Point2D q, double alpha_f) const
    {
        double sum = 0.0;
        for (const auto& p : *pts_) {
            sum += bounded_gain_sq(dist_sq(q, p), alpha_f);
        }
        return sum;
    }

  private:
    int axis_cell(double v) const
    {
        return std::clamp(static_cast<int>((v + extent_) / cell_), 0, n_ - 1);
    }

    std::size_t cell_of(Point2D p) const
    {
        return static_cast<std::size_t>(axis_cell(p.y)) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(axis_cell(p.x));
    }

    void scan_cell(Point2D q, int ax, int ay, int k, std::vector<double>& heap) const
    {
        const std::size_t c =
            static_cast<std::size_t>(ay) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(ax);
        for (int s = start_[c]; s < start_[c + 1]; ++s) {
            const double d2 = dist_sq(q, (*pts_)[static_cast<std::size_t>(order_[static_cast<std::size_t>(s)])]);
            if (static_cast<int>(heap.size()) < k) {
                heap.push_back(d2);
                std::push_heap(heap.begin(), heap.end());
            } else if (d2 < heap.front()) {
                std::pop_heap(heap.begin(), heap.end());
                heap.back() = d2;
                std::push_heap(heap.begin(), heap.end());
            }
        }
    }

    void scan_ring(Point2D q, int cx, int cy, int ring, int k, std::vector<double>& heap) const
    {
        const int x0 = cx - ring;
        const int x1 = cx + ring;
        const int y0 = cy - ring;
        const int y1 = cy + ring;
        for (int ax = std::max(0, x0); ax <= std::min(n_ - 1, x1); ++ax) {
            for (int ay = std::max(0, y0); ay <= std::min(n_ - 1, y1); ++ay) {
                if (ring > 0 && ax != x0 && ax != x1 && ay != y0 && ay != y1) {
                    continue; // interior of the ring, already visited
                }
                scan_cell(q, ax, ay, k, heap);
            }
        }
    }

    const std::vector<Point2D>* pts_ = nullptr;
    double extent_ = 0.0;
    double cell_ = 1.0;
    int n_ = 1;
    std::vector<int> start_;
    std::vector<int> fill_;
    std::vector<int> order_;
};

bool model_uses_np_sources(PowerModel m)
{
    return m == PowerModel::instantaneous_np_nearest || m == PowerModel::mean_np_nearest;
}

bool model_uses_all_sources(PowerModel m)
{
    return m == PowerModel::instantaneous_all_pbs;
}

bool model_needs_pbs(PowerModel m)
{
    return model_uses_np_sources(m) || model_uses_all_sources(m);
}

struct ModelContext {
    PowerModel model = PowerModel::instantaneous_np_nearest;
    double fixed_power = 0.0; // reflected power constant where applicable
    bool uses_beta = true;
};

ModelContext make_context(const NetworkConfig& cfg, PowerModel model, Seed master_seed)
{
    ModelContext ctx;
    ctx.model = model;
    switch (model) {
    case PowerModel::fixed_mean_np_nearest:
        // The model parameter is the ensemble np-nearest mean power; 2e5
        // samples pin it well below the coverage resolution of interest.
        ctx.fixed_power =
            mean_power_np_nearest(cfg, 200000, derive_seed(master_seed, 0xfeedULL)).watts;
        break;
    case PowerModel::mean_all_pbs:
        ctx.fixed_power = mean_power_all_pbs(cfg);
        break;
    case PowerModel::regular_powered:
        ctx.fixed_power = cfg.pc_watts;
        ctx.uses_beta = false;
        break;
    default:
        break;
    }
    return ctx;
}

struct Scratch {
    NetworkRealization real;
    PbGrid grid;
    std::vector<double> knn;
    std::vector<double> contribs;
};

void realize_into(const NetworkConfig& cfg, const SimControls& sim, Seed seed, bool with_pbs,
                  NetworkRealization& out)
{
    Rng bn_rng = make_rng(derive_seed(seed, 0));
    sample_ppp_into(cfg.lambda_b, sim.window_radius, bn_rng, out.interfering_bns);

    if (with_pbs) {
        Rng pb_rng = make_rng(derive_seed(seed, 1));
        sample_ppp_into(cfg.lambda_p, sim.window_radius + sim.pb_window_margin, pb_rng, out.pbs);
    } else {
        out.pbs.points.clear();
        out.pbs.density = cfg.lambda_p;
        out.pbs.window_radius = sim.window_radius + sim.pb_window_margin;
    }

    Rng angle_rng = make_rng(derive_seed(seed, 2));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double phi = 2.0 * std::numbers::pi * uni(angle_rng);
    out.typical_bn = {cfg.d00 * std::cos(phi), cfg.d00 * std::sin(phi)};
    out.d00 = cfg.d00;
    out.seed = seed;
}

/// Reflected power of one node before the backward channel and the beta
/// factor (P_C for the regular-powered baseline).
double node_power(Point2D bn, const NetworkRealization& real, const NetworkConfig& cfg,
                  const ModelContext& ctx, const PbGrid& grid, Rng& rng, std::vector<double>& knn)
{
    switch (ctx.model) {
    case PowerModel::instantaneous_np_nearest:
    case PowerModel::mean_np_nearest: {
        if (!grid.k_nearest(bn, cfg.np, knn)) {
            throw RealizationInfeasible("fewer sources in the window than np");
        }
        if (ctx.model == PowerModel::instantaneous_np_nearest) {
            return composite_received_power(knn, cfg.pc_watts, PathLossLaw::forward(cfg.alpha_f),
                                            rng);
        }
        double gain_sum = 0.0;
        for (double d : knn) {
            gain_sum += bounded_gain_sq(d * d, cfg.alpha_f);
        }
        return cfg.pc_watts * gain_sum;
    }
    case PowerModel::instantaneous_all_pbs: {
        if (real.pbs.points.empty()) {
            throw RealizationInfeasible("no sources in the window");
        }
        // The coherent sum over the window, conditioned on the geometry, is
        // circularly symmetric Gaussian with variance P_C * sum of gains;
        // its squared magnitude is drawn as that exponential directly.
        const double mean = cfg.pc_watts * grid.bounded_gain_sum(bn, cfg.alpha_f);
        std::exponential_distribution<double> exp1(1.0);
        return mean * exp1(rng);
    }
    case PowerModel::fixed_mean_np_nearest:
    case PowerModel::mean_all_pbs:
    case PowerModel::regular_powered:
        return ctx.fixed_power;
    }
    return 0.0;
}

SinrSample compute_sinr(const NetworkRealization& real, const NetworkConfig& cfg,
                        const ModelContext& ctx, Seed fading_seed, PbGrid& grid,
                        std::vector<double>& knn, std::vector<double>& contribs,
                        bool grid_ready)
{
    if (!grid_ready && model_needs_pbs(ctx.model)) {
        grid.build(real.pbs.points, real.pbs.window_radius, real.pbs.density);
    }
    const double factor = ctx.uses_beta ? cfg.beta : 1.0;

    // Typical link.
    Rng typ_rng = make_rng(node_stream(fading_seed, real.typical_bn));
    std::exponential_distribution<double> exp1(1.0);
    const double h0 = exp1(typ_rng);
    const double p0 = node_power(real.typical_bn, real, cfg, ctx, grid, typ_rng, knn);
    const double signal = factor * h0 * unbounded_gain_sq(sq(real.d00), cfg.alpha_b) * p0;

    // Interference, accumulated order-independently.
    contribs.clear();
    for (const auto& bn : real.interfering_bns.points) {
        Rng rng = make_rng(node_stream(fading_seed, bn));
        const double h = exp1(rng);
        const double p = node_power(bn, real, cfg, ctx, grid, rng, knn);
        const double d2 = sq(bn.x) + sq(bn.y);
        contribs.push_back(factor * h * unbounded_gain_sq(d2, cfg.alpha_b) * p);
    }
    std::sort(contribs.begin(), contribs.end());
    double interference = 0.0;
    for (double c : contribs) {
        interference += c;
    }

    SinrSample sample;
    sample.signal_power = signal;
    sample.interference_power = interference;
    sample.noise_power = cfg.n0_watts;
    const double denom = interference + cfg.n0_watts;
    if (denom > 0.0) {
        sample.sinr = signal / denom;
    } else {
        sample.sinr = signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return sample;
}

int resolve_threads(int requested)
{
    if (requested > 0) {
        return requested;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(trial_index, scratch) for every trial with a per-thread scratch.
template <typename Fn>
void parallel_trials(long trials, int threads, Fn&& fn)
{
    const int t = static_cast<int>(
        std::min<long>(resolve_threads(threads), std::max<long>(trials, 1)));
    if (t <= 1) {
        Scratch scratch;
        for (long i = 0; i < trials; ++i) {
            fn(i, scratch);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    pool.reserve(static_cast<std::size_t>(t));
    for (int w = 0; w < t; ++w) {
        pool.emplace_back([&, w] {
            Scratch scratch;
            try {
                for (long i = w; i < trials; i += t) {
                    fn(i, scratch);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

void check_margin(const NetworkConfig& cfg, const SimControls& sim)
{
    const double outage = margin_outage_probability(cfg, sim);
    if (!(outage < kMarginOutageLimit)) {
        throw ConfigError("pb_window_margin too small: P[np-th nearest source beyond margin] = " +
                          std::to_string(outage));
    }
}

} // namespace

const char* to_string(PowerModel model)
{
    switch (model) {
    case PowerModel::instantaneous_np_nearest: return "instantaneous_np_nearest";
    case PowerModel::mean_np_nearest: return "mean_np_nearest";
    case PowerModel::fixed_mean_np_nearest: return "fixed_mean_np_nearest";
    case PowerModel::instantaneous_all_pbs: return "instantaneous_all_pbs";
    case PowerModel::mean_all_pbs: return "mean_all_pbs";
    case PowerModel::regular_powered: return "regular_powered";
    }
    return "unknown";
}

std::optional<PowerModel> power_model_from_string(std::string_view name)
{
    for (PowerModel m :
         {PowerModel::instantaneous_np_nearest, PowerModel::mean_np_nearest,
          PowerModel::fixed_mean_np_nearest, PowerModel::instantaneous_all_pbs,
          PowerModel::mean_all_pbs, PowerModel::regular_powered}) {
        if (name == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

double margin_outage_probability(const NetworkConfig& cfg, const SimControls& sim)
{
    cfg.validate();
    if (!(sim.pb_window_margin > 0.0)) {
        return 1.0;
    }
    // pi*lambda_p*x_np^2 is the np-th arrival of a unit-rate process, so the
    // tail is a regularized upper incomplete gamma.
    const double arg = std::numbers::pi * cfg.lambda_p * sq(sim.pb_window_margin);
    return gsl_sf_gamma_inc_Q(static_cast<double>(cfg.np), arg);
}

NetworkRealization realize(const NetworkConfig& cfg, const SimControls& sim, Seed seed)
{
    cfg.validate();
    if (!(sim.window_radius > 0.0)) {
        throw ConfigError("window_radius must be > 0");
    }
    check_margin(cfg, sim);
    NetworkRealization real;
    realize_into(cfg, sim, seed, true, real);
    return real;
}

SinrSample sinr_sample(const NetworkRealization& real, const NetworkConfig& cfg, PowerModel model,
                       Seed fading_seed)
{
    const ModelContext ctx = make_context(cfg, model, fading_seed);
    PbGrid grid;
    std::vector<double> knn;
    std::vector<double> contribs;
    return compute_sinr(real, cfg, ctx, fading_seed, grid, knn, contribs, false);
}

std::vector<double> sample_sinr_values(const NetworkConfig& cfg, PowerModel model, long trials,
                                       const SimControls& sim, Seed seed)
{
    cfg.validate();
    if (trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (!(sim.window_radius > 0.0)) {
        throw ConfigError("window_radius must be > 0");
    }
    const bool needs_pbs = model_needs_pbs(model);
    if (model_uses_np_sources(model)) {
        check_margin(cfg, sim);
    }
    const ModelContext ctx = make_context(cfg, model, seed);

    std::vector<double> sinrs(static_cast<std::size_t>(trials));
    parallel_trials(trials, sim.threads, [&](long i, Scratch& scratch) {
        const Seed trial_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        for (int attempt = 0;; ++attempt) {
            realize_into(cfg, sim, derive_seed(trial_seed, 2 * static_cast<std::uint64_t>(attempt)),
                         needs_pbs, scratch.real);
            try {
                sinrs[static_cast<std::size_t>(i)] =
                    compute_sinr(scratch.real, cfg, ctx,
                                 derive_seed(trial_seed, 2 * static_cast<std::uint64_t>(attempt) + 1),
                                 scratch.grid, scratch.knn, scratch.contribs, false)
                        .sinr;
                break;
            } catch (const RealizationInfeasible&) {
                if (attempt + 1 >= kRealizeAttempts) {
                    throw;
                }
            }
        }
    });
    return sinrs;
}

namespace {

CoverageEstimate wilson_estimate(long successes, long trials, double theta)
{
    constexpr double z = 1.959963984540054; // 95%
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2n = z * z / n;
    const double half_width =
        (z / (1.0 + z2n)) * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n));
    return CoverageEstimate{p, half_width, Method::simulation, theta};
}

} // namespace

CoverageEstimate estimate_coverage(const NetworkConfig& cfg, PowerModel model, double theta,
                                   long trials, const SimControls& sim, Seed seed)
{
    if (!(theta > 0.0)) {
        throw ConfigError("SINR threshold must be > 0 (linear scale)");
    }
    const std::vector<double> sinrs = sample_sinr_values(cfg, model, trials, sim, seed);
    long successes = 0;
    for (double s : sinrs) {
        successes += s >= theta ? 1 : 0;
    }
    return wilson_estimate(successes, trials, theta);
}

CapacityEstimate estimate_capacity(const NetworkConfig& cfg, PowerModel model, double theta,
                                   long trials, const SimControls& sim, double area, Seed seed)
{
    const CoverageEstimate cov = estimate_coverage(cfg, model, theta, trials, sim, seed);
    return capacity(cfg, cov, area);
}

MeanPowerEstimate estimate_mean_power(const NetworkConfig& cfg, HarvestScope scope, long trials,
                                      const SimControls& sim, Seed seed, int fading_draws)
{
    cfg.validate();
    if (trials < 1) {
        throw ConfigError("trials must be >= 1");
    }
    if (fading_draws < 1) {
        throw ConfigError("fading_draws must be >= 1");
    }

    double window = sim.window_radius;
    if (scope == HarvestScope::np_nearest) {
        // Shrink the source window to the radius that contains the np
        // nearest sources up to probability 1e-12; the discarded tail
        // cannot influence an np-nearest harvest.
        const double arg = gsl_cdf_gamma_Qinv(kPowerWindowOutage, static_cast<double>(cfg.np), 1.0);
        window = std::min(window, std::sqrt(arg / (std::numbers::pi * cfg.lambda_p)));
    }

    const PathLossLaw forward = PathLossLaw::forward(cfg.alpha_f);
    std::vector<double> power(static_cast<std::size_t>(trials));
    parallel_trials(trials, sim.threads, [&](long i, Scratch& scratch) {
        const Seed trial_seed = derive_seed(seed, static_cast<std::uint64_t>(i));
        for (int attempt = 0;; ++attempt) {
            Rng geom_rng = make_rng(derive_seed(trial_seed, 2 * static_cast<std::uint64_t>(attempt)));
            sample_ppp_into(cfg.lambda_p, window, geom_rng, scratch.real.pbs);
            scratch.knn.clear();
            for (const auto& p : scratch.real.pbs.points) {
                scratch.knn.push_back(std::sqrt(sq(p.x) + sq(p.y)));
            }
            if (scope == HarvestScope::np_nearest) {
                if (static_cast<int>(scratch.knn.size()) < cfg.np) {
                    if (attempt + 1 >= kRealizeAttempts) {
                        throw RealizationInfeasible("fewer sources in the window than np");
                    }
                    continue;
                }
                std::nth_element(scratch.knn.begin(), scratch.knn.begin() + cfg.np - 1,
                                 scratch.knn.end());
                scratch.knn.resize(static_cast<std::size_t>(cfg.np));
            }
            Rng fading_rng =
                make_rng(derive_seed(trial_seed, 2 * static_cast<std::uint64_t>(attempt) + 1));
            double mean = 0.0;
            if (scratch.knn.empty()) {
                mean = 0.0; // an empty all-sources window harvests nothing
            } else {
                for (int f = 0; f < fading_draws; ++f) {
                    mean += composite_received_power(scratch.knn, cfg.pc_watts, forward, fading_rng);
                }
                mean /= fading_draws;
            }
            power[static_cast<std::size_t>(i)] = mean;
            break;
        }
    });

    double sum = 0.0;
    for (double p : power) {
        sum += p;
    }
    const double mean = sum / static_cast<double>(trials);
    double var = 0.0;
    for (double p : power) {
        var += sq(p - mean);
    }
    double std_error = 0.0;
    if (trials > 1) {
        std_error = std::sqrt(var / (static_cast<double>(trials - 1) * static_cast<double>(trials)));
    }
    return MeanPowerEstimate{mean, std_error};
}

} // namespace wpbn
