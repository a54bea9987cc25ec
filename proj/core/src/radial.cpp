#include "greedyjump/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "greedyjump/directions.hpp"
#include "greedyjump/quadrature.hpp"

namespace greedyjump {
namespace {

void require_dim(int d) {
    if (d < 2) throw std::invalid_argument("radial chain requires d >= 2");
}

double sample_first_coord(int d, std::mt19937_64& rng, std::normal_distribution<double>& normal) {
    double first = 0.0;
    double total = 0.0;
    do {
        first = normal(rng);
        total = first * first;
        for (int i = 1; i < d; ++i) {
            const double g = normal(rng);
            total += g * g;
        }
    } while (total == 0.0);
    return std::min(1.0, std::abs(first) / std::sqrt(total));
}

// Kernel with the vanishing factor g = y - |x - 1| supplied by the caller,
// which keeps 1 - u^2 accurate next to the u = 1 endpoint.
double kernel_with_gap(int d, double cd, double x, double y, double g) {
    if (g < 0.0) return 0.0;
    const double e = std::abs(x - 1.0);
    const double one_minus_u2 = g * (y + e) * (x + 1.0 - y) * (x + 1.0 + y) / (4.0 * x * x);
    if (one_minus_u2 < 0.0) return 0.0;
    const double m = 0.5 * (d - 3);
    const double power = (d == 3) ? 1.0 : std::pow(one_minus_u2, m);
    return cd * (y / x) * power;
}

// Simpson on one linear piece is exact for moments up to degree 2.
template <class F>
double piece_moment(double a, double fa, double b, double fb, F&& weight) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (fa * weight(a) + 2.0 * (fa + fb) * weight(m) + fb * weight(b));
}

}  // namespace

double radial_step(double r, double u) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("radial_step: u must lie in [0, 1]");
    // (r - u)^2 + (1 - u)(1 + u) equals r^2 - 2ur + 1 without cancellation near r = u = 1.
    const double a = r - u;
    return std::sqrt(a * a + (1.0 - u) * (1.0 + u));
}

double sphere_coord_constant(int d) {
    require_dim(d);
    return 2.0 * std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5 * (d - 1))) / std::sqrt(std::numbers::pi);
}

double first_coord_density(int d, double x) {
    require_dim(d);
    if (x < 0.0 || x > 1.0) return 0.0;
    const double cd = sphere_coord_constant(d);
    if (d == 3) return cd;
    return cd * std::pow((1.0 - x) * (1.0 + x), 0.5 * (d - 3));
}

double first_coord_cdf(int d, double u) {
    require_dim(d);
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    // J_m(u) = int_0^u (1 - t^2)^m dt, raised from m = -1/2 or m = 0 by
    // J_m = (u (1 - u^2)^m + 2 m J_{m-1}) / (2 m + 1).
    const double s = (1.0 - u) * (1.0 + u);
    double m = (d % 2 == 0) ? -0.5 : 0.0;
    double j = (d % 2 == 0) ? std::asin(u) : u;
    const double target = 0.5 * (d - 3);
    while (m < target - 0.25) {
        m += 1.0;
        j = (u * std::pow(s, m) + 2.0 * m * j) / (2.0 * m + 1.0);
    }
    return std::clamp(sphere_coord_constant(d) * j, 0.0, 1.0);
}

double sample_first_coord(int d, std::mt19937_64& rng) {
    require_dim(d);
    std::normal_distribution<double> normal(0.0, 1.0);
    return sample_first_coord(d, rng, normal);
}

double first_coord_mean_quadrature(int d) {
    require_dim(d);
    const double cd = sphere_coord_constant(d);
    const double m = 0.5 * (d - 3);
    auto f = [&](double x, double, double to_one) {
        return x * cd * std::pow(to_one * (1.0 + x), m);
    };
    return tanh_sinh(f, 0.0, 1.0, 1e-14).value;
}

double stationary_mean(int d) {
    require_dim(d);
    return 0.5 * std::sqrt(std::numbers::pi) * std::exp(std::lgamma(0.5 * (d + 1)) - std::lgamma(0.5 * d));
}

double kernel(int d, double x, double y) {
    require_dim(d);
    if (!(x > 0.0)) throw std::invalid_argument("kernel: x must be positive");
    const double lo = std::abs(x - 1.0);
    const double hi = std::sqrt(x * x + 1.0);
    if (y < lo || y > hi) return 0.0;
    return kernel_with_gap(d, sphere_coord_constant(d), x, y, y - lo);
}

double kernel_row_integral(int d, double x, double rel_tol) {
    require_dim(d);
    if (!(x > 0.0)) throw std::invalid_argument("kernel_row_integral: x must be positive");
    const double cd = sphere_coord_constant(d);
    const double lo = std::abs(x - 1.0);
    const double hi = std::sqrt(x * x + 1.0);
    auto f = [&](double y, double from_lo, double) { return kernel_with_gap(d, cd, x, y, from_lo); };
    return tanh_sinh(f, lo, hi, rel_tol).value;
}

void McOptions::validate() const {
    require_dim(d);
    if (n_steps <= burn_in) throw std::invalid_argument("mc_invariant: n_steps must exceed burn_in");
    if (bins == 0) throw std::invalid_argument("mc_invariant: need at least one bin");
    if (r0 && !(*r0 >= 0.0 && std::isfinite(*r0))) throw std::invalid_argument("mc_invariant: r0 must be >= 0");
    if (r_max && !(*r_max > 0.0)) throw std::invalid_argument("mc_invariant: r_max must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("mc_invariant: alpha must be >= 0");
}

double RadialHistogram::mean() const noexcept {
    return n_samples ? sum / static_cast<double>(n_samples) : 0.0;
}

double RadialHistogram::variance() const noexcept {
    if (n_samples < 2) return 0.0;
    const double n = static_cast<double>(n_samples);
    const double mu = sum / n;
    return std::max(0.0, (sum_sq - n * mu * mu) / (n - 1.0));
}

double RadialHistogram::standard_error() const noexcept {
    return n_samples ? std::sqrt(variance() / static_cast<double>(n_samples)) : 0.0;
}

double RadialHistogram::tail_fraction() const noexcept {
    return n_samples ? static_cast<double>(tail_count) / static_cast<double>(n_samples) : 0.0;
}

void RadialHistogram::merge(const RadialHistogram& other) {
    if (other.d != d || other.bin_edges != bin_edges || other.alpha != alpha ||
        other.tail_threshold != tail_threshold) {
        throw std::invalid_argument("RadialHistogram::merge: incompatible histograms");
    }
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    overflow += other.overflow;
    n_samples += other.n_samples;
    shards += other.shards;
    sum += other.sum;
    sum_sq += other.sum_sq;
    max_r = std::max(max_r, other.max_r);
    exp_moment_sum += other.exp_moment_sum;
    exp_capped += other.exp_capped;
    tail_count += other.tail_count;
}

RadialHistogram mc_invariant(const McOptions& options) {
    options.validate();
    const int d = options.d;
    const double mu = stationary_mean(d);
    const double r_max = options.r_max.value_or(mu + 8.0);

    RadialHistogram h;
    h.d = d;
    h.seed = options.seed;
    h.burn_in = options.burn_in;
    h.alpha = options.alpha;
    h.tail_threshold = options.tail_threshold.value_or(mu + 5.0);
    h.bin_edges.resize(options.bins + 1);
    for (std::size_t i = 0; i <= options.bins; ++i) {
        h.bin_edges[i] = r_max * static_cast<double>(i) / static_cast<double>(options.bins);
    }
    h.counts.assign(options.bins, 0);

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double r = options.r0.value_or(std::sqrt(static_cast<double>(d)));
    const double inv_width = static_cast<double>(options.bins) / r_max;
    constexpr double kExpCap = 700.0;

    for (std::uint64_t step = 0; step < options.n_steps; ++step) {
        r = radial_step(r, sample_first_coord(d, rng, normal));
        if (step < options.burn_in) continue;
        ++h.n_samples;
        h.sum += r;
        h.sum_sq += r * r;
        h.max_r = std::max(h.max_r, r);
        const double bin = r * inv_width;
        if (bin < static_cast<double>(options.bins)) {
            ++h.counts[static_cast<std::size_t>(bin)];
        } else {
            ++h.overflow;
        }
        const double a = options.alpha * r * r;
        if (a > kExpCap) {
            ++h.exp_capped;
        } else {
            h.exp_moment_sum += std::exp(a);
        }
        if (r > h.tail_threshold) ++h.tail_count;
    }
    return h;
}

RadialHistogram mc_invariant_sharded(const McOptions& options, unsigned shards, unsigned threads) {
    options.validate();
    if (shards == 0) throw std::invalid_argument("mc_invariant_sharded: need at least one shard");
    const std::uint64_t samples = options.n_steps - options.burn_in;
    std::vector<McOptions> parts(shards, options);
    for (unsigned i = 0; i < shards; ++i) {
        const std::uint64_t share = samples / shards + (i < samples % shards ? 1 : 0);
        parts[i].n_steps = options.burn_in + std::max<std::uint64_t>(share, 1);
        parts[i].seed = splitmix64(options.seed + i);
        if (!parts[i].r_max) parts[i].r_max = stationary_mean(options.d) + 8.0;
    }

    std::vector<RadialHistogram> results(shards);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, shards);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            for (unsigned i = t; i < shards; i += threads) results[i] = mc_invariant(parts[i]);
        });
    }
    for (auto& th : pool) th.join();

    RadialHistogram merged = results[0];
    for (unsigned i = 1; i < shards; ++i) merged.merge(results[i]);
    merged.seed = options.seed;
    return merged;
}

double DensityGrid::operator()(double x) const {
    if (!(x > 0.0) || !(x < r_max) || nodes.empty()) return 0.0;
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    const double a = k == 0 ? 0.0 : nodes[k - 1];
    const double fa = k == 0 ? 0.0 : values[k - 1];
    const double b = k == nodes.size() ? r_max : nodes[k];
    const double fb = k == nodes.size() ? 0.0 : values[k];
    return fa + (fb - fa) * (x - a) / (b - a);
}

namespace {

template <class F>
double integrate_interpolant(const DensityGrid& g, F&& weight) {
    double total = 0.0;
    double a = 0.0;
    double fa = 0.0;
    for (std::size_t k = 0; k <= g.nodes.size(); ++k) {
        const double b = k == g.nodes.size() ? g.r_max : g.nodes[k];
        const double fb = k == g.nodes.size() ? 0.0 : g.values[k];
        total += piece_moment(a, fa, b, fb, weight);
        a = b;
        fa = fb;
    }
    return total;
}

struct BandRow {
    std::size_t first = 0;
    std::vector<double> entries;
};

std::vector<BandRow> assemble(int d, const std::vector<double>& t, double h) {
    // t holds 0, x_1, ..., x_N, r_max; unknowns live at t[1..N].
    const double cd = sphere_coord_constant(d);
    const std::size_t n = t.size() - 2;
    const GaussLegendre gl(6);
    std::vector<BandRow> rows(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double y = t[i + 1];
        const double lo = y < 1.0 ? 1.0 - y : std::sqrt((y - 1.0) * (y + 1.0));
        const double hi = std::min(y + 1.0, t.back());
        const bool lo_singular = y < 1.0;  // u = 1 at x = 1 - y
        const bool hi_singular = y + 1.0 <= t.back();

        std::size_t k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), lo) - t.begin());
        k = k == 0 ? 0 : k - 1;
        BandRow& row = rows[i];
        row.first = k == 0 ? 0 : k - 1;
        auto add = [&](std::size_t node, double value) {
            if (node < 1 || node > n) return;
            const std::size_t col = node - 1;
            if (col - row.first >= row.entries.size()) row.entries.resize(col - row.first + 1, 0.0);
            row.entries[col - row.first] += value;
        };

        for (; k + 1 < t.size() && t[k] < hi; ++k) {
            const double s0 = t[k];
            const double s1 = t[k + 1];
            const double a = std::max(s0, lo);
            const double b = std::min(s1, hi);
            if (!(b > a)) continue;
            const double width = s1 - s0;
            double left = 0.0;
            double right = 0.0;
            const bool near_edge = (a - lo) < 2.0 * h || (hi - b) < 2.0 * h;
            if (near_edge) {
                const bool touches_lo = lo_singular && a == lo;
                const bool touches_hi = hi_singular && b == hi;
                auto gap = [&](double x, double from_a, double to_b) {
                    if (touches_lo) return from_a;
                    if (touches_hi) return to_b;
                    return y - std::abs(x - 1.0);
                };
                left = tanh_sinh(
                           [&](double x, double fa, double tb) {
                               return kernel_with_gap(d, cd, x, y, gap(x, fa, tb)) * (s1 - x) / width;
                           },
                           a, b, 1e-12)
                           .value;
                right = tanh_sinh(
                            [&](double x, double fa, double tb) {
                                return kernel_with_gap(d, cd, x, y, gap(x, fa, tb)) * (x - s0) / width;
                            },
                            a, b, 1e-12)
                            .value;
            } else {
                left = gl.integrate(
                    [&](double x) { return kernel_with_gap(d, cd, x, y, y - std::abs(x - 1.0)) * (s1 - x) / width; },
                    a, b);
                right = gl.integrate(
                    [&](double x) { return kernel_with_gap(d, cd, x, y, y - std::abs(x - 1.0)) * (x - s0) / width; },
                    a, b);
            }
            add(k, left);
            add(k + 1, right);
        }
    }
    return rows;
}

DensityGrid solve_once(const SolverOptions& options) {
    const int d = options.d;
    require_dim(d);
    if (options.nodes < 4) throw std::invalid_argument("solve_stationary: need at least 4 nodes");
    const double mu = stationary_mean(d);
    const double r_max = options.r_max.value_or(mu + 8.0);
    if (r_max < mu + 6.0) throw std::invalid_argument("solve_stationary: r_max must be >= stationary_mean + 6");

    const std::size_t n = options.nodes;
    const double h = r_max / static_cast<double>(n);
    DensityGrid g;
    g.d = d;
    g.r_max = r_max;
    g.nodes.resize(n);
    g.weights.assign(n, h);
    std::vector<double> t(n + 2);
    t[0] = 0.0;
    t[n + 1] = r_max;
    for (std::size_t j = 0; j < n; ++j) {
        g.nodes[j] = (static_cast<double>(j) + 0.5) * h;
        t[j + 1] = g.nodes[j];
    }
    g.weights.front() = 0.75 * h;
    g.weights.back() = 0.75 * h;

    const std::vector<BandRow> rows = assemble(d, t, h);

    auto normalize = [&](std::vector<double>& v) {
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) mass += g.weights[j] * v[j];
        for (double& x : v) x /= mass;
        return mass;
    };

    std::vector<double> pi(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double z = g.nodes[j] - mu;
        pi[j] = std::exp(-0.5 * z * z);
    }
    normalize(pi);

    std::vector<double> next(n);
    for (std::size_t iter = 1; iter <= options.max_iters; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            const BandRow& row = rows[i];
            double acc = 0.0;
            for (std::size_t c = 0; c < row.entries.size(); ++c) acc += row.entries[c] * pi[row.first + c];
            next[i] = acc;
        }
        g.eigenvalue = normalize(next);
        double change = 0.0;
        for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::abs(next[j] - pi[j]));
        pi.swap(next);
        g.iterations = iter;
        g.residual = change;
        if (change < options.tol) {
            g.values = std::move(pi);
            double out = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double x = g.nodes[j];
                const double u_star = (x * x + 1.0 - r_max * r_max) / (2.0 * x);
                out += g.weights[j] * g.values[j] * first_coord_cdf(d, u_star);
            }
            g.truncation_residual = out;
            return g;
        }
    }
    throw SolverError("solve_stationary: no convergence after " + std::to_string(options.max_iters) +
                          " iterations (last change " + std::to_string(g.residual) + ")",
                      g.iterations, g.residual);
}

}  // namespace

double DensityGrid::integral() const {
    return integrate_interpolant(*this, [](double) { return 1.0; });
}

double DensityGrid::mean() const {
    return integrate_interpolant(*this, [](double x) { return x; });
}

double DensityGrid::variance() const {
    const double m = mean();
    return integrate_interpolant(*this, [](double x) { return x * x; }) - m * m;
}

DensityGrid solve_stationary(const SolverOptions& options) {
    if (options.tol <= 0.0) throw std::invalid_argument("solve_stationary: tol must be positive");
    DensityGrid g = solve_once(options);
    if (options.estimate_discretization) {
        SolverOptions coarse = options;
        coarse.nodes = options.nodes / 2;
        coarse.estimate_discretization = false;
        coarse.r_max = g.r_max;
        const DensityGrid half = solve_once(coarse);
        g.discretization_error = std::abs(g.mean() - half.mean());
    }
    return g;
}

double d3_identity_residual(const DensityGrid& grid, double y_lo, double y_hi) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
        const double y = grid.nodes[i];
        if (y < y_lo || y > y_hi) continue;
        const double lo = std::sqrt(std::max(0.0, (y - 1.0) * (y + 1.0)));
        const double hi = std::min(y + 1.0, grid.r_max);
        // On each linear piece pi(x) = p + q x, so the integral of pi(x)/x is
        // p log(b/a) + q (b - a).
        double rhs = 0.0;
        double a0 = 0.0;
        double f0 = 0.0;
        for (std::size_t k = 0; k <= grid.nodes.size(); ++k) {
            const double b0 = k == grid.nodes.size() ? grid.r_max : grid.nodes[k];
            const double f1 = k == grid.nodes.size() ? 0.0 : grid.values[k];
            const double a = std::max(a0, lo);
            const double b = std::min(b0, hi);
            if (b > a) {
                const double q = (f1 - f0) / (b0 - a0);
                const double p = f0 - q * a0;
                rhs += (a > 0.0 ? p * std::log(b / a) : 0.0) + q * (b - a);
            }
            a0 = b0;
            f0 = f1;
        }
        worst = std::max(worst, std::abs(grid.values[i] / y - rhs));
    }
    return worst;
}

LyapunovReport lyapunov_check(int d, double r, double alpha, std::uint64_t trials, std::uint64_t seed) {
    require_dim(d);
    if (!(r > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("lyapunov_check: r and alpha must be positive");
    if (trials < 2) throw std::invalid_argument("lyapunov_check: need at least two trials");
    LyapunovReport rep;
    rep.d = d;
    rep.r = r;
    rep.alpha = alpha;
    rep.trials = trials;
    const double cd = sphere_coord_constant(d);
    const double t = 2.0 * alpha * r;
    // e^{alpha |x_{n+1}|^2} = e^{alpha (r^2 + 1)} e^{-t u}; dividing by the bound
    // leaves the ratio e^{-t u} t / c_d.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        const double w = std::exp(-t * sample_first_coord(d, rng, normal)) * t / cd;
        sum += w;
        sum_sq += w * w;
    }
    const double n = static_cast<double>(trials);
    rep.ratio = sum / n;
    const double var = std::max(0.0, (sum_sq - n * rep.ratio * rep.ratio) / (n - 1.0));
    rep.ratio_se = std::sqrt(var / n);
    rep.degenerate = cd / t >= 1.0;
    rep.passed = rep.ratio - 3.0 * rep.ratio_se <= 1.0;
    return rep;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double worst = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        worst = std::max(worst, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
    }
    return worst;
}

double ks_critical_1pct(std::size_t n, std::size_t m) {
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    return 1.628 * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace greedyjump
