#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace greedyjump {

/// sqrt(r^2 - 2 u r + 1): norm after a unit step whose |cosine| with the
/// current position is u.
double radial_step(double r, double u);

/// Normalizing constant c_d = 2 Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)).
double sphere_coord_constant(int d);

/// Density of |first coordinate| of a uniform point on S^{d-1}.
double first_coord_density(int d, double x);

/// Distribution function of the same law, exact for every d >= 2.
double first_coord_cdf(int d, double u);

/// |g_1| / |g| for a vector of d independent standard Gaussians.
double sample_first_coord(int d, std::mt19937_64& rng);

/// E|X| under first_coord_density, by quadrature.
double first_coord_mean_quadrature(int d);

/// Closed-form mean of the stationary radius.
double stationary_mean(int d);

/// Transition density of the radius chain from x to y; zero outside the
/// reachable interval [|x - 1|, sqrt(x^2 + 1)].
double kernel(int d, double x, double y);

/// Integral of kernel(d, x, .) over the reachable interval.
double kernel_row_integral(int d, double x, double rel_tol = 1e-13);

struct McOptions {
    int d = 3;
    std::uint64_t n_steps = 1'000'000;  // total, burn-in included
    std::uint64_t burn_in = 10'000;
    std::optional<double> r0;           // defaults to sqrt(d)
    std::size_t bins = 200;
    std::optional<double> r_max;        // histogram range; defaults to stationary_mean + 8
    double alpha = 0.1;                 // exponent of the reported moment sum e^{alpha r^2}
    std::optional<double> tail_threshold;  // defaults to stationary_mean + 5
    std::uint64_t seed = 0;

    void validate() const;
};

/// Empirical law of the stationary radius with the raw sums it was built
/// from, so that shards merge by plain addition.
struct RadialHistogram {
    int d = 0;
    std::uint64_t seed = 0;
    std::vector<double> bin_edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t overflow = 0;  // samples at or beyond the last edge
    std::uint64_t n_samples = 0;
    std::uint64_t burn_in = 0;
    std::uint64_t shards = 1;

    double sum = 0.0;
    double sum_sq = 0.0;
    double max_r = 0.0;

    double alpha = 0.0;
    double exp_moment_sum = 0.0;     // sum of e^{alpha r^2} over uncapped samples
    std::uint64_t exp_capped = 0;    // samples with alpha r^2 > 700, excluded from the sum
    double tail_threshold = 0.0;
    std::uint64_t tail_count = 0;    // samples with r > tail_threshold

    double mean() const noexcept;
    double variance() const noexcept;
    double standard_error() const noexcept;
    double tail_fraction() const noexcept;

    /// Adds another shard built with the same d, edges, alpha and threshold.
    void merge(const RadialHistogram& other);
};

/// Runs the radius chain and histograms the post-burn-in states.
RadialHistogram mc_invariant(const McOptions& options);

/// Splits the run into independent chains (seeds derived from options.seed),
/// runs them on up to `threads` threads and merges. The result depends only
/// on options and shard count, not on the thread count.
RadialHistogram mc_invariant_sharded(const McOptions& options, unsigned shards, unsigned threads = 0);

struct SolverOptions {
    int d = 3;
    std::size_t nodes = 2000;
    std::optional<double> r_max;  // defaults to stationary_mean + 8
    std::size_t max_iters = 500;
    double tol = 1e-10;
    bool estimate_discretization = false;  // re-solve on half the nodes
};

/// Stationary density on midpoint nodes x_j = (j - 1/2) h, interpreted as a
/// piecewise-linear function vanishing at 0 and r_max.
struct DensityGrid {
    int d = 0;
    double r_max = 0.0;
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> weights;  // integral of each hat function

    std::size_t iterations = 0;
    double residual = 0.0;            // last sup-norm change
    double eigenvalue = 0.0;          // normalization factor at convergence
    double truncation_residual = 0.0; // mass sent beyond r_max in one step
    std::optional<double> discretization_error;  // |mean - mean on half grid|

    double integral() const;
    double mean() const;
    double variance() const;

    /// Piecewise-linear interpolant, zero outside (0, r_max).
    double operator()(double x) const;
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::size_t iterations, double residual)
        : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// Power iteration on the product-integrated kernel operator. Throws
/// SolverError when max_iters is reached before the change drops below tol.
DensityGrid solve_stationary(const SolverOptions& options);

/// Largest |pi(y)/y - integral of pi(x)/x over [sqrt(y^2-1), y+1]| over grid
/// nodes y in [y_lo, y_hi], using the exact integral of the interpolant.
/// Only meaningful for d = 3.
double d3_identity_residual(const DensityGrid& grid, double y_lo = 1.0, double y_hi = 5.0);

struct LyapunovReport {
    int d = 0;
    double r = 0.0;
    double alpha = 0.0;
    std::uint64_t trials = 0;
    // Ratio of E e^{alpha |x_{n+1}|^2} to the bound (e^alpha c_d / (2 alpha r)) e^{alpha r^2}.
    double ratio = 0.0;
    double ratio_se = 0.0;
    bool degenerate = false;  // c_d / (2 alpha r) >= 1: bound weaker than e^{alpha (r^2 + 1)}
    bool passed = false;      // ratio - 3 se <= 1
};

LyapunovReport lyapunov_check(int d, double r, double alpha, std::uint64_t trials, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic. Sorts copies of the inputs.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic 1% critical value 1.628 sqrt((n + m) / (n m)).
double ks_critical_1pct(std::size_t n, std::size_t m);

}  // namespace greedyjump
