#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "greedyjump/greedy.hpp"
#include "greedyjump/quadrature.hpp"
#include "greedyjump/radial.hpp"

using namespace greedyjump;

namespace {

// Closed forms evaluated by hand from Gamma values at integers and half-integers.
double mean_oracle(int d) {
    switch (d) {
        case 2: return std::numbers::pi / 4.0;
        case 3: return 1.0;
        case 4: return 3.0 * std::numbers::pi / 8.0;
        case 5: return 4.0 / 3.0;
        case 8: return 105.0 * std::numbers::pi / 192.0;
    }
    return NAN;
}

// Kernel written directly from its definition, with c_d by tgamma.
double kernel_oracle(int d, double x, double y) {
    const double cd = 2.0 * std::tgamma(d / 2.0) / (std::sqrt(std::numbers::pi) * std::tgamma((d - 1) / 2.0));
    const double u = (x * x - y * y + 1.0) / (2.0 * x);
    return cd * (y / x) * std::pow(1.0 - u * u, (d - 3) / 2.0);
}

}  // namespace

TEST(RadialStep, Examples) {
    EXPECT_DOUBLE_EQ(radial_step(0.0, 0.3), 1.0);
    EXPECT_DOUBLE_EQ(radial_step(1.0, 1.0), 0.0);
    EXPECT_NEAR(radial_step(2.0, 0.5), std::sqrt(3.0), 1e-15);
}

TEST(RadialStepProperty, JumpBounds) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> r(0.0, 50.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100000; ++i) {
        const double x = r(rng);
        const double y = radial_step(x, u(rng));
        ASSERT_GE(y, std::abs(x - 1.0) - 1e-12);
        ASSERT_LE(y, std::sqrt(x * x + 1.0) + 1e-12);
    }
}

TEST(FirstCoord, ConstantsAndDensity) {
    EXPECT_NEAR(sphere_coord_constant(3), 1.0, 1e-14);
    EXPECT_NEAR(sphere_coord_constant(2), 2.0 / std::numbers::pi, 1e-14);
    EXPECT_NEAR(sphere_coord_constant(4), 4.0 / std::numbers::pi, 1e-14);
    for (double x : {0.0, 0.3, 0.9}) EXPECT_NEAR(first_coord_density(3, x), 1.0, 1e-14);
    EXPECT_NEAR(first_coord_density(2, 0.5), 2.0 / (std::numbers::pi * std::sqrt(0.75)), 1e-14);
    EXPECT_THROW(first_coord_density(1, 0.5), std::invalid_argument);
}

TEST(FirstCoordProperty, DensityNormalizedAndCdfConsistent) {
    for (int d = 2; d <= 12; ++d) {
        const double cd = sphere_coord_constant(d);
        const auto whole = [d, cd](double x, double, double to_b) {
            // 1 - x^2 = to_b (1 + x) keeps precision near x = 1
            return cd * std::pow(to_b * (1.0 + x), (d - 3) / 2.0);
        };
        EXPECT_NEAR(tanh_sinh(whole, 0.0, 1.0).value, 1.0, 1e-8) << d;
        const auto f = [d, cd](double x) { return cd * std::pow((1.0 - x) * (1.0 + x), (d - 3) / 2.0); };
        for (double u : {0.1, 0.5, 0.77, 0.99}) {
            EXPECT_NEAR(first_coord_cdf(d, u), tanh_sinh(f, 0.0, u).value, 1e-10) << d << " " << u;
        }
        EXPECT_DOUBLE_EQ(first_coord_cdf(d, 0.0), 0.0);
        EXPECT_NEAR(first_coord_cdf(d, 1.0), 1.0, 1e-14);
    }
}

TEST(FirstCoord, SampleMeans) {
    std::mt19937_64 rng(2);
    const int n = 1'000'000;
    for (int d : {2, 3}) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double u = sample_first_coord(d, rng);
            ASSERT_GE(u, 0.0);
            ASSERT_LE(u, 1.0);
            sum += u;
            sum_sq += u * u;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum_sq / n - mean * mean) / n);
        const double expected = d == 2 ? 2.0 / std::numbers::pi : 0.5;
        EXPECT_NEAR(mean, expected, 3.0 * se) << d;
    }
}

TEST(FirstCoordProperty, SampleMeanZScoresAreCalibrated) {
    // Over many seeds the standardized error of the d=3 mean should look N(0,1).
    const int seeds = 40;
    const int n = 50000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        std::mt19937_64 rng(1000 + s);
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += sample_first_coord(3, rng);
        const double z = (total / n - 0.5) / std::sqrt(1.0 / (12.0 * n));
        sum += z;
        sum_sq += z * z;
    }
    const double mean_z = sum / seeds;
    const double sd_z = std::sqrt(sum_sq / seeds - mean_z * mean_z);
    EXPECT_LT(std::abs(mean_z), 3.0 / std::sqrt(seeds));
    EXPECT_GT(sd_z, 0.6);
    EXPECT_LT(sd_z, 1.4);
}

TEST(StationaryMean, ClosedForms) {
    for (int d : {2, 3, 4, 5, 8}) EXPECT_NEAR(stationary_mean(d), mean_oracle(d), 1e-13) << d;
    EXPECT_THROW(stationary_mean(1), std::invalid_argument);
    // sqrt(pi d / 8) asymptotics
    EXPECT_NEAR(stationary_mean(10000) / std::sqrt(std::numbers::pi * 10000 / 8.0), 1.0, 1e-4);
}

TEST(StationaryMeanProperty, ReciprocalOfTwiceFirstCoordMean) {
    for (int d = 2; d <= 20; ++d) EXPECT_NEAR(stationary_mean(d) * 2.0 * first_coord_mean_quadrature(d), 1.0, 1e-10) << d;
}

TEST(Kernel, Examples) {
    EXPECT_NEAR(kernel(3, 2.0, 1.5), 0.75, 1e-15);
    EXPECT_NEAR(kernel(2, 1.0, 1.0), (2.0 / std::numbers::pi) / std::sqrt(0.75), 1e-14);
    EXPECT_EQ(kernel(4, 2.0, 0.5), 0.0);
    EXPECT_EQ(kernel(4, 2.0, 3.0), 0.0);
    EXPECT_THROW(kernel(3, 0.0, 1.0), std::invalid_argument);
}

TEST(KernelProperty, MatchesDefinitionAndRowsNormalize) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> xs(0.1, 20.0);
    std::uniform_real_distribution<double> t(0.01, 0.99);
    for (int d = 2; d <= 10; ++d) {
        for (int i = 0; i < 200; ++i) {
            const double x = xs(rng);
            const double lo = std::abs(x - 1.0);
            const double hi = std::sqrt(x * x + 1.0);
            const double y = lo + (hi - lo) * t(rng);
            ASSERT_NEAR(kernel(d, x, y), kernel_oracle(d, x, y), 1e-9 * std::max(1.0, kernel_oracle(d, x, y)));
        }
        for (double x : {0.1, 0.5, 0.999, 1.0, 1.001, 3.0, 20.0}) {
            EXPECT_NEAR(kernel_row_integral(d, x), 1.0, 1e-10) << d << " " << x;
        }
    }
}

TEST(MonteCarlo, MeanAndBookkeeping) {
    McOptions opt;
    opt.d = 3;
    opt.n_steps = 210'000;
    opt.burn_in = 10'000;
    opt.seed = 7;
    const RadialHistogram h = mc_invariant(opt);
    std::uint64_t total = h.overflow;
    for (auto c : h.counts) total += c;
    EXPECT_EQ(total, h.n_samples);
    EXPECT_EQ(h.n_samples, 200'000u);
    EXPECT_TRUE(std::is_sorted(h.bin_edges.begin(), h.bin_edges.end()));
    EXPECT_NEAR(h.mean(), 1.0, 5.0 * h.standard_error() + 0.01);
    EXPECT_NEAR(h.mean(), h.sum / h.n_samples, 1e-15);
    const double n = static_cast<double>(h.n_samples);
    EXPECT_NEAR(h.variance(), (h.sum_sq / n - h.mean() * h.mean()) * n / (n - 1.0), 1e-12);
    EXPECT_EQ(mc_invariant(opt).counts, h.counts);
}

TEST(MonteCarlo, ShardsAreThreadIndependentAndMergeByAddition) {
    McOptions opt;
    opt.d = 4;
    opt.n_steps = 40'000;
    opt.burn_in = 1'000;
    opt.seed = 3;
    const RadialHistogram one = mc_invariant_sharded(opt, 4, 1);
    const RadialHistogram many = mc_invariant_sharded(opt, 4, 4);
    EXPECT_EQ(one.counts, many.counts);
    EXPECT_EQ(one.sum, many.sum);
    EXPECT_EQ(one.shards, 4u);
    std::uint64_t total = one.overflow;
    for (auto c : one.counts) total += c;
    EXPECT_EQ(total, one.n_samples);
}

TEST(MonteCarlo, OptionValidation) {
    McOptions opt;
    opt.n_steps = 100;
    opt.burn_in = 100;
    EXPECT_THROW(mc_invariant(opt), std::invalid_argument);
    opt.burn_in = 10;
    opt.d = 1;
    EXPECT_THROW(mc_invariant(opt), std::invalid_argument);
}

TEST(Solver, D3MeanAndIdentity) {
    SolverOptions opt;
    opt.d = 3;
    opt.nodes = 1000;
    const DensityGrid g = solve_stationary(opt);
    EXPECT_NEAR(g.integral(), 1.0, 1e-10);
    EXPECT_NEAR(g.mean(), 1.0, 5e-3);
    EXPECT_LT(d3_identity_residual(g), 1e-4);
    for (double v : g.values) EXPECT_GE(v, 0.0);
    EXPECT_LT(g.truncation_residual, 1e-12);
}

TEST(SolverProperty, MeanConsistencyTriangle) {
    for (int d : {2, 4, 6}) {
        SolverOptions so;
        so.d = d;
        so.nodes = 800;
        const DensityGrid g = solve_stationary(so);
        McOptions mo;
        mo.d = d;
        mo.n_steps = 310'000;
        mo.seed = 100 + d;
        const RadialHistogram h = mc_invariant(mo);
        EXPECT_NEAR(g.mean(), stationary_mean(d), 5e-3) << d;
        EXPECT_NEAR(h.mean(), stationary_mean(d), 0.01) << d;
        EXPECT_NEAR(g.mean(), h.mean(), 0.015) << d;
    }
}

TEST(Solver, ReportsNonConvergence) {
    SolverOptions opt;
    opt.d = 3;
    opt.nodes = 200;
    opt.max_iters = 2;
    opt.tol = 1e-14;
    try {
        solve_stationary(opt);
        FAIL() << "expected SolverError";
    } catch (const SolverError& e) {
        EXPECT_EQ(e.iterations(), 2u);
        EXPECT_GT(e.residual(), 0.0);
    }
}

TEST(Lyapunov, InequalityHoldsAndDegenerateCasesAreFlagged) {
    const LyapunovReport a = lyapunov_check(3, 10.0, 0.1, 20000, 1);
    EXPECT_TRUE(a.passed);
    EXPECT_FALSE(a.degenerate);
    const LyapunovReport b = lyapunov_check(5, 3.0 * std::sqrt(5.0), 0.5, 100000, 2);
    EXPECT_TRUE(b.passed);
    // c_3 / (2 * 0.1 * 5) = 1: the bound is no better than the trivial one.
    EXPECT_TRUE(lyapunov_check(3, 5.0, 0.1, 1000, 3).degenerate);
}

TEST(Representation, FullWalkAndRadialChainAgree) {
    const std::size_t n = 20000;
    Point x{1.0, 0.0, 0.0, 0.0};
    x *= 1.5;
    DirectionSource dirs(SourceSpec::uniform_sphere(4, 9), 0);
    std::vector<double> full(n);
    std::vector<double> radial(n);
    std::mt19937_64 rng(10);
    for (std::size_t i = 0; i < n; ++i) {
        full[i] = greedy_step(x, dirs.next(), {1e-12, TieMode::choose_plus})->next.norm();
        radial[i] = radial_step(1.5, sample_first_coord(4, rng));
    }
    EXPECT_LT(ks_statistic(full, radial), ks_critical_1pct(n, n));
}

TEST(Ks, StatisticOracle) {
    const std::vector<double> a{1, 2, 3, 4};
    const std::vector<double> b{3.5, 5, 6, 7};
    EXPECT_DOUBLE_EQ(ks_statistic(a, b), 0.75);
    EXPECT_DOUBLE_EQ(ks_statistic(a, a), 0.0);
    EXPECT_NEAR(ks_critical_1pct(100, 100), 1.628 * std::sqrt(0.02), 1e-15);
}
