#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "greedyjump/vdc_geometry.hpp"

using namespace greedyjump;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory base2_run(Vec2 z, std::uint64_t n, bool norms_only = false) {
    SimulateOptions opt;
    opt.norms_only = norms_only;
    return simulate(to_point(z), SourceSpec::van_der_corput(2), n, opt);
}

double side_length(const std::vector<Vec2>& poly, std::size_t i) {
    return norm(poly[(i + 1) % poly.size()] - poly[i]);
}

}  // namespace

TEST(ChordRadius, Examples) {
    EXPECT_EQ(chord_radius(7, 0), 0.0);
    EXPECT_NEAR(chord_radius(4, 2), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(chord_radius(6, 1), 1.0, 1e-15);
    EXPECT_THROW(chord_radius(4, 4), std::invalid_argument);
}

TEST(Periodicity, Base2InsideUnitBall) {
    const PeriodicityReport r = is_periodic_start({0.3, 0.4}, 2, 1000);
    EXPECT_TRUE(r.is_periodic);
    EXPECT_TRUE(r.sign_constant);
    EXPECT_EQ(r.cycles_checked, 1000u);
    EXPECT_LE(r.max_return_error, 1e-12);
}

TEST(Periodicity, OriginIsIndeterminate) {
    const PeriodicityReport r = is_periodic_start({0.0, 0.0}, 2, 10);
    EXPECT_FALSE(r.is_periodic);
    ASSERT_TRUE(r.indeterminate_at);
    EXPECT_EQ(*r.indeterminate_at, 0);
    EXPECT_TRUE(base2_run({0.0, 0.0}, 5).halted());
}

TEST(Periodicity, OutsideUnitBallBase2IsNotPeriodic) {
    EXPECT_FALSE(is_periodic_start({3.0, 1.0}, 2, 10).is_periodic);
}

TEST(InnerPolygon, SideLengthsAgainstOuterPolygon) {
    const auto p5 = inner_polygon(5, 0.0, {0.0, 0.0});
    ASSERT_EQ(p5.size(), 5u);
    const double expected = 1.0 / std::cos(kPi / 10) - std::tan(kPi / 10);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(side_length(p5, i), expected, 1e-12);
    EXPECT_NEAR(expected, 0.72654, 1e-5);

    const auto p4 = inner_polygon(4, 0.0, {0.0, 0.0});
    ASSERT_EQ(p4.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(side_length(p4, i), 1.0, 1e-12);

    const auto p3 = inner_polygon(3, 0.0, {0.0, 0.0});
    ASSERT_EQ(p3.size(), 3u);
    // The inner triangle contains every vertex of the traced one.
    for (const Vec2& v : polygon_vertices(3, 0.0, {0.0, 0.0})) {
        for (std::size_t i = 0; i < 3; ++i) {
            EXPECT_GE(cross(p3[(i + 1) % 3] - p3[i], v - p3[i]), -1e-12);
        }
    }
    EXPECT_GT(side_length(p3, 0), 1.0);
    EXPECT_THROW(inner_polygon(2, 0.0, {0.0, 0.0}), std::invalid_argument);
}

TEST(Triangle, OffsetsAndShape) {
    EXPECT_NEAR(triangle_apex_offset(5), -0.1180340, 1e-7);
    for (std::uint64_t b = 5; b <= 31; b += 2) EXPECT_GT(triangle_adjacent_offset(b), 0.0) << b;
    const auto [t1, t2] = triangle_region(5);
    EXPECT_EQ(t1.family, SignFamily::minus);
    EXPECT_EQ(t2.family, SignFamily::plus);
    EXPECT_GT(t1.area(), 0.0);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t2.vertices[i], -t1.vertices[i]);
    // The apex sits at the Lemma's offset from the vertical edge of T1.
    double edge_x = INFINITY;
    double apex_x = -INFINITY;
    for (const Vec2& v : t1.vertices) {
        edge_x = std::min(edge_x, v.x);
        apex_x = std::max(apex_x, v.x);
    }
    EXPECT_NEAR(edge_x - apex_x, triangle_apex_offset(5), 1e-12);
    EXPECT_THROW(triangle_region(6), std::invalid_argument);
    EXPECT_THROW(triangle_region(3), std::invalid_argument);
}

TEST(TriangleProperty, CentroidsPeriodicNeighboursNot) {
    for (std::uint64_t b : {5u, 7u, 9u, 11u}) {
        const auto [t1, t2] = triangle_region(b);
        const PeriodicityReport r1 = is_periodic_start(t1.centroid(), b, 100);
        const PeriodicityReport r2 = is_periodic_start(t2.centroid(), b, 100);
        EXPECT_TRUE(r1.is_periodic) << b;
        EXPECT_TRUE(r2.is_periodic) << b;
        EXPECT_TRUE(r1.uniform_sign);
        EXPECT_EQ(r1.first_sign, -1);
        EXPECT_EQ(r2.first_sign, 1);
        const std::uint64_t cycles = b * b * b * b;
        for (std::size_t i = 0; i < 3; ++i) {
            const Vec2 a = t1.vertices[i];
            const Vec2 c = t1.vertices[(i + 1) % 3];
            const Vec2 mid = 0.5 * (a + c);
            const Vec2 outward = mid - t1.centroid();
            const Vec2 p = mid + (0.01 / norm(outward)) * outward;
            EXPECT_FALSE(t1.contains(p));
            EXPECT_FALSE(is_periodic_start(p, b, cycles, 1e-6).is_periodic) << b << " edge " << i;
        }
    }
}

TEST(TriangleProperty, RasterInsideIsPeriodic) {
    RasterOptions opt;
    opt.resolution = 120;
    const auto cells = raster_region(5, opt);
    const auto [t1, t2] = triangle_region(5);
    std::size_t inside = 0;
    for (const RasterCell& c : cells) {
        if (!t1.contains({c.x, c.y}) && !t2.contains({c.x, c.y})) continue;
        ++inside;
        EXPECT_TRUE(c.periodic) << c.x << "," << c.y;
        EXPECT_TRUE(is_periodic_start({c.x, c.y}, 5, 100).is_periodic);
    }
    EXPECT_GT(inside, 20u);
}

TEST(PolygonTraceProperty, ChordTurnAndRotation) {
    for (std::uint64_t b : {5u, 7u, 9u}) {
        const auto [t1, t2] = triangle_region(b);
        const PolygonTrace tr = polygon_trace(t1.centroid(), b, 200);
        EXPECT_LE(tr.max_chord_error, 1e-9);
        EXPECT_LE(tr.max_turn_error, 1e-9);
        for (double rot : tr.rotations) {
            EXPECT_GE(rot, 0.0);
            EXPECT_LT(rot, 2.0 * kPi / static_cast<double>(b));
        }
        // Brute-force distances from a plain simulation.
        const Trajectory t = simulate(to_point(t2.centroid()), SourceSpec::van_der_corput(b), 50 * b);
        for (std::size_t k = 1; k < t.states.size(); ++k) {
            const double r = distance(t.states[k], t.states[0]);
            ASSERT_NEAR(r, chord_radius(b, k % b), 1e-9);
        }
    }
}

TEST(Hitting, Examples) {
    EXPECT_EQ(hitting_time({0.5, 0.5}).steps, 0u);
    const Vec2 z0{50.0, 17.0};
    const HittingResult h = hitting_time(z0);
    ASSERT_TRUE(h.steps);
    EXPECT_LE(static_cast<double>(*h.steps), hitting_bound(norm(z0)));
    EXPECT_TRUE(hitting_time({0.0, 3.0}).halted_at.has_value());
}

TEST(HittingProperty, Base2BlockDecrease) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> c(-200.0, 200.0);
    const double drop = 2.0 * (std::numbers::sqrt2 - 1.0);
    for (int s = 0; s < 50; ++s) {
        const Trajectory t = base2_run({c(rng), c(rng)}, 4000, true);
        // Entry 8m has label 8m - 1.
        for (std::size_t k = 0; k + 8 < t.norms.size(); k += 8) {
            if (t.norms[k] <= 2.0) break;
            ASSERT_GE(t.norms[k] - t.norms[k + 8], drop - 1e-9) << "start " << s << " entry " << k;
        }
    }
}

TEST(Pairs, RandomRunsHaveNoViolations) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(-30.0, 30.0);
    for (int s = 0; s < 10; ++s) {
        EXPECT_TRUE(monotone_pairs_check(base2_run({c(rng), c(rng)}, 10000)).empty());
    }
}

TEST(Pairs, StallingStartHasEqualitiesButNoViolations) {
    const StallStart st = stall_start(16);
    const Trajectory t = base2_run(st.z, 32);
    EXPECT_TRUE(monotone_pairs_check(t).empty());
    for (std::size_t k = 2; k < t.states.size(); k += 2) EXPECT_NEAR(distance(t.states[k], t.states[0]), 0.0, 1e-12);
}

TEST(Pairs, RejectsOtherBases) {
    const Trajectory t = simulate({0.3, 0.2}, SourceSpec::van_der_corput(3), 30);
    EXPECT_THROW(monotone_pairs_check(t), std::invalid_argument);
}

TEST(Semicircle, InsideStartStaysOnPointAndHalfCircle) {
    const SemicircleReport r = semicircle_check(base2_run({0.2, 0.5}, 10000));
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.entered_at, -1);
    EXPECT_LE(r.max_return_error, 1e-9);
    EXPECT_LE(r.max_radius_error, 1e-9);
    EXPECT_LE(r.max_halfplane_excess, 1e-9);
}

TEST(Semicircle, OutsideStartEntersLater) {
    const SemicircleReport r = semicircle_check(base2_run({7.0, -3.0}, 2000));
    EXPECT_TRUE(r.passed);
    EXPECT_GT(r.entered_at, -1);
    EXPECT_EQ(r.entered_at % 2, 1);
}

TEST(Semicircle, Errors) {
    EXPECT_THROW(semicircle_check(base2_run({0.2, 0.5}, 10, true)), std::invalid_argument);
    EXPECT_THROW(semicircle_check(base2_run({40.0, 0.3}, 10)), std::domain_error);
}

TEST(Stall, AlphaValuesAndMonotoneLimit) {
    const double c = std::cos(kPi / 8);
    EXPECT_NEAR(stall_alpha(2), (4 * c - std::sqrt(16 * c * c - 12)) / 2, 1e-15);
    EXPECT_NEAR(stall_alpha(2), 1.20417, 1e-5);
    double prev = INFINITY;
    for (unsigned k = 2; k <= 20; ++k) {
        EXPECT_LT(stall_alpha(k), prev);
        EXPECT_GT(stall_alpha(k), 1.0);
        prev = stall_alpha(k);
    }
    EXPECT_LT(prev - 1.0, 1e-9);
    EXPECT_THROW(stall_start(3), std::domain_error);
}

TEST(StallProperty, StartsVerifiedBySimulation) {
    for (std::uint64_t n : {4u, 5u, 7u, 16u, 100u, 1000u}) {
        const StallStart st = stall_start(n);
        EXPECT_TRUE(st.verified) << n;
        EXPECT_GT(norm(st.z), 1.0);
        const Trajectory t = base2_run(st.z, 2 * n);
        ASSERT_FALSE(t.halted());
        for (std::uint64_t i = 1; i <= n; ++i) ASSERT_NEAR(distance(t.states[2 * i], t.states[0]), 0.0, 1e-12) << n;
    }
}

TEST(StopCycle, HeightMatchesCotangent) {
    for (std::uint64_t b = 4; b <= 20; b += 2) EXPECT_NEAR(bgon_height(b), 1.0 / std::tan(kPi / b), 1e-12) << b;
}

TEST(StopCycle, Base8AgreesWithSimulation) {
    for (double eps : {0.2, 0.05, 0.01}) {
        const StopCyclePrediction p = predicted_stop_cycle(8, eps);
        const auto sim = simulate_stop_cycle(8, eps, 100000);
        ASSERT_TRUE(sim);
        EXPECT_EQ(*sim, p.k) << eps;
        EXPECT_EQ(p.step_budget, p.k * 8);
    }
    EXPECT_EQ(predicted_stop_cycle(8, 0.05).step_budget_base_b, "570");
}

TEST(StopCycle, SmallerEpsilonNeverStopsEarlier) {
    std::uint64_t prev = 0;
    for (double eps = 0.5; eps > 1e-5; eps /= 3.0) {
        const std::uint64_t k = predicted_stop_cycle(6, eps).k;
        EXPECT_GE(k, prev);
        prev = k;
    }
    EXPECT_GT(prev, 1000u);
    EXPECT_THROW(predicted_stop_cycle(8, 0.0), std::invalid_argument);
    EXPECT_THROW(predicted_stop_cycle(7, 0.1), std::invalid_argument);
}

TEST(StopCycleProperty, DigitAlgorithmMatchesScan) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> half_base(2, 8);
    std::uniform_real_distribution<double> log_eps(std::log(1e-3), std::log(1.0));
    for (int i = 0; i < 100; ++i) {
        const std::uint64_t b = 2 * static_cast<std::uint64_t>(half_base(rng));
        const double eps = std::exp(log_eps(rng));
        const StopCyclePrediction p = predicted_stop_cycle(b, eps);
        EXPECT_EQ(p.k_digits, p.k) << "b=" << b << " eps=" << eps;
    }
}

TEST(EvenBase, SurvivorsAreRareAndEventuallyBreak) {
    // Finite-length periodic runs exist for even bases; none lasts for ever.
    const PeriodicSearch s = count_periodic_starts(8, 10000, 3.0, 100, 4);
    EXPECT_LT(s.periodic, 50u);
    for (const Vec2& z : s.examples) EXPECT_FALSE(is_periodic_start(z, 8, 100000).is_periodic);
}
