#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "greedyjump/greedy.hpp"

namespace greedyjump {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
    friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

double dot(Vec2 a, Vec2 b) noexcept;
double cross(Vec2 a, Vec2 b) noexcept;
double norm(Vec2 a) noexcept;
Vec2 to_vec2(const Point& p);
Point to_point(Vec2 v);

/// Directions e^{2 pi i Vdc_b(n)} for n < count, shared by many starts.
class VdcTable {
public:
    VdcTable(std::uint64_t base, std::size_t count);

    std::uint64_t base() const noexcept { return base_; }
    std::size_t size() const noexcept { return dirs_.size(); }
    Vec2 operator[](std::size_t n) const noexcept { return dirs_[n]; }

private:
    std::uint64_t base_;
    std::vector<Vec2> dirs_;
};

struct PeriodicityReport {
    std::uint64_t b = 0;
    Vec2 z_start;
    std::uint64_t cycles_checked = 0;  // complete blocks that returned
    bool is_periodic = false;
    bool sign_constant = false;  // one sign within every block
    bool uniform_sign = false;   // one sign over the whole run
    int first_sign = 0;
    std::optional<std::int64_t> first_violation_step;
    std::optional<std::int64_t> indeterminate_at;
    double max_return_error = 0.0;
};

/// Simulates cycles * b steps from z_{-1} = z and checks z_{kb-1} = z_{-1}
/// for every k <= cycles. Periodic means every return lies within tol and
/// no block mixes signs. Stops at the first violation.
PeriodicityReport is_periodic_start(Vec2 z, std::uint64_t b, std::uint64_t cycles, double tol = 1e-9,
                                    const VdcTable* table = nullptr);

/// sin(j pi / b) / sin(pi / b): distance from z_{-1} after j steps of one polygon.
double chord_radius(std::uint64_t b, std::uint64_t j);

/// Halfplane {p : <normal, p> > offset}.
struct HalfPlane {
    Vec2 normal;
    double offset = 0.0;
};

/// Convex polygon of the intersection of halfplanes, clipped from a square
/// of half-width `extent`. Vertices counter-clockwise, near-duplicates merged.
std::vector<Vec2> intersect_halfplanes(const std::vector<HalfPlane>& planes, double extent = 100.0);

/// The b-gon traced from z_start by b minus-sign steps with directions
/// e^{2 pi i (rotation_turns + j/b)}. Returns z_{-1}, z_0, ..., z_{b-2}.
std::vector<Vec2> polygon_vertices(std::uint64_t b, double rotation_turns, Vec2 z_start);

/// Intersection of the halfplanes through each polygon vertex, orthogonal to
/// the outgoing side, on the side the step points to: the admissible origins
/// for that polygon.
std::vector<Vec2> inner_polygon(std::uint64_t b, double rotation_turns, Vec2 z_start);

enum class SignFamily { minus, plus };

struct TriangleRegion {
    std::array<Vec2, 3> vertices;
    SignFamily family = SignFamily::minus;

    /// Strict membership in the open triangle.
    bool contains(Vec2 p) const noexcept;
    Vec2 centroid() const noexcept;
    /// Euclidean distance to the closed triangle, zero inside.
    double distance(Vec2 p) const noexcept;
    double area() const noexcept;
    Vec2 sample(std::mt19937_64& rng) const;
};

/// Periodic-start triangles for odd b >= 5 in origin-relative coordinates:
/// T1 holds the starts whose signs are all -1, T2 = -T1 those with +1.
std::pair<TriangleRegion, TriangleRegion> triangle_region(std::uint64_t b);

/// x-offsets of the apex and of the adjacent vertex in the frame centred on z_{-1}.
double triangle_apex_offset(std::uint64_t b);
double triangle_adjacent_offset(std::uint64_t b);

struct PolygonTrace {
    std::uint64_t b = 0;
    std::vector<double> rotations;    // 2 pi Vdc_b(kb), one per block
    std::vector<double> chord_radii;  // |z_n - z_{-1}| for every step
    double max_chord_error = 0.0;     // against chord_radius(b, (n + 1) mod b)
    double max_turn_error = 0.0;      // deviation of consecutive step angles from 2 pi / b
};

PolygonTrace polygon_trace(Vec2 z_start, std::uint64_t b, std::uint64_t cycles);

struct HittingResult {
    std::optional<std::uint64_t> steps;  // number of steps until |z| < radius
    std::optional<std::int64_t> halted_at;
};

HittingResult hitting_time(Vec2 z0, std::uint64_t b = 2, double target_radius = 1.4142135623730951,
                           std::uint64_t max_steps = 1'000'000);

/// The bound 8 (|z0| - 2) + 8 on the base-2 hitting step count.
double hitting_bound(double start_norm) noexcept;

struct PairViolation {
    std::int64_t n;  // |z_{2n-1}| < |z_{2n+1}| - tol
    double before;
    double after;
};

/// Checks |z_{2n-1}| >= |z_{2n+1}| along a base-2 trajectory labelled from
/// z_{-1}. Works on norms-only trajectories; with states it also rejects
/// equal norms at distinct points. Throws std::invalid_argument otherwise.
std::vector<PairViolation> monotone_pairs_check(const Trajectory& traj, double tol = 1e-9);

struct SemicircleReport {
    std::int64_t entered_at = 0;  // odd label n with |z_n| < 1
    std::uint64_t pairs_checked = 0;
    double max_return_error = 0.0;
    double max_radius_error = 0.0;
    double max_halfplane_excess = 0.0;  // largest <p - z_n, z_n>
    bool passed = false;
};

/// Verifies the point-plus-semicircle structure after the first odd-index
/// entry into B(0, 1). Throws std::invalid_argument for non-base-2 or
/// norms-only trajectories and std::domain_error if no such entry exists.
SemicircleReport semicircle_check(const Trajectory& traj, double tol = 1e-9);

struct StallStart {
    std::uint64_t n = 0;
    unsigned k = 0;            // floor(log2 n)
    double alpha = 0.0;        // (4c - sqrt(16c^2 - 12)) / 2, c = cos(pi 2^{-k-1})
    double exact_bound = 0.0;  // sec(pi 2^{-k-1} - offset): largest radius that stalls in the chosen direction
    double angle = 0.0;
    double radius = 0.0;
    Vec2 z;
    bool verified = false;
    double max_return_error = 0.0;
};

double stall_alpha(unsigned k);

/// Start with |z| > 1 for which z_{2i-1} = z_{-1} for all i <= n, checked by
/// simulating 2n base-2 steps. Requires floor(log2 n) >= 2.
StallStart stall_start(std::uint64_t n);

/// Vertical extent of the unit-side b-gon traced by directions e^{2 pi i j/b}.
double bgon_height(std::uint64_t b);

struct StopCyclePrediction {
    std::uint64_t b = 0;
    double epsilon = 0.0;
    double height = 0.0;
    double threshold = 0.0;  // arctan(M / 2 eps) - pi/2 + 2 pi / b
    std::uint64_t k = 0;     // first block whose rotation 2 pi Vdc_b(kb) reaches the threshold
    std::uint64_t k_digits = 0;  // same block from the base-b digit algorithm
    std::uint64_t step_budget = 0;  // k * b
    std::string step_budget_base_b;
};

/// Throws std::invalid_argument unless b is even, b >= 4 and epsilon > 0.
StopCyclePrediction predicted_stop_cycle(std::uint64_t b, double epsilon, std::uint64_t max_k = 1u << 30);

/// First block k (0-based, steps kb .. kb + b - 1) that fails to return to
/// z_{-1} = (epsilon, M/2) or mixes signs. nullopt if none within max_cycles.
std::optional<std::uint64_t> simulate_stop_cycle(std::uint64_t b, double epsilon, std::uint64_t max_cycles);

struct RasterCell {
    double x = 0.0;
    double y = 0.0;
    bool periodic = false;
    double return_error = 0.0;
};

struct RasterOptions {
    std::size_t resolution = 1000;
    double half_width = 1.0;
    std::uint64_t steps = 150;     // compare z_{steps-1} with z_{-1}
    double threshold = 1e-4;
    unsigned threads = 0;
};

/// Grid over [-w, w]^2 marking starts with |z_{steps-1} - z_{-1}| < threshold.
std::vector<RasterCell> raster_region(std::uint64_t b, const RasterOptions& options = {});

struct PeriodicSearch {
    std::uint64_t samples = 0;
    std::uint64_t periodic = 0;
    std::vector<Vec2> examples;  // first few periodic starts found
};

/// Uniform random starts in [-w, w]^2 tested with is_periodic_start.
PeriodicSearch count_periodic_starts(std::uint64_t b, std::uint64_t samples, double half_width,
                                     std::uint64_t cycles, std::uint64_t seed, double tol = 1e-9,
                                     unsigned threads = 0);

}  // namespace greedyjump
