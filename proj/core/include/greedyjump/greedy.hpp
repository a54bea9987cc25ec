#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "greedyjump/directions.hpp"
#include "greedyjump/point.hpp"

namespace greedyjump {

enum class TieMode { halt, choose_plus };

/// A step is a tie when |<x, v>| <= tolerance * |x| |v|.
struct TiePolicy {
    double tolerance = 1e-12;
    TieMode mode = TieMode::halt;

    void validate() const;
};

struct StepOutcome {
    Point next;
    int sign = 0;  // coefficient on v: next = x + sign * v
    double inner_product = 0.0;
    bool tie_override = false;  // a tie resolved to +1 under choose_plus
};

/// One greedy step x -> x +/- v choosing the sign that minimizes the norm.
/// Returns nullopt on a tie under TieMode::halt.
/// Throws std::invalid_argument on dimension mismatch or zero v.
std::optional<StepOutcome> greedy_step(const Point& x, const Point& v, const TiePolicy& policy = {});

enum class StepStatus { ok, tie_override, indeterminate };

/// In-place variant used by the simulation loops. Leaves x untouched when
/// indeterminate. No argument validation.
StepStatus greedy_step_inplace(std::span<double> x, std::span<const double> v, const TiePolicy& policy, int& sign,
                               double& inner_product) noexcept;

struct TieOverride {
    std::int64_t step;  // label of the state produced by the overridden step
    double inner_product;
};

struct LabeledPoint {
    std::int64_t label;
    Point point;
};

/// Record of a run. Entry k of norms/states belongs to state label
/// start_index + k; signs[k] is the sign of the step from entry k to k + 1.
struct Trajectory {
    std::int64_t start_index = 0;
    std::size_t dim = 0;
    SourceSpec source;
    TiePolicy policy;
    bool norms_only = false;

    std::vector<Point> states;  // empty when norms_only
    std::vector<double> norms;
    std::vector<int> signs;
    Point last;  // final recorded state, kept in every mode

    std::optional<std::int64_t> indeterminate_at;  // label of the step that could not be taken
    std::vector<TieOverride> tie_overrides;
    std::vector<LabeledPoint> samples;  // reservoir of full points in norms_only mode

    std::size_t steps() const noexcept { return signs.size(); }
    std::int64_t label(std::size_t k) const noexcept { return start_index + static_cast<std::int64_t>(k); }
    std::int64_t last_label() const noexcept { return label(signs.size()); }
    bool halted() const noexcept { return indeterminate_at.has_value(); }
};

struct SimulateOptions {
    TiePolicy policy;
    bool norms_only = false;
    std::size_t reservoir_size = 0;  // full points kept in norms_only mode
    std::uint64_t reservoir_seed = 0;
    std::optional<std::int64_t> start_index;  // defaults to the source convention
};

/// Runs n greedy steps from x0. The step producing state label s uses
/// direction index s. Stops early at an indeterminate step.
Trajectory simulate(const Point& x0, const SourceSpec& source, std::uint64_t n, const SimulateOptions& options = {});

/// x_1 = 1 and x_k = x_{k-1} + 1/k if that stays <= target, otherwise
/// x_{k-1} - 1/k. Returns x_1 .. x_n.
std::vector<double> greedy_harmonic(double target, std::uint64_t n);

}  // namespace greedyjump
