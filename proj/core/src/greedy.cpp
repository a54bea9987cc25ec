#include "greedyjump/greedy.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace greedyjump {

void TiePolicy::validate() const {
    if (!(tolerance >= 0.0 && tolerance < 1.0)) throw std::invalid_argument("tie tolerance must lie in [0, 1)");
}

StepStatus greedy_step_inplace(std::span<double> x, std::span<const double> v, const TiePolicy& policy, int& sign,
                               double& inner_product) noexcept {
    const double ip = dot(x, v);
    inner_product = ip;
    StepStatus status = StepStatus::ok;
    if (std::abs(ip) <= policy.tolerance * norm(x) * norm(v)) {
        if (policy.mode == TieMode::halt) return StepStatus::indeterminate;
        sign = 1;
        status = StepStatus::tie_override;
    } else {
        sign = ip > 0.0 ? -1 : 1;
    }
    if (sign > 0) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += v[i];
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] -= v[i];
    }
    return status;
}

std::optional<StepOutcome> greedy_step(const Point& x, const Point& v, const TiePolicy& policy) {
    if (x.dim() != v.dim()) throw std::invalid_argument("greedy_step: dimension mismatch");
    if (v.norm_squared() == 0.0) throw std::invalid_argument("greedy_step: zero step vector");
    policy.validate();
    StepOutcome out{x, 0, 0.0, false};
    const StepStatus status = greedy_step_inplace(out.next.coords(), v.coords(), policy, out.sign, out.inner_product);
    if (status == StepStatus::indeterminate) return std::nullopt;
    out.tie_override = status == StepStatus::tie_override;
    return out;
}

Trajectory simulate(const Point& x0, const SourceSpec& source, std::uint64_t n, const SimulateOptions& options) {
    require_valid(x0, "simulate: start point");
    source.validate();
    options.policy.validate();
    if (x0.dim() != source.dim) throw std::invalid_argument("simulate: start point dimension does not match source");

    Trajectory traj;
    traj.start_index = options.start_index.value_or(source.default_start_index());
    if (traj.start_index < -1) throw std::invalid_argument("simulate: start index must be >= -1");
    traj.dim = x0.dim();
    traj.source = source;
    traj.policy = options.policy;
    traj.norms_only = options.norms_only;

    const std::uint64_t first = source.kind == SourceKind::UniformSphere
                                    ? 0
                                    : static_cast<std::uint64_t>(traj.start_index + 1);
    DirectionSource dirs(source, first);

    const std::size_t reserve = static_cast<std::size_t>(std::min<std::uint64_t>(n, 1u << 26)) + 1;
    traj.norms.reserve(reserve);
    traj.signs.reserve(reserve);
    if (!options.norms_only) traj.states.reserve(reserve);

    Point x = x0;
    Point v(x0.dim());
    std::mt19937_64 reservoir_rng(options.reservoir_seed);
    std::uint64_t seen = 0;
    auto record = [&](std::int64_t label) {
        traj.norms.push_back(x.norm());
        if (!options.norms_only) {
            traj.states.push_back(x);
        } else if (options.reservoir_size > 0) {
            // Algorithm R: every state has equal probability of being kept.
            if (traj.samples.size() < options.reservoir_size) {
                traj.samples.push_back({label, x});
            } else {
                std::uniform_int_distribution<std::uint64_t> pick(0, seen);
                const std::uint64_t j = pick(reservoir_rng);
                if (j < options.reservoir_size) traj.samples[j] = {label, x};
            }
        }
        ++seen;
    };

    record(traj.start_index);
    for (std::uint64_t step = 0; step < n; ++step) {
        dirs.next_into(v.coords());
        const std::int64_t label = traj.start_index + static_cast<std::int64_t>(step) + 1;
        int sign = 0;
        double ip = 0.0;
        const StepStatus status = greedy_step_inplace(x.coords(), v.coords(), options.policy, sign, ip);
        if (status == StepStatus::indeterminate) {
            traj.indeterminate_at = label;
            break;
        }
        if (status == StepStatus::tie_override) traj.tie_overrides.push_back({label, ip});
        traj.signs.push_back(sign);
        record(label);
    }
    traj.last = x;
    return traj;
}

std::vector<double> greedy_harmonic(double target, std::uint64_t n) {
    if (!(target > 0.0) || !std::isfinite(target)) throw std::invalid_argument("greedy_harmonic: target must be positive");
    if (n < 1) throw std::invalid_argument("greedy_harmonic: n must be >= 1");
    std::vector<double> xs;
    xs.reserve(n);
    double x = 1.0;
    xs.push_back(x);
    for (std::uint64_t k = 2; k <= n; ++k) {
        const double step = 1.0 / static_cast<double>(k);
        x = (x + step <= target) ? x + step : x - step;
        xs.push_back(x);
    }
    return xs;
}

}  // namespace greedyjump
