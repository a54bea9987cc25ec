#pragma once

#include <functional>
#include <vector>

namespace greedyjump {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Integrand for open rules near singular endpoints: f(x, x - a, b - x).
/// The two distances are exact even where x itself rounds to an endpoint.
using EndpointIntegrand = std::function<double(double x, double from_a, double to_b)>;

/// Double-exponential (tanh-sinh) rule on [a, b]. Never evaluates f at the
/// endpoints and clusters nodes there, so integrable endpoint singularities
/// such as (x - a)^(-1/2) converge quickly.
QuadratureResult tanh_sinh(const EndpointIntegrand& f, double a, double b, double rel_tol = 1e-12,
                           int max_levels = 10);

QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-12,
                           int max_levels = 10);

/// n-point Gauss-Legendre rule, nodes and weights on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(int n);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    template <class F>
    double integrate(F&& f, double a, double b) const {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
        return half * sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

}  // namespace greedyjump
