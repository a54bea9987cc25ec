#include "greedyjump/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace greedyjump {
namespace {

// Beyond |t| = 4 the node distance to the endpoint is below 1e-80 of the
// interval length; weights there are negligible for integrable singularities.
constexpr double kTMax = 4.0;

}  // namespace

QuadratureResult tanh_sinh(const EndpointIntegrand& f, double a, double b, double rel_tol, int max_levels) {
    if (!(b > a)) {
        if (b == a) return {};
        throw std::invalid_argument("tanh_sinh: need a <= b");
    }
    const double half = 0.5 * (b - a);
    QuadratureResult res;

    auto term = [&](double t) {
        // s = (pi/2) sinh t; x = mid + half * tanh s; weight = half * (pi/2) cosh t / cosh^2 s.
        const double s = 0.5 * std::numbers::pi * std::sinh(t);
        const double e = std::exp(-2.0 * std::abs(s));
        const double one_minus_tanh = 2.0 * e / (1.0 + e);  // 1 - |tanh s|
        const double cosh_s = 0.5 * (std::exp(std::abs(s)) + std::exp(-std::abs(s)));
        const double w = half * 0.5 * std::numbers::pi * std::cosh(t) / (cosh_s * cosh_s);
        const double near = half * one_minus_tanh;  // distance to the nearer endpoint
        const double far = 2.0 * half - near;
        double x;
        double from_a;
        double to_b;
        if (s >= 0) {
            x = b - near;
            from_a = far;
            to_b = near;
        } else {
            x = a + near;
            from_a = near;
            to_b = far;
        }
        if (near <= 0.0 || w == 0.0) return 0.0;
        ++res.evaluations;
        return w * f(x, from_a, to_b);
    };

    double h = 1.0;
    double sum = term(0.0);
    for (double t = h; t <= kTMax; t += h) sum += term(t) + term(-t);
    double estimate = h * sum;
    double previous = estimate;
    for (int level = 1; level <= max_levels; ++level) {
        h *= 0.5;
        double extra = 0.0;
        for (double t = h; t <= kTMax; t += 2.0 * h) extra += term(t) + term(-t);
        sum += extra;
        estimate = h * sum;
        res.error_estimate = std::abs(estimate - previous);
        previous = estimate;
        if (level >= 3 && res.error_estimate <= rel_tol * std::abs(estimate)) break;
    }
    res.value = estimate;
    return res;
}

QuadratureResult tanh_sinh(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           int max_levels) {
    return tanh_sinh([&f](double x, double, double) { return f(x); }, a, b, rel_tol, max_levels);
}

GaussLegendre::GaussLegendre(int n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: n must be >= 1");
    nodes_.resize(static_cast<std::size_t>(n));
    weights_.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[static_cast<std::size_t>(i)] = -x;
        nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
        weights_[static_cast<std::size_t>(i)] = w;
        weights_[static_cast<std::size_t>(n - 1 - i)] = w;
    }
}

}  // namespace greedyjump
