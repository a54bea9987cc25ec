#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "greedyjump/quadrature.hpp"

using namespace greedyjump;

TEST(GaussLegendre, ExactForPolynomialsUpToDegree2nMinus1) {
    const GaussLegendre gl(6);
    for (int p = 0; p <= 11; ++p) {
        const double exact = (std::pow(2.0, p + 1) - std::pow(-1.0, p + 1)) / (p + 1);
        EXPECT_NEAR(gl.integrate([p](double x) { return std::pow(x, p); }, -1.0, 2.0), exact, 1e-12) << p;
    }
    double wsum = 0.0;
    for (double w : gl.weights()) wsum += w;
    EXPECT_NEAR(wsum, 2.0, 1e-14);
}

TEST(TanhSinh, SmoothAndSingularIntegrands) {
    EXPECT_NEAR(tanh_sinh([](double x) { return std::exp(x); }, 0.0, 1.0).value, std::exp(1.0) - 1.0, 1e-14);
    // Arcsine law: integral of 1/sqrt(1-x^2) over [0,1] is pi/2.
    const auto r = tanh_sinh([](double, double, double to_b) { return 1.0 / std::sqrt(to_b * (2.0 - to_b)); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, std::numbers::pi / 2.0, 1e-12);
    EXPECT_NEAR(tanh_sinh([](double x) { return std::log(x); }, 0.0, 1.0).value, -1.0, 1e-12);
}
