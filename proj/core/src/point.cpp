#include "greedyjump/point.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace greedyjump {

Point::Point(std::size_t dim, double fill) : coords_(dim, fill) {}

Point::Point(std::initializer_list<double> coords) : coords_(coords) {}

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {}

double Point::norm() const noexcept { return greedyjump::norm(coords_); }

double Point::norm_squared() const noexcept { return dot(coords_, coords_); }

Point Point::operator-() const {
    Point out(*this);
    for (double& c : out.coords_) c = -c;
    return out;
}

Point& Point::operator+=(const Point& other) {
    if (other.dim() != dim()) throw std::invalid_argument("Point: dimension mismatch");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

Point& Point::operator-=(const Point& other) {
    if (other.dim() != dim()) throw std::invalid_argument("Point: dimension mismatch");
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

Point& Point::operator*=(double s) noexcept {
    for (double& c : coords_) c *= s;
    return *this;
}

Point operator+(Point a, const Point& b) { return a += b; }
Point operator-(Point a, const Point& b) { return a -= b; }
Point operator*(double s, Point p) { return p *= s; }

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(std::span<const double> a) noexcept {
    if (a.size() == 2) return std::hypot(a[0], a[1]);
    return std::sqrt(dot(a, a));
}

double dot(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dot: dimension mismatch");
    return dot(a.coords(), b.coords());
}

double distance(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

void require_valid(const Point& p, const char* what) {
    if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty point");
    for (double c : p.coords()) {
        if (!std::isfinite(c)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
}

}  // namespace greedyjump
