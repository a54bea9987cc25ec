#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace greedyjump {

/// A point (or step vector) in R^d. Always at least one coordinate, all finite.
class Point {
public:
    Point() = default;
    explicit Point(std::size_t dim, double fill = 0.0);
    Point(std::initializer_list<double> coords);
    explicit Point(std::vector<double> coords);

    std::size_t dim() const noexcept { return coords_.size(); }
    bool empty() const noexcept { return coords_.empty(); }

    double& operator[](std::size_t i) noexcept { return coords_[i]; }
    double operator[](std::size_t i) const noexcept { return coords_[i]; }

    std::span<double> coords() noexcept { return coords_; }
    std::span<const double> coords() const noexcept { return coords_; }

    double norm() const noexcept;
    double norm_squared() const noexcept;

    Point operator-() const;
    Point& operator+=(const Point& other);
    Point& operator-=(const Point& other);
    Point& operator*=(double s) noexcept;

    friend bool operator==(const Point&, const Point&) = default;

private:
    std::vector<double> coords_;
};

Point operator+(Point a, const Point& b);
Point operator-(Point a, const Point& b);
Point operator*(double s, Point p);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> a) noexcept;
double distance(const Point& a, const Point& b);
double dot(const Point& a, const Point& b);

/// Throws std::invalid_argument unless p is non-empty with finite coordinates.
void require_valid(const Point& p, const char* what);

}  // namespace greedyjump
