#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace greedyjump {

/// Unevaluated sum hi + lo carrying roughly 106 bits of precision.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;

    double value() const noexcept { return hi + lo; }
    static DoubleDouble from(double v) noexcept { return {v, 0.0}; }
    static DoubleDouble sqrt_of(double k);
    static DoubleDouble pi() noexcept;
    static DoubleDouble inv_two_pi() noexcept;
};

DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) noexcept;
DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) noexcept;
DoubleDouble operator-(const DoubleDouble& a) noexcept;

/// x - floor(x), with hi in [0, 1].
DoubleDouble frac(const DoubleDouble& x) noexcept;

/// frac(x * n) computed without forming the (possibly huge) product in plain
/// double precision. Loses about log2(n) bits of the ~106 available.
DoubleDouble frac_mul(const DoubleDouble& x, std::uint64_t n) noexcept;

/// frac(c * n^power), reducing after every multiplication by n.
double frac_poly(const DoubleDouble& c, std::uint64_t n, unsigned power) noexcept;

/// A real parameter as written on the command line together with its value.
struct RealLiteral {
    std::string text;
    DoubleDouble value;

    double to_double() const noexcept { return value.value(); }
};

/// Parses products of factors such as "1.0415*sqrt2", "sqrt(3)", "pi", "2.5e-3".
/// Throws std::invalid_argument on malformed input.
RealLiteral parse_real(std::string_view text);

/// Parses a nonnegative count; accepts scientific notation ("1e6") when the
/// value is integral.
std::uint64_t parse_count(std::string_view text);

/// Shortest round-trip decimal representation.
std::string format_real(double v);

}  // namespace greedyjump
