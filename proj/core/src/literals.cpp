#include "greedyjump/literals.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace greedyjump {
namespace {

struct Split {
    double hi;
    double lo;
};

Split two_prod(double a, double b) noexcept {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

Split two_sum(double a, double b) noexcept {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

DoubleDouble renormalize(double hi, double lo) noexcept {
    const double s = hi + lo;
    return {s, lo - (s - hi)};
}

double frac_exact(double x) noexcept { return x - std::floor(x); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double parse_number(std::string_view s, std::string_view whole) {
    double v = 0.0;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
        throw std::invalid_argument("invalid real literal: '" + std::string(whole) + "'");
    }
    return v;
}

DoubleDouble parse_factor(std::string_view f, std::string_view whole) {
    f = trim(f);
    if (f.empty()) throw std::invalid_argument("invalid real literal: '" + std::string(whole) + "'");
    if (f == "pi") return DoubleDouble::pi();
    if (f.starts_with("sqrt")) {
        std::string_view arg = f.substr(4);
        if (arg.size() >= 2 && arg.front() == '(' && arg.back() == ')') {
            arg = arg.substr(1, arg.size() - 2);
        }
        const double k = parse_number(trim(arg), whole);
        if (k < 0.0) throw std::invalid_argument("sqrt of negative number in '" + std::string(whole) + "'");
        return DoubleDouble::sqrt_of(k);
    }
    return DoubleDouble::from(parse_number(f, whole));
}

}  // namespace

DoubleDouble DoubleDouble::sqrt_of(double k) {
    const double hi = std::sqrt(k);
    if (hi == 0.0) return {0.0, 0.0};
    const double residual = std::fma(-hi, hi, k);
    return {hi, residual / (2.0 * hi)};
}

DoubleDouble DoubleDouble::pi() noexcept { return {3.141592653589793, 1.2246467991473532e-16}; }

DoubleDouble DoubleDouble::inv_two_pi() noexcept { return {0.15915494309189535, -9.839338337591243e-18}; }

DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) noexcept {
    const Split s = two_sum(a.hi, b.hi);
    return renormalize(s.hi, s.lo + a.lo + b.lo);
}

DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) noexcept {
    const Split p = two_prod(a.hi, b.hi);
    return renormalize(p.hi, p.lo + (a.hi * b.lo + a.lo * b.hi));
}

DoubleDouble operator-(const DoubleDouble& a) noexcept { return {-a.hi, -a.lo}; }

DoubleDouble frac(const DoubleDouble& x) noexcept {
    DoubleDouble r = renormalize(frac_exact(x.hi), x.lo);
    const double whole = std::floor(r.hi);
    if (whole != 0.0) r = renormalize(r.hi - whole, r.lo);
    if (r.hi < 0.0) r = DoubleDouble{1.0, 0.0} + r;
    return r;
}

DoubleDouble frac_mul(const DoubleDouble& x, std::uint64_t n) noexcept {
    constexpr double two32 = 4294967296.0;
    const double n1 = static_cast<double>(n >> 32);
    const double n0 = static_cast<double>(n & 0xffffffffULL);

    // x*n = (x.hi + x.lo) * (n1 * 2^32 + n0). The two_prod terms are exact and
    // can be reduced mod 1 exactly; the x.lo terms are tiny.
    const Split a = two_prod(x.hi, n1);
    const Split b = two_prod(x.hi, n0);
    DoubleDouble acc{frac_exact(a.hi * two32), 0.0};
    acc = acc + DoubleDouble{frac_exact(a.lo * two32), 0.0};
    acc = acc + DoubleDouble{frac_exact(b.hi), 0.0};
    acc = acc + DoubleDouble{b.lo, 0.0};
    acc = acc + DoubleDouble{frac_exact(x.lo * n1 * two32), 0.0};
    acc = acc + DoubleDouble{x.lo * n0, 0.0};
    return frac(acc);
}

double frac_poly(const DoubleDouble& c, std::uint64_t n, unsigned power) noexcept {
    DoubleDouble f = frac(c);
    for (unsigned i = 0; i < power; ++i) f = frac_mul(f, n);
    double v = f.hi + f.lo;
    if (v >= 1.0 || v < 0.0) v = 0.0;
    return v;
}

RealLiteral parse_real(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty real literal");
    bool negate = false;
    if (s.front() == '-' && (s.size() > 1 && !std::isdigit(static_cast<unsigned char>(s[1])) && s[1] != '.')) {
        negate = true;
        s.remove_prefix(1);
    }
    DoubleDouble acc = DoubleDouble::from(1.0);
    bool first = true;
    while (true) {
        const auto star = s.find('*');
        const std::string_view factor = s.substr(0, star);
        const DoubleDouble v = parse_factor(factor, text);
        acc = first ? v : acc * v;
        first = false;
        if (star == std::string_view::npos) break;
        s.remove_prefix(star + 1);
    }
    if (negate) acc = -acc;
    return RealLiteral{std::string(trim(text)), acc};
}

std::uint64_t parse_count(std::string_view text) {
    const std::string_view s = trim(text);
    std::uint64_t n = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec == std::errc() && ptr == s.data() + s.size()) return n;
    const double v = parse_real(s).to_double();
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.0e18) {
        throw std::invalid_argument("invalid count: '" + std::string(s) + "'");
    }
    return static_cast<std::uint64_t>(v);
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return std::to_string(v);
    return std::string(buf, ptr);
}

}  // namespace greedyjump
