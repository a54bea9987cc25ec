#include "greedyjump/directions.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace greedyjump {
namespace {

std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t result = n;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

struct FareyCursor {
    std::uint64_t k = 1;
    std::uint64_t pos = 0;
    std::uint64_t a = 0, b = 1, c = 0, d = 1;

    Fraction advance() {
        if (pos > 1 && c == 1 && d == 1) {
            ++k;
            pos = 0;
        }
        Fraction out;
        if (pos == 0) {
            out = {0, 1};
        } else if (pos == 1) {
            out = {1, k};
        } else {
            const std::uint64_t t = (k + b) / d;
            out = {t * c - a, t * d - b};
        }
        a = c;
        b = d;
        c = out.num;
        d = out.den;
        ++pos;
        return out;
    }
};

std::map<std::string, std::string> parse_fields(std::string_view rest, std::string_view whole) {
    std::map<std::string, std::string> fields;
    while (!rest.empty()) {
        const auto colon = rest.find(':');
        const std::string_view item = rest.substr(0, colon);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0) {
            throw std::invalid_argument("malformed source field '" + std::string(item) + "' in '" +
                                        std::string(whole) + "'");
        }
        fields.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
        if (colon == std::string_view::npos) break;
        rest.remove_prefix(colon + 1);
    }
    return fields;
}

std::string take(std::map<std::string, std::string>& fields, const std::string& key, std::string_view whole) {
    auto it = fields.find(key);
    if (it == fields.end()) {
        throw std::invalid_argument("source '" + std::string(whole) + "' is missing '" + key + "='");
    }
    std::string v = it->second;
    fields.erase(it);
    return v;
}

}  // namespace

double vdc(std::uint64_t n, std::uint64_t base) {
    if (base < 2) throw std::invalid_argument("vdc: base must be >= 2");
    std::uint64_t digits[64];
    int count = 0;
    while (n > 0) {
        digits[count++] = n % base;
        n /= base;
    }
    // Horner from the most significant digit: each step adds a digit and
    // divides by the base, so small-digit terms are never lost.
    const double b = static_cast<double>(base);
    double x = 0.0;
    for (int i = count - 1; i >= 0; --i) x = (x + static_cast<double>(digits[i])) / b;
    return x;
}

std::uint64_t farey_block_size(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("farey_block_size: k must be >= 1");
    std::uint64_t size = 1;
    for (std::uint64_t j = 1; j <= k; ++j) size += euler_phi(j);
    return size;
}

Fraction farey_term(std::uint64_t n) {
    std::uint64_t k = 1;
    std::uint64_t block = 2;  // |F_1|
    while (n >= block) {
        n -= block;
        ++k;
        block += euler_phi(k);
    }
    FareyCursor cursor;
    cursor.k = k;
    Fraction f = cursor.advance();
    for (std::uint64_t i = 0; i < n; ++i) f = cursor.advance();
    return f;
}

Point unit_from_turns(double turns) {
    double t = turns - std::floor(turns);
    if (t >= 1.0) t = 0.0;
    const double q = std::floor(t * 4.0);
    const double r = t - 0.25 * q;  // exact: q/4 and t share an exponent range
    const double angle = 2.0 * std::numbers::pi * r;
    const double cs = std::cos(angle);
    const double sn = std::sin(angle);
    switch (static_cast<int>(q)) {
        case 0: return Point{cs, sn};
        case 1: return Point{-sn, cs};
        case 2: return Point{-cs, -sn};
        default: return Point{sn, -cs};
    }
}

SourceSpec SourceSpec::van_der_corput(std::uint64_t base) {
    SourceSpec s;
    s.kind = SourceKind::VanDerCorput;
    s.base = base;
    s.validate();
    return s;
}

SourceSpec SourceSpec::uniform_sphere(std::size_t dim, std::uint64_t seed) {
    SourceSpec s;
    s.kind = SourceKind::UniformSphere;
    s.dim = dim;
    s.seed = seed;
    s.validate();
    return s;
}

SourceSpec SourceSpec::kronecker(std::string_view alpha) {
    SourceSpec s;
    s.kind = SourceKind::Kronecker;
    s.alpha = parse_real(alpha);
    return s;
}

SourceSpec SourceSpec::poly_phase(std::string_view c, unsigned power) {
    SourceSpec s;
    s.kind = SourceKind::PolyPhase;
    s.c = parse_real(c);
    s.power = power;
    s.validate();
    return s;
}

SourceSpec SourceSpec::farey() {
    SourceSpec s;
    s.kind = SourceKind::Farey;
    return s;
}

SourceSpec SourceSpec::nearest_int_phase(std::string_view c) {
    SourceSpec s;
    s.kind = SourceKind::NearestIntPhase;
    s.c = parse_real(c);
    return s;
}

SourceSpec SourceSpec::growing_kronecker(std::string_view c) {
    SourceSpec s;
    s.kind = SourceKind::GrowingKronecker;
    s.c = parse_real(c);
    return s;
}

SourceSpec SourceSpec::trig3d() {
    SourceSpec s;
    s.kind = SourceKind::Trig3D;
    s.dim = 3;
    return s;
}

SourceSpec SourceSpec::parse(std::string_view text) {
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    auto fields = parse_fields(colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1), text);
    SourceSpec s;
    if (name == "vdc") {
        s.kind = SourceKind::VanDerCorput;
        s.base = parse_count(take(fields, "b", text));
    } else if (name == "sphere") {
        s.kind = SourceKind::UniformSphere;
        s.dim = static_cast<std::size_t>(parse_count(take(fields, "d", text)));
        if (fields.contains("seed")) s.seed = parse_count(take(fields, "seed", text));
    } else if (name == "kronecker") {
        s.kind = SourceKind::Kronecker;
        s.alpha = parse_real(take(fields, "alpha", text));
    } else if (name == "polyphase") {
        s.kind = SourceKind::PolyPhase;
        s.c = parse_real(take(fields, "c", text));
        s.power = static_cast<unsigned>(parse_count(take(fields, "p", text)));
    } else if (name == "farey") {
        s.kind = SourceKind::Farey;
    } else if (name == "nip") {
        s.kind = SourceKind::NearestIntPhase;
        s.c = parse_real(take(fields, "c", text));
    } else if (name == "grow") {
        s.kind = SourceKind::GrowingKronecker;
        s.c = parse_real(take(fields, "c", text));
    } else if (name == "trig3d") {
        s.kind = SourceKind::Trig3D;
        s.dim = 3;
    } else {
        throw std::invalid_argument("unknown direction source '" + std::string(name) + "'");
    }
    if (!fields.empty()) {
        throw std::invalid_argument("unexpected field '" + fields.begin()->first + "' in source '" +
                                    std::string(text) + "'");
    }
    s.validate();
    return s;
}

std::string SourceSpec::canonical() const {
    switch (kind) {
        case SourceKind::VanDerCorput: return "vdc:b=" + std::to_string(base);
        case SourceKind::UniformSphere: {
            std::string out = "sphere:d=" + std::to_string(dim);
            if (seed) out += ":seed=" + std::to_string(*seed);
            return out;
        }
        case SourceKind::Kronecker: return "kronecker:alpha=" + alpha.text;
        case SourceKind::PolyPhase: return "polyphase:c=" + c.text + ":p=" + std::to_string(power);
        case SourceKind::Farey: return "farey";
        case SourceKind::NearestIntPhase: return "nip:c=" + c.text;
        case SourceKind::GrowingKronecker: return "grow:c=" + c.text;
        case SourceKind::Trig3D: return "trig3d";
    }
    return {};
}

int SourceSpec::default_start_index() const noexcept {
    return (kind == SourceKind::VanDerCorput || kind == SourceKind::Farey) ? -1 : 0;
}

void SourceSpec::validate() const {
    switch (kind) {
        case SourceKind::VanDerCorput:
            if (base < 2) throw std::invalid_argument("vdc: base must be >= 2");
            break;
        case SourceKind::UniformSphere:
            if (dim < 1) throw std::invalid_argument("sphere: dimension must be >= 1");
            break;
        case SourceKind::Kronecker:
            if (!std::isfinite(alpha.to_double())) throw std::invalid_argument("kronecker: alpha must be finite");
            break;
        case SourceKind::PolyPhase:
            if (power < 1) throw std::invalid_argument("polyphase: power must be >= 1");
            [[fallthrough]];
        case SourceKind::NearestIntPhase:
        case SourceKind::GrowingKronecker:
            if (!std::isfinite(c.to_double())) throw std::invalid_argument("source parameter c must be finite");
            break;
        case SourceKind::Farey:
        case SourceKind::Trig3D:
            break;
    }
}

Point direction(const SourceSpec& spec, std::uint64_t n) {
    switch (spec.kind) {
        case SourceKind::UniformSphere:
            throw std::logic_error("direction: UniformSphere has no random access; use DirectionSource");
        case SourceKind::VanDerCorput:
            return unit_from_turns(vdc(n, spec.base));
        case SourceKind::Kronecker:
            // Angle alpha * n in radians (no 2 pi factor).
            return unit_from_turns(frac_mul(spec.alpha.value * DoubleDouble::inv_two_pi(), n).value());
        case SourceKind::PolyPhase:
            return unit_from_turns(frac_poly(spec.c.value, n, spec.power));
        case SourceKind::Farey:
            return unit_from_turns(farey_term(n).value());
        case SourceKind::NearestIntPhase: {
            const double f = frac_mul(frac(spec.c.value), n).value();
            return unit_from_turns(std::min(f, 1.0 - f));
        }
        case SourceKind::GrowingKronecker: {
            Point p = unit_from_turns(frac_mul(frac(spec.c.value), n).value());
            p *= std::sqrt(static_cast<double>(n));
            return p;
        }
        case SourceKind::Trig3D: {
            const double t = static_cast<double>(n);
            return Point{std::cos(t), std::sin(t), std::cos(std::sqrt(t))};
        }
    }
    throw std::logic_error("direction: unknown source kind");
}

DirectionSource::DirectionSource(SourceSpec spec, std::uint64_t first_index) : spec_(std::move(spec)) {
    spec_.validate();
    if (spec_.kind == SourceKind::UniformSphere) {
        if (!spec_.seed) throw std::invalid_argument("sphere source requires a seed");
        rng_.seed(*spec_.seed);
        if (first_index != 0) throw std::logic_error("sphere source always starts at index 0");
    }
    index_ = first_index;
    if (spec_.kind == SourceKind::Farey) farey_reset(first_index);
}

void DirectionSource::seek(std::uint64_t n) {
    if (spec_.kind == SourceKind::UniformSphere) throw std::logic_error("sphere source cannot seek");
    index_ = n;
    if (spec_.kind == SourceKind::Farey) farey_reset(n);
}

void DirectionSource::farey_reset(std::uint64_t n) {
    std::uint64_t k = 1;
    std::uint64_t block = 2;
    while (n >= block) {
        n -= block;
        ++k;
        block += euler_phi(k);
    }
    farey_k_ = k;
    farey_pos_ = 0;
    fa_ = 0, fb_ = 1, fc_ = 0, fd_ = 1;
    for (std::uint64_t i = 0; i < n; ++i) farey_advance();
}

double DirectionSource::farey_advance() {
    FareyCursor cur{farey_k_, farey_pos_, fa_, fb_, fc_, fd_};
    const Fraction f = cur.advance();
    farey_k_ = cur.k;
    farey_pos_ = cur.pos;
    fa_ = cur.a, fb_ = cur.b, fc_ = cur.c, fd_ = cur.d;
    return f.value();
}

void DirectionSource::next_into(std::span<double> out) {
    if (out.size() != spec_.dim) throw std::invalid_argument("DirectionSource: output dimension mismatch");
    switch (spec_.kind) {
        case SourceKind::UniformSphere: {
            double s = 0.0;
            do {
                s = 0.0;
                for (double& x : out) {
                    x = normal_(rng_);
                    s += x * x;
                }
            } while (s == 0.0);
            const double inv = 1.0 / std::sqrt(s);
            for (double& x : out) x *= inv;
            break;
        }
        case SourceKind::Farey: {
            const Point p = unit_from_turns(farey_advance());
            out[0] = p[0];
            out[1] = p[1];
            break;
        }
        default: {
            const Point p = direction(spec_, index_);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i];
            break;
        }
    }
    ++index_;
}

Point DirectionSource::next() {
    Point p(spec_.dim);
    next_into(p.coords());
    return p;
}

DirectionSource DirectionSource::reseeded(std::uint64_t seed) const {
    SourceSpec s = spec_;
    s.seed = seed;
    return DirectionSource(std::move(s), spec_.kind == SourceKind::UniformSphere ? 0 : index_);
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace greedyjump
