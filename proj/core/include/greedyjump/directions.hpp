#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>

#include "greedyjump/literals.hpp"
#include "greedyjump/point.hpp"

namespace greedyjump {

/// Radical inverse: digits of n in base b mirrored about the radix point.
/// Exact in double precision for b = 2 and n < 2^53.
double vdc(std::uint64_t n, std::uint64_t base);

struct Fraction {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

/// Number of elements of the Farey block F_k, endpoints 0 and 1 included.
std::uint64_t farey_block_size(std::uint64_t k);

/// n-th element (0-based) of F_1, F_2, F_3, ... concatenated.
Fraction farey_term(std::uint64_t n);

/// Unit vector (cos 2 pi t, sin 2 pi t). Reduction is exact in quarter turns,
/// so t and t + 1/2 give exactly opposite vectors whenever t + 1/2 is exact.
Point unit_from_turns(double turns);

enum class SourceKind {
    UniformSphere,
    VanDerCorput,
    Kronecker,
    PolyPhase,
    Farey,
    NearestIntPhase,
    GrowingKronecker,
    Trig3D,
};

/// Parameters of a direction family. Parsed from and printed to the CLI
/// grammar, e.g. "vdc:b=8", "sphere:d=4:seed=42", "polyphase:c=sqrt2:p=3".
struct SourceSpec {
    SourceKind kind = SourceKind::VanDerCorput;
    std::size_t dim = 2;
    std::uint64_t base = 2;
    RealLiteral alpha{"1", DoubleDouble::from(1.0)};
    RealLiteral c{"1", DoubleDouble::from(1.0)};
    unsigned power = 2;
    std::optional<std::uint64_t> seed;

    static SourceSpec parse(std::string_view text);
    std::string canonical() const;

    static SourceSpec van_der_corput(std::uint64_t base);
    static SourceSpec uniform_sphere(std::size_t dim, std::uint64_t seed);
    static SourceSpec kronecker(std::string_view alpha);
    static SourceSpec poly_phase(std::string_view c, unsigned power);
    static SourceSpec farey();
    static SourceSpec nearest_int_phase(std::string_view c);
    static SourceSpec growing_kronecker(std::string_view c);
    static SourceSpec trig3d();

    bool deterministic() const noexcept { return kind != SourceKind::UniformSphere; }
    bool unit_norm() const noexcept { return kind != SourceKind::GrowingKronecker && kind != SourceKind::Trig3D; }

    /// Label of the initial point: -1 for the 0-based sequences (van der Corput,
    /// Farey), whose first step uses term 0; 0 for the n >= 1 formulas.
    int default_start_index() const noexcept;

    void validate() const;
};

/// Random access to deterministic families. Throws std::logic_error for
/// UniformSphere, which is only available as a seeded stream.
Point direction(const SourceSpec& spec, std::uint64_t n);

/// Sequential generator v_n, v_{n+1}, ... for any family. Owns its RNG state.
class DirectionSource {
public:
    explicit DirectionSource(SourceSpec spec, std::uint64_t first_index = 0);

    const SourceSpec& spec() const noexcept { return spec_; }
    std::size_t dim() const noexcept { return spec_.dim; }

    /// Index of the direction the next call to next()/next_into() returns.
    std::uint64_t index() const noexcept { return index_; }

    void next_into(std::span<double> out);
    Point next();

    /// Repositions a deterministic source; throws std::logic_error for UniformSphere.
    void seek(std::uint64_t n);

    /// Independent copy for a parallel chain.
    DirectionSource reseeded(std::uint64_t seed) const;

private:
    void farey_reset(std::uint64_t n);
    double farey_advance();

    SourceSpec spec_;
    std::uint64_t index_ = 0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};

    // Farey cursor: current block k and the two most recent terms a/b, c/d.
    std::uint64_t farey_k_ = 1;
    std::uint64_t farey_pos_ = 0;
    std::uint64_t fa_ = 0, fb_ = 1, fc_ = 0, fd_ = 1;
};

/// 64-bit mix used to derive independent per-chain seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace greedyjump
