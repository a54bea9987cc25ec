#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "greedyjump/directions.hpp"
#include "greedyjump/point.hpp"

namespace greedyjump::cli {

enum class Command {
    simulate,
    invariant,
    solve,
    kernel,
    vdc_periodic,
    vdc_region,
    hitting,
    stall,
    stopcycle,
    harmonic,
};

std::string_view command_name(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;
const std::vector<Command>& all_commands();

enum class ParamKind { count, integer, real, source, point, flag, choice };

struct ParamSpec {
    std::string name;
    ParamKind kind;
    std::string default_value;
    std::string help;
    std::vector<std::string> choices;  // for ParamKind::choice
};

const std::vector<ParamSpec>& command_params(Command c);

/// A fully resolved experiment: every declared parameter holds its
/// normalized text, so the canonical string is stable and parses back to an
/// equal config.
struct ExperimentConfig {
    Command command = Command::simulate;
    std::map<std::string, std::string> params;
    std::uint64_t seed = 0;
    std::string seed_origin = "default";  // flag, env or default; not part of the canonical form
    std::filesystem::path out_dir = ".";

    std::string canonical() const;
    static ExperimentConfig from_canonical(std::string_view text);

    const std::string& text(const std::string& name) const;
    std::uint64_t count(const std::string& name) const;
    long long integer(const std::string& name) const;
    double real(const std::string& name) const;
    bool flag(const std::string& name) const;
    SourceSpec source(const std::string& name) const;
    Point point(const std::string& name) const;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.command == b.command && a.params == b.params && a.seed == b.seed;
    }
};

/// Normalizes one raw value according to its kind. Throws std::invalid_argument.
std::string normalize_param(const ParamSpec& spec, std::string_view raw);

/// Builds a config from user-supplied values (missing ones take defaults).
/// The seed comes from `seed_flag`, else from `seed_env` (the contents of
/// GREEDYJUMP_SEED), else 0.
ExperimentConfig make_config(Command command, const std::map<std::string, std::string>& raw,
                             std::optional<std::string> seed_flag, const char* seed_env,
                             std::filesystem::path out_dir = ".");

}  // namespace greedyjump::cli
