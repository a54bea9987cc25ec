#include "greedyjump_cli/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "greedyjump/literals.hpp"

namespace greedyjump::cli {
namespace {

struct CommandInfo {
    Command command;
    std::string_view name;
};

constexpr std::array<CommandInfo, 10> kCommands{{
    {Command::simulate, "simulate"},
    {Command::invariant, "invariant"},
    {Command::solve, "solve"},
    {Command::kernel, "kernel"},
    {Command::vdc_periodic, "vdc-periodic"},
    {Command::vdc_region, "vdc-region"},
    {Command::hitting, "hitting"},
    {Command::stall, "stall"},
    {Command::stopcycle, "stopcycle"},
    {Command::harmonic, "harmonic"},
}};

using K = ParamKind;

std::map<Command, std::vector<ParamSpec>> build_params() {
    std::map<Command, std::vector<ParamSpec>> m;
    m[Command::simulate] = {
        {"source", K::source, "vdc:b=2", "direction source spec", {}},
        {"start", K::point, "0.3,0.4", "initial point, comma separated", {}},
        {"n", K::count, "1000", "number of steps", {}},
        {"norms-only", K::flag, "false", "store only norms (forced above --full-limit steps)", {}},
        {"full-states", K::flag, "false", "store every state even for large runs", {}},
        {"full-limit", K::count, "1000000", "largest run stored with full states by default", {}},
        {"reservoir", K::count, "1000", "full points kept by reservoir sampling in norms-only mode", {}},
        {"tie-tol", K::real, "1e-12", "relative tie tolerance", {}},
        {"tie-mode", K::choice, "halt", "tie handling", {"halt", "choose-plus"}},
    };
    m[Command::invariant] = {
        {"d", K::integer, "3", "dimension", {}},
        {"steps", K::count, "1010000", "chain steps including burn-in", {}},
        {"burnin", K::count, "10000", "discarded initial steps", {}},
        {"bins", K::count, "200", "histogram bins on [0, mean + 8]", {}},
        {"alpha", K::real, "0.1", "exponent of the reported moment sum", {}},
        {"shards", K::count, "1", "independent chains merged at the end", {}},
    };
    m[Command::solve] = {
        {"d", K::integer, "3", "dimension", {}},
        {"nodes", K::count, "2000", "grid nodes on [0, mean + 8]", {}},
        {"max-iters", K::count, "500", "iteration limit", {}},
        {"tol", K::real, "1e-10", "sup-norm change that stops the iteration", {}},
        {"discretization", K::flag, "false", "estimate discretization error on a half grid", {}},
    };
    m[Command::kernel] = {
        {"d", K::integer, "3", "dimension", {}},
        {"x", K::real, "1", "current radius", {}},
        {"points", K::count, "201", "evaluation points across the reachable interval", {}},
    };
    m[Command::vdc_periodic] = {
        {"b", K::count, "2", "van der Corput base", {}},
        {"start", K::point, "0.3,0.4", "z_{-1}", {}},
        {"cycles", K::count, "100", "blocks of b steps to check", {}},
        {"tol", K::real, "1e-9", "return tolerance", {}},
    };
    m[Command::vdc_region] = {
        {"b", K::count, "5", "van der Corput base", {}},
        {"resolution", K::count, "1000", "grid cells per axis", {}},
        {"width", K::real, "1", "half-width of the square", {}},
        {"steps", K::count, "150", "steps before comparing with the start", {}},
        {"threshold", K::real, "1e-4", "return distance counted as periodic", {}},
    };
    m[Command::hitting] = {
        {"b", K::count, "2", "van der Corput base", {}},
        {"start", K::point, "50,17", "z_{-1}", {}},
        {"radius", K::real, "sqrt2", "target radius", {}},
        {"max-steps", K::count, "1000000", "step limit", {}},
    };
    m[Command::stall] = {
        {"n", K::count, "4", "number of base-2 step pairs that must return", {}},
    };
    m[Command::stopcycle] = {
        {"b", K::count, "8", "even base", {}},
        {"eps", K::real, "0.05", "horizontal offset of z_{-1} = (eps, M/2)", {}},
        {"max-cycles", K::count, "100000", "simulation limit", {}},
    };
    m[Command::harmonic] = {
        {"target", K::real, "1", "target value", {}},
        {"n", K::count, "1000", "number of terms", {}},
        {"every", K::count, "1", "write every k-th term to the CSV", {}},
    };
    return m;
}

const std::map<Command, std::vector<ParamSpec>>& params_table() {
    static const auto table = build_params();
    return table;
}

const ParamSpec& find_spec(Command c, const std::string& name) {
    for (const ParamSpec& p : command_params(c)) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("command '" + std::string(command_name(c)) + "' has no parameter '" + name + "'");
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::string_view command_name(Command c) noexcept {
    for (const auto& info : kCommands) {
        if (info.command == c) return info.name;
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
    for (const auto& info : kCommands) {
        if (info.name == name) return info.command;
    }
    return std::nullopt;
}

const std::vector<Command>& all_commands() {
    static const std::vector<Command> list = [] {
        std::vector<Command> v;
        for (const auto& info : kCommands) v.push_back(info.command);
        return v;
    }();
    return list;
}

const std::vector<ParamSpec>& command_params(Command c) { return params_table().at(c); }

std::string normalize_param(const ParamSpec& spec, std::string_view raw_in) {
    const std::string raw = trim(raw_in);
    auto fail = [&](const std::string& why) {
        return std::invalid_argument("--" + spec.name + " '" + raw + "': " + why);
    };
    try {
        switch (spec.kind) {
            case K::count:
                return std::to_string(parse_count(raw));
            case K::integer: {
                const bool negative = !raw.empty() && raw[0] == '-';
                const std::uint64_t magnitude = parse_count(negative ? std::string_view(raw).substr(1) : raw);
                return (negative && magnitude != 0 ? "-" : "") + std::to_string(magnitude);
            }
            case K::real: {
                const RealLiteral lit = parse_real(raw);
                if (!std::isfinite(lit.to_double())) throw fail("not finite");
                return lit.text;
            }
            case K::source:
                return SourceSpec::parse(raw).canonical();
            case K::point: {
                std::string out;
                std::string_view rest = raw;
                while (true) {
                    const auto comma = rest.find(',');
                    const double v = parse_real(rest.substr(0, comma)).to_double();
                    if (!std::isfinite(v)) throw fail("coordinate not finite");
                    if (!out.empty()) out += ',';
                    out += format_real(v);
                    if (comma == std::string_view::npos) break;
                    rest.remove_prefix(comma + 1);
                }
                return out;
            }
            case K::flag:
                if (raw == "true" || raw == "1" || raw.empty()) return "true";
                if (raw == "false" || raw == "0") return "false";
                throw fail("expected true or false");
            case K::choice:
                if (std::find(spec.choices.begin(), spec.choices.end(), raw) == spec.choices.end()) {
                    throw fail("not one of the allowed values");
                }
                return raw;
        }
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        if (msg.rfind("--", 0) == 0) throw;
        throw fail(msg);
    }
    throw fail("unknown parameter kind");
}

std::string ExperimentConfig::canonical() const {
    std::string out(command_name(command));
    for (const auto& [key, value] : params) out += " " + key + "=" + value;
    out += " seed=" + std::to_string(seed);
    return out;
}

ExperimentConfig ExperimentConfig::from_canonical(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string word;
    if (!(in >> word)) throw std::invalid_argument("empty config string");
    const auto cmd = parse_command(word);
    if (!cmd) throw std::invalid_argument("unknown command '" + word + "'");
    std::map<std::string, std::string> raw;
    std::optional<std::string> seed;
    while (in >> word) {
        const auto eq = word.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + word + "'");
        const std::string key = word.substr(0, eq);
        const std::string value = word.substr(eq + 1);
        if (key == "seed") {
            seed = value;
        } else {
            raw[key] = value;
        }
    }
    ExperimentConfig c = make_config(*cmd, raw, seed, nullptr);
    return c;
}

const std::string& ExperimentConfig::text(const std::string& name) const {
    const auto it = params.find(name);
    if (it == params.end()) throw std::invalid_argument("config has no parameter '" + name + "'");
    return it->second;
}

std::uint64_t ExperimentConfig::count(const std::string& name) const { return parse_count(text(name)); }

long long ExperimentConfig::integer(const std::string& name) const { return std::stoll(text(name)); }

double ExperimentConfig::real(const std::string& name) const { return parse_real(text(name)).to_double(); }

bool ExperimentConfig::flag(const std::string& name) const { return text(name) == "true"; }

SourceSpec ExperimentConfig::source(const std::string& name) const {
    SourceSpec s = SourceSpec::parse(text(name));
    if (s.kind == SourceKind::UniformSphere && !s.seed) s.seed = seed;
    return s;
}

Point ExperimentConfig::point(const std::string& name) const {
    std::vector<double> coords;
    std::string_view rest = text(name);
    while (true) {
        const auto comma = rest.find(',');
        coords.push_back(parse_real(rest.substr(0, comma)).to_double());
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return Point(std::move(coords));
}

ExperimentConfig make_config(Command command, const std::map<std::string, std::string>& raw,
                             std::optional<std::string> seed_flag, const char* seed_env,
                             std::filesystem::path out_dir) {
    ExperimentConfig c;
    c.command = command;
    c.out_dir = std::move(out_dir);
    for (const auto& [key, value] : raw) find_spec(command, key);
    for (const ParamSpec& spec : command_params(command)) {
        const auto it = raw.find(spec.name);
        c.params[spec.name] = normalize_param(spec, it == raw.end() ? spec.default_value : it->second);
    }
    if (seed_flag) {
        c.seed = parse_count(*seed_flag);
        c.seed_origin = "flag";
    } else if (seed_env != nullptr && *seed_env != '\0') {
        c.seed = parse_count(seed_env);
        c.seed_origin = "env";
    }
    if (command == Command::simulate) {
        if (c.flag("norms-only") && c.flag("full-states")) {
            throw std::invalid_argument("--norms-only and --full-states conflict");
        }
        if (c.point("start").dim() != c.source("source").dim) {
            throw std::invalid_argument("--start dimension does not match the source dimension");
        }
    }
    return c;
}

}  // namespace greedyjump::cli
