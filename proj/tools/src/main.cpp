#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "greedyjump_cli/acceptance.hpp"
#include "greedyjump_cli/commands.hpp"
#include "greedyjump_cli/config.hpp"

namespace gj = greedyjump::cli;

namespace {

std::string describe(gj::Command c) {
    switch (c) {
        case gj::Command::simulate: return "Greedy walk from a start point with a chosen direction source";
        case gj::Command::invariant: return "Monte Carlo histogram of the stationary radius (random directions)";
        case gj::Command::solve: return "Stationary radial density from the kernel fixed-point equation";
        case gj::Command::kernel: return "Transition density of the radius chain from one radius";
        case gj::Command::vdc_periodic: return "Check whether a start is periodic for the base-b van der Corput walk";
        case gj::Command::vdc_region: return "Raster of periodic starts plus the predicted triangles";
        case gj::Command::hitting: return "Steps until the van der Corput walk enters a ball";
        case gj::Command::stall: return "Start that returns to itself for 2n base-2 steps";
        case gj::Command::stopcycle: return "Predicted and simulated stop cycle for even bases";
        case gj::Command::harmonic: return "Greedy signed harmonic series approaching a target";
    }
    return {};
}

struct CommandOptions {
    gj::Command command;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy unit-step dynamics: simulation, radial chain and van der Corput geometry"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "greedyjump 0.1.0");

    std::optional<std::string> seed;
    std::string out_dir = ".";
    app.add_option("--seed", seed, "Root RNG seed (default: $GREEDYJUMP_SEED, else 0)");
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();

    std::vector<CommandOptions> commands;
    commands.reserve(gj::all_commands().size());
    for (gj::Command c : gj::all_commands()) {
        CommandOptions& co = commands.emplace_back();
        co.command = c;
        co.app = app.add_subcommand(std::string(gj::command_name(c)), describe(c));
        for (const gj::ParamSpec& p : gj::command_params(c)) {
            const std::string flag = "--" + p.name;
            if (p.kind == gj::ParamKind::flag) {
                co.app->add_flag(flag, co.flags[p.name], p.help);
                continue;
            }
            std::string help = p.help;
            if (!p.default_value.empty()) help += " [default: " + p.default_value + "]";
            auto* opt = co.app->add_option(flag, co.values[p.name], help);
            if (p.kind == gj::ParamKind::choice) opt->check(CLI::IsMember(p.choices));
        }
    }

    gj::AcceptanceOptions acceptance;
    auto* validate = app.add_subcommand("validate", "Run the acceptance battery, one line per criterion");
    validate->add_flag("--quick", acceptance.quick, "Smaller samples and wider tolerances");
    validate->add_option("--only", acceptance.only, "Run only the criterion or group with this name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? gj::kExitOk : gj::kExitError;
    }

    if (validate->parsed()) {
        if (seed) {
            try {
                acceptance.seed = std::stoull(*seed);
            } catch (const std::exception&) {
                std::cerr << "error: invalid seed '" << *seed << "'\n";
                return gj::kExitError;
            }
        }
        const auto results = gj::run_acceptance(acceptance, &std::cout);
        std::size_t failed = 0;
        for (const auto& r : results) failed += r.passed ? 0 : 1;
        std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
        return failed == 0 ? gj::kExitOk : gj::kExitError;
    }

    for (CommandOptions& co : commands) {
        if (!co.app->parsed()) continue;
        std::map<std::string, std::string> raw;
        for (const gj::ParamSpec& p : gj::command_params(co.command)) {
            if (p.kind == gj::ParamKind::flag) {
                if (co.flags[p.name]) raw[p.name] = "true";
            } else if (co.app->count("--" + p.name) > 0) {
                raw[p.name] = co.values[p.name];
            }
        }
        try {
            const gj::ExperimentConfig config =
                gj::make_config(co.command, raw, seed, std::getenv("GREEDYJUMP_SEED"), out_dir);
            return gj::run(config, std::cerr);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return gj::kExitError;
        }
    }
    return gj::kExitError;
}
