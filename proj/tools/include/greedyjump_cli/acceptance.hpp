#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace greedyjump::cli {

struct CriterionResult {
    std::string id;     // short key, e.g. "mc-mean"
    std::string group;  // "radial" or "vdc"
    std::string title;
    bool passed = false;
    std::string measured;
    std::string expected;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    bool quick = false;   // smaller samples, wider tolerances
    std::string only;     // run criteria whose id or group matches; empty runs all
    std::uint64_t seed = 20240611;
};

/// Runs the acceptance battery. Each result line is also streamed to
/// `progress` as soon as its criterion finishes, when given.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream* progress = nullptr);

std::string format_result(const CriterionResult& r);

}  // namespace greedyjump::cli
