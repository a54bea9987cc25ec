#include <iostream>
#include <string>
#include <string_view>

#include "greedyjump_cli/acceptance.hpp"

// Usage: greedyjump_acceptance [--quick] [--only <criterion-or-group>]
int main(int argc, char** argv) {
    greedyjump::cli::AcceptanceOptions options;
    for (int i = 1; i < argc; ++i) {
        const std::string_view arg = argv[i];
        if (arg == "--quick") {
            options.quick = true;
        } else if (arg == "--only" && i + 1 < argc) {
            options.only = argv[++i];
        } else {
            std::cerr << "usage: " << argv[0] << " [--quick] [--only <criterion-or-group>]\n";
            return 1;
        }
    }
    const auto results = greedyjump::cli::run_acceptance(options, &std::cout);
    if (results.empty()) {
        std::cerr << "no criterion matches '" << options.only << "'\n";
        return 1;
    }
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
