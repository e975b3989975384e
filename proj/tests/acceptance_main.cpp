// Acceptance suite runner: prints one pass/fail line per criterion and exits
// nonzero on any failure. `--skip-slow` omits the finite-box oracle
// comparison (criterion 6).

#include <cstring>

#include "pmqed/acceptance.hpp"

int main(int argc, char** argv) {
    pmqed::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--skip-slow") == 0) opt.skip_slow = true;
    pmqed::ScenarioConfig cfg;
    try {
        return pmqed::print_acceptance(pmqed::run_acceptance(cfg, opt));
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance suite error: %s\n", e.what());
        return 1;
    }
}
