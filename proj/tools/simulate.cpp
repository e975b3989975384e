// simulate: scenario runner for the pseudomode microsphere QED library.
//
//   simulate <scenario> [--config file] [--set key=value ...] [--out dir]
//   simulate --list-scenarios
//   simulate --acceptance [--skip-slow]
//
// Exit status: 0 on success, 2 on acceptance failure, 1 on error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pmqed/acceptance.hpp"
#include "pmqed/scenarios.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pseudomode quantum electrodynamics of a dielectric microsphere"};
    std::string scenario;
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    bool list = false, acceptance = false, skip_slow = false;

    app.add_option("scenario", scenario, "one of the scenarios (see --list-scenarios)");
    app.add_option("--config", config_path, "configuration file (key = value lines)");
    app.add_option("--set", overrides, "override a config key, e.g. --set emitter.dipole_debye=100");
    app.add_option("--out", out_dir, "output directory (default from config)");
    app.add_flag("--list-scenarios", list, "list available scenarios");
    app.add_flag("--acceptance", acceptance, "run the full acceptance suite");
    app.add_flag("--skip-slow", skip_slow, "acceptance: skip the finite-box oracle comparison");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list) {
            for (const auto& s : pmqed::list_scenarios()) std::printf("%s\n", s.c_str());
            return 0;
        }
        pmqed::ScenarioConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw std::runtime_error("cannot read config file: " + config_path);
            std::stringstream ss;
            ss << f.rdbuf();
            cfg = pmqed::parse_config(ss.str(), config_path);
        }
        for (const auto& kv : overrides) pmqed::apply_override(cfg, kv);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        cfg.validate();

        if (acceptance || scenario == "acceptance") {
            pmqed::AcceptanceOptions opt;
            opt.skip_slow = skip_slow;
            return pmqed::print_acceptance(pmqed::run_acceptance(cfg, opt));
        }
        if (scenario.empty()) {
            std::fprintf(stderr, "error: no scenario given (try --list-scenarios)\n");
            return 1;
        }
        return pmqed::run_scenario(cfg, scenario);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
