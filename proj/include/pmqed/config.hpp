// Scenario configuration: flat dotted key = value text (TOML-like scalars,
// # comments), strict unknown-key rejection with line diagnostics, and
// --set key=value overrides.

#pragma once

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmqed/mie.hpp"
#include "pmqed/io.hpp"
#include "pmqed/pseudomode.hpp"

namespace pmqed {

struct ScenarioConfig {
    ResonatorSpec resonator;
    EmitterSpec emitter;          // omega0 = 0 means "tune to the anchor mode"
    int l_max = 30;
    double re_max = 20.0;
    double im_min = -14.285;      // calibrated so the default window holds 613 poles

    // anchor mode labels (resonance pair of the default geometry)
    int anchor_l = 8, anchor_n = 3;
    int partner_l = 5, partner_n = 4;

    // spectrum scan
    double spectrum_k_min = 0.25, spectrum_k_max = 20.0, spectrum_dk = 0.005;

    // dynamics
    double dyn_t_max = 0.0;       // 0 = auto (3 Rabi periods of the anchor mode)
    int dyn_n_lin = 2400, dyn_n_log = 60;
    double dyn_t_switch = 50.0;

    // fieldmap
    double field_r_min = 1.0, field_r_max = 61.0;
    int field_nr = 121;
    double field_t_max = 120.0;
    int field_nt = 241;
    std::string field_filter = "all"; // all | anchor | background

    // portraits
    double portrait_r_max = 1.5;
    int portrait_nr = 121, portrait_ntheta = 91;

    // oracle
    double oracle_R_box = 200.0, oracle_k_max = 25.0, oracle_t_max = 320.0;
    int oracle_nt = 400;
    std::string oracle_integrator = "eigen"; // eigen | rk

    // kernel identity
    double kernel_k_max = 40.0;
    std::vector<double> kernel_tau = {1.0, 5.0, 20.0};

    // conventions (spec'd open-question switches)
    std::string lamb_convention = "abs2";   // abs2 | square
    std::string lamb_tuning = "re";         // re | im
    std::string sqrt_branch = "principal";  // principal | flipped

    std::string output_dir = "out";

    LambConvention lamb_conv() const {
        return lamb_convention == "square" ? LambConvention::square : LambConvention::abs2;
    }
    SqrtBranch branch() const {
        return sqrt_branch == "flipped" ? SqrtBranch::flipped : SqrtBranch::principal;
    }
    void validate() const {
        resonator.validate();
        emitter.validate();
        if (l_max < 1 || re_max <= 0.0 || im_min >= 0.0)
            throw std::invalid_argument("config: empty pole window");
        if (lamb_convention != "abs2" && lamb_convention != "square")
            throw std::invalid_argument("config: lamb.convention must be abs2|square");
        if (lamb_tuning != "re" && lamb_tuning != "im")
            throw std::invalid_argument("config: lamb.tuning must be re|im");
        if (sqrt_branch != "principal" && sqrt_branch != "flipped")
            throw std::invalid_argument("config: pseudomode.branch must be principal|flipped");
        if (field_filter != "all" && field_filter != "anchor" && field_filter != "background")
            throw std::invalid_argument("config: fieldmap.filter must be all|anchor|background");
        if (oracle_integrator != "eigen" && oracle_integrator != "rk")
            throw std::invalid_argument("config: oracle.integrator must be eigen|rk");
    }
};

namespace detail {

struct ConfigBinding {
    std::map<std::string, double*> d;
    std::map<std::string, int*> i;
    std::map<std::string, std::string*> s;
};

inline ConfigBinding bind(ScenarioConfig& c) {
    ConfigBinding b;
    b.d = {
        {"resonator.radius_um", &c.resonator.radius_a},
        {"resonator.refractive_index", &c.resonator.refractive_index},
        {"emitter.r_um", &c.emitter.r_emit},
        {"emitter.theta", &c.emitter.theta},
        {"emitter.dipole_debye", &c.emitter.dipole_debye},
        {"emitter.omega0", &c.emitter.omega0},
        {"window.re_max", &c.re_max},
        {"window.im_min", &c.im_min},
        {"spectrum.k_min", &c.spectrum_k_min},
        {"spectrum.k_max", &c.spectrum_k_max},
        {"spectrum.dk", &c.spectrum_dk},
        {"dynamics.t_max", &c.dyn_t_max},
        {"dynamics.t_switch", &c.dyn_t_switch},
        {"fieldmap.r_min", &c.field_r_min},
        {"fieldmap.r_max", &c.field_r_max},
        {"fieldmap.t_max", &c.field_t_max},
        {"portraits.r_max", &c.portrait_r_max},
        {"oracle.R_box", &c.oracle_R_box},
        {"oracle.k_max", &c.oracle_k_max},
        {"oracle.t_max", &c.oracle_t_max},
        {"kernel.k_max", &c.kernel_k_max},
    };
    b.i = {
        {"window.l_max", &c.l_max},
        {"anchor.l", &c.anchor_l},
        {"anchor.n", &c.anchor_n},
        {"partner.l", &c.partner_l},
        {"partner.n", &c.partner_n},
        {"dynamics.n_lin", &c.dyn_n_lin},
        {"dynamics.n_log", &c.dyn_n_log},
        {"fieldmap.nr", &c.field_nr},
        {"fieldmap.nt", &c.field_nt},
        {"portraits.nr", &c.portrait_nr},
        {"portraits.ntheta", &c.portrait_ntheta},
        {"oracle.nt", &c.oracle_nt},
    };
    b.s = {
        {"fieldmap.filter", &c.field_filter},
        {"oracle.integrator", &c.oracle_integrator},
        {"lamb.convention", &c.lamb_convention},
        {"lamb.tuning", &c.lamb_tuning},
        {"pseudomode.branch", &c.sqrt_branch},
        {"output.dir", &c.output_dir},
    };
    return b;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline void apply_kv(ScenarioConfig& cfg, const std::string& key, const std::string& raw,
                     const std::string& where) {
    ConfigBinding b = bind(cfg);
    std::string val = trim(raw);
    if (val.size() >= 2 && val.front() == '"' && val.back() == '"')
        val = val.substr(1, val.size() - 2);
    if (auto it = b.d.find(key); it != b.d.end()) {
        std::size_t pos = 0;
        const double v = std::stod(val, &pos);
        if (pos != val.size())
            throw std::invalid_argument(where + ": malformed number for '" + key + "'");
        *it->second = v;
        return;
    }
    if (auto it = b.i.find(key); it != b.i.end()) {
        std::size_t pos = 0;
        const int v = std::stoi(val, &pos);
        if (pos != val.size())
            throw std::invalid_argument(where + ": malformed integer for '" + key + "'");
        *it->second = v;
        return;
    }
    if (auto it = b.s.find(key); it != b.s.end()) {
        *it->second = val;
        return;
    }
    throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

} // namespace detail

// Parse a config file body; `name` appears in diagnostics.
inline ScenarioConfig parse_config(const std::string& text, const std::string& name = "config") {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(name + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        detail::apply_kv(cfg, key, line.substr(eq + 1),
                         name + ":" + std::to_string(lineno));
    }
    return cfg;
}

inline void apply_override(ScenarioConfig& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    detail::apply_kv(cfg, detail::trim(kv.substr(0, eq)), kv.substr(eq + 1), "--set " + kv);
}

// Fully resolved key/value echo of a config (for the run manifest).
inline std::vector<std::pair<std::string, std::string>> config_echo(const ScenarioConfig& cfg) {
    ScenarioConfig& c = const_cast<ScenarioConfig&>(cfg);
    detail::ConfigBinding b = detail::bind(c);
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& [k, p] : b.d) out.push_back({k, fmt_g17(*p)});
    for (auto& [k, p] : b.i) out.push_back({k, std::to_string(*p)});
    for (auto& [k, p] : b.s) out.push_back({k, *p});
    return out;
}

} // namespace pmqed
