// Scenario orchestration: builds the pole catalogue, pseudomode set and
// dynamics for a configuration and emits deterministic CSV/JSON output with a
// hashed manifest.

#pragma once

#include <json.hpp>

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmqed/config.hpp"
#include "pmqed/dynamics.hpp"
#include "pmqed/field.hpp"
#include "pmqed/io.hpp"
#include "pmqed/kernel.hpp"
#include "pmqed/oracle.hpp"

namespace pmqed {

using json = nlohmann::json;

// Shared build products of a configured system.
struct SystemBuild {
    ScenarioConfig cfg;
    PoleSet poles;
    PseudomodeSet pm;
    int i_anchor = -1;  // (8,3) by default
    int i_partner = -1; // (5,4) by default
    double omega0 = 0.0;
};

inline SystemBuild build_system(const ScenarioConfig& cfg, bool need_dynamics = true) {
    cfg.validate();
    SystemBuild sb;
    sb.cfg = cfg;
    sb.poles = enumerate_poles(cfg.resonator, cfg.l_max, cfg.re_max, cfg.im_min);
    sb.pm = build_pseudomodes(cfg.resonator, cfg.emitter, sb.poles, cfg.branch());
    sb.i_anchor = sb.pm.index_of(cfg.anchor_l, cfg.anchor_n);
    sb.i_partner = sb.pm.index_of(cfg.partner_l, cfg.partner_n);
    if (sb.i_anchor < 0 && need_dynamics)
        throw std::runtime_error("anchor pole (" + std::to_string(cfg.anchor_l) + "," +
                                 std::to_string(cfg.anchor_n) + ") not in the window");
    if (need_dynamics) {
        if (cfg.emitter.omega0 != 0.0) {
            sb.omega0 = cfg.emitter.omega0;
        } else {
            std::vector<int> resonant{sb.i_anchor};
            if (sb.i_partner >= 0) resonant.push_back(sb.i_partner);
            sb.omega0 = tune_omega0(sb.pm, resonant, sb.i_anchor, cfg.lamb_conv(),
                                    cfg.lamb_tuning == "im");
        }
        sb.pm.emitter.omega0 = sb.omega0;
    }
    return sb;
}

inline std::vector<double> dynamics_grid(const SystemBuild& sb) {
    const ScenarioConfig& cfg = sb.cfg;
    double t_max = cfg.dyn_t_max;
    if (t_max <= 0.0) t_max = 3.0 * pi / std::abs(sb.pm.gbar[sb.i_anchor]);
    return hybrid_time_grid(1e-2, std::min(cfg.dyn_t_switch, 0.01 * t_max), t_max,
                            cfg.dyn_n_log, cfg.dyn_n_lin);
}

// ---- output collection ------------------------------------------------------

struct RunOutput {
    std::filesystem::path dir;
    std::vector<std::pair<std::string, std::string>> files; // name -> sha256
    json manifest_extra;

    void emit(const std::string& name, const std::string& content) {
        write_file(dir / name, content);
        files.push_back({name, sha256_hex(content)});
    }
};

inline void write_manifest(RunOutput& out, const ScenarioConfig& cfg,
                           const std::string& scenario) {
    json m;
    m["scenario"] = scenario;
    json cfgj;
    for (auto& [k, v] : config_echo(cfg)) cfgj[k] = v;
    m["config"] = cfgj;
    json files = json::array();
    for (auto& [name, hash] : out.files) files.push_back({{"file", name}, {"sha256", hash}});
    m["files"] = files;
    write_file(out.dir / "manifest.json", m.dump(2) + "\n");
}

// ---- individual scenarios ---------------------------------------------------

inline void run_spectrum(const SystemBuild& sb, RunOutput& out) {
    const ScenarioConfig& cfg = sb.cfg;
    CsvWriter csv({"l", "k", "IM_reduced", "inv_IM", "sigma_s_partial"});
    const int nk =
        static_cast<int>((cfg.spectrum_k_max - cfg.spectrum_k_min) / cfg.spectrum_dk) + 1;
    std::vector<double> inv_total(nk, 0.0), sigma_total(nk, 0.0);
    for (int l = 1; l <= cfg.l_max; ++l) {
        for (int i = 0; i < nk; ++i) {
            const double k = cfg.spectrum_k_min + i * cfg.spectrum_dk;
            const double im = mode_norm_IM(cfg.resonator, l, k);
            const double sig = scattering_term(cfg.resonator, k, l);
            inv_total[i] += 1.0 / im;
            sigma_total[i] += sig;
            csv.row({std::to_string(l), fmt_g17(k), fmt_g17(im), fmt_g17(1.0 / im),
                     fmt_g17(sig)});
        }
    }
    for (int i = 0; i < nk; ++i) {
        const double k = cfg.spectrum_k_min + i * cfg.spectrum_dk;
        csv.row({"total", fmt_g17(k), fmt_g17(0.0), fmt_g17(inv_total[i]),
                 fmt_g17(sigma_total[i])});
    }
    out.emit("spectrum.csv", csv.content());
}

inline void run_poles(const SystemBuild& sb, RunOutput& out) {
    CsvWriter csv({"l", "n", "re_z", "im_z", "residual"});
    json arr = json::array();
    for (const auto& p : sb.poles.poles) {
        csv.row({std::to_string(p.l), std::to_string(p.n), fmt_g17(p.z.real()),
                 fmt_g17(p.z.imag()), fmt_g17(p.residual)});
        arr.push_back({{"l", p.l},
                       {"n", p.n},
                       {"re_z", p.z.real()},
                       {"im_z", p.z.imag()},
                       {"residual", p.residual}});
    }
    out.emit("poles.csv", csv.content());
    out.emit("poles.json", arr.dump(2) + "\n");
    out.manifest_extra["pole_count"] = sb.poles.poles.size();
}

inline void run_couplings(const SystemBuild& sb, RunOutput& out) {
    CsvWriter csv({"l", "n", "re_z", "im_z", "re_gbar", "im_gbar", "abs_gbar"});
    for (std::size_t n = 0; n < sb.pm.size(); ++n) {
        const auto& p = sb.pm.poles.poles[n];
        const cplx g = sb.pm.gbar[n];
        csv.row({std::to_string(p.l), std::to_string(p.n), fmt_g17(p.z.real()),
                 fmt_g17(p.z.imag()), fmt_g17(g.real()), fmt_g17(g.imag()),
                 fmt_g17(std::abs(g))});
    }
    out.emit("couplings.csv", csv.content());
}

inline Trajectory run_dynamics(const SystemBuild& sb, RunOutput& out,
                               bool emit_files = true) {
    const auto grid = dynamics_grid(sb);
    EffectiveGenerator gen = assemble_generator(sb.pm, sb.omega0);
    Trajectory tr = evolve(gen, grid);
    if (!emit_files) return tr;

    MarkovianityReport rep;
    bool have_rep = true;
    try {
        rep = classify_markovianity(tr, sb.pm);
    } catch (const std::runtime_error&) {
        have_rep = false;
    }

    std::vector<std::string> header{"ct", "abs2_c0"};
    for (const auto& p : sb.pm.poles.poles)
        header.push_back("abs2_b_" + std::to_string(p.l) + "_" + std::to_string(p.n));
    CsvWriter csv(header);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        std::vector<std::string> row{fmt_g17(tr.t[i]), fmt_g17(std::norm(tr.c0[i]))};
        for (std::size_t n = 0; n < tr.n_modes(); ++n)
            row.push_back(fmt_g17(std::norm(tr.b[n][i])));
        csv.row(row);
    }
    out.emit("dynamics.csv", csv.content());

    json meta;
    meta["omega0"] = sb.omega0;
    meta["method"] = tr.method;
    meta["eigen_condition"] = tr.eigen_condition;
    meta["eigen_residual"] = tr.eigen_residual;
    json cols = json::array();
    for (std::size_t n = 0; n < sb.pm.size(); ++n) {
        const auto& p = sb.pm.poles.poles[n];
        json c{{"column", header[n + 2]},
               {"l", p.l},
               {"n", p.n},
               {"re_z", p.z.real()},
               {"im_z", p.z.imag()},
               {"abs_gbar", std::abs(sb.pm.gbar[n])}};
        if (have_rep) {
            c["gamma_over_Gamma0"] = rep.modes[n].gamma_over_Gamma0;
            c["behaviour"] = to_string(rep.modes[n].behaviour);
        }
        cols.push_back(c);
    }
    meta["columns"] = cols;
    if (have_rep) {
        meta["Gamma0"] = rep.Gamma0;
        meta["rabi_period"] = rep.rabi_period;
    }
    out.emit("dynamics_columns.json", meta.dump(2) + "\n");
    return tr;
}

inline void run_two_mode(const SystemBuild& sb, RunOutput& out) {
    const auto grid = dynamics_grid(sb);
    std::vector<int> keep{sb.i_partner, sb.i_anchor};
    if (sb.i_partner < 0) keep = {sb.i_anchor};
    Trajectory tm = two_mode_approx(sb.pm, sb.omega0, keep, grid, sb.cfg.lamb_conv());
    EffectiveGenerator gen = assemble_generator(sb.pm, sb.omega0);
    Trajectory full = evolve(gen, grid);
    CsvWriter csv({"ct", "abs2_c0_full", "abs2_c0_two_mode"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row({fmt_g17(grid[i]), fmt_g17(std::norm(full.c0[i])),
                 fmt_g17(std::norm(tm.c0[i]))});
    out.emit("two_mode.csv", csv.content());
}

inline void run_portraits(const SystemBuild& sb, RunOutput& out) {
    const ScenarioConfig& cfg = sb.cfg;
    std::vector<double> rg, tg;
    for (int i = 1; i <= cfg.portrait_nr; ++i)
        rg.push_back(cfg.portrait_r_max * i / cfg.portrait_nr);
    for (int i = 0; i < cfg.portrait_ntheta; ++i)
        tg.push_back(pi * i / (cfg.portrait_ntheta - 1));
    for (int which = 0; which < 2; ++which) {
        const int idx = which == 0 ? sb.i_partner : sb.i_anchor;
        if (idx < 0) continue;
        const Pole& p = sb.pm.poles.poles[idx];
        Portrait por = pseudomode_portrait(cfg.resonator, p, rg, tg);
        CsvWriter csv({"r", "theta", "abs2_v"});
        for (std::size_t ir = 0; ir < rg.size(); ++ir)
            for (std::size_t it = 0; it < tg.size(); ++it)
                csv.row({fmt_g17(rg[ir]), fmt_g17(tg[it]),
                         fmt_g17(por.abs2[ir * tg.size() + it])});
        out.emit("portrait_" + std::to_string(p.l) + "_0_" + std::to_string(p.n) + ".csv",
                 csv.content());
    }
}

inline void run_fieldmap(const SystemBuild& sb, RunOutput& out) {
    const ScenarioConfig& cfg = sb.cfg;
    // trajectory long enough for the largest retarded time
    double t_need = cfg.field_t_max + 1.0;
    SystemBuild sb2 = sb;
    sb2.cfg.dyn_t_max = std::max(t_need, 2.0 * cfg.field_t_max);
    const auto grid = dynamics_grid(sb2);
    EffectiveGenerator gen = assemble_generator(sb.pm, sb.omega0);
    Trajectory tr = evolve(gen, grid);

    ModeFilter filter = ModeFilter::all();
    if (cfg.field_filter == "anchor") filter = ModeFilter::single(sb.i_anchor);
    if (cfg.field_filter == "background") filter = ModeFilter::complement(sb.i_anchor);

    std::vector<double> rg, tg;
    for (int i = 0; i < cfg.field_nr; ++i)
        rg.push_back(cfg.field_r_min +
                     (cfg.field_r_max - cfg.field_r_min) * i / (cfg.field_nr - 1));
    for (int i = 0; i < cfg.field_nt; ++i)
        tg.push_back(cfg.field_t_max * i / (cfg.field_nt - 1));
    FieldMapOptions fo;
    fo.filter = filter;
    FieldMap map = intensity_map(cfg.resonator, sb.pm, tr, rg, tg, fo);

    CsvWriter csv({"r", "ct", "intensity"});
    for (std::size_t ir = 0; ir < rg.size(); ++ir)
        for (std::size_t it = 0; it < tg.size(); ++it)
            csv.row({fmt_g17(rg[ir]), fmt_g17(tg[it]), fmt_g17(map.at(ir, it))});
    out.emit("fieldmap.csv", csv.content());

    json meta;
    meta["filter"] = cfg.field_filter;
    meta["normalization"] = "absolute (kappa^2 units)";
    meta["delay_convention"] = "(r - a) + max(r_emit - a, 0), outside-surface travel";
    meta["intensity_units"] = "(rad/um) um^-3 relative scale";
    out.emit("fieldmap_meta.json", meta.dump(2) + "\n");
}

inline void run_oracle_compare(const SystemBuild& sb, RunOutput& out) {
    const ScenarioConfig& cfg = sb.cfg;
    std::vector<BoxDiscretization> boxes;
    EmitterSpec em = sb.pm.emitter;
    for (int l = 1; l <= cfg.l_max; ++l) {
        std::vector<Pole> pl;
        for (const auto& p : sb.poles.poles)
            if (p.l == l) pl.push_back(p);
        boxes.push_back(
            discretize_box(cfg.resonator, em, l, cfg.oracle_R_box, cfg.oracle_k_max, &pl));
    }
    std::vector<double> tg;
    for (int i = 0; i <= cfg.oracle_nt; ++i)
        tg.push_back(cfg.oracle_t_max * i / cfg.oracle_nt);
    OracleOptions oopt;
    oopt.use_rk = cfg.oracle_integrator == "rk";
    OracleResult orc = oracle_evolve(em, boxes, tg, oopt);

    EffectiveGenerator gen = assemble_generator(sb.pm, sb.omega0);
    Trajectory tr = evolve(gen, tg);

    double max_rel = 0.0, max_norm_dev = 0.0;
    for (std::size_t i = 0; i < tg.size(); ++i)
        max_rel = std::max(max_rel, std::abs(tr.c0[i] - orc.c0[i]) /
                                        std::max(std::abs(orc.c0[i]), 1e-30));
    for (double nv : orc.norm_samples) max_norm_dev = std::max(max_norm_dev, std::abs(nv - 1.0));

    CsvWriter csv({"ct", "re_c0_pm", "im_c0_pm", "re_c0_oracle", "im_c0_oracle", "rel_err"});
    for (std::size_t i = 0; i < tg.size(); ++i)
        csv.row({fmt_g17(tg[i]), fmt_g17(tr.c0[i].real()), fmt_g17(tr.c0[i].imag()),
                 fmt_g17(orc.c0[i].real()), fmt_g17(orc.c0[i].imag()),
                 fmt_g17(std::abs(tr.c0[i] - orc.c0[i]) /
                         std::max(std::abs(orc.c0[i]), 1e-30))});
    out.emit("oracle_compare.csv", csv.content());

    json rep;
    rep["max_rel_err_c0"] = max_rel;
    rep["validity_window_ct"] = {0.0, cfg.oracle_t_max};
    rep["R_box"] = cfg.oracle_R_box;
    rep["k_max"] = cfg.oracle_k_max;
    rep["n_modes"] = orc.n_modes;
    rep["probability_deviation"] = max_norm_dev;
    rep["integrator"] = orc.method;
    // per-l kernel identity errors at a representative retardation
    json kerr = json::array();
    for (int l : {sb.cfg.partner_l, sb.cfg.anchor_l}) {
        std::vector<Pole> pl;
        for (const auto& p : sb.poles.poles)
            if (p.l == l) pl.push_back(p);
        KernelQuadOptions ko;
        ko.k_max = std::min(cfg.kernel_k_max, cfg.re_max);
        std::vector<Pole> inwin;
        for (auto& p : pl)
            if (p.z.real() < ko.k_max) inwin.push_back(p);
        const double a = cfg.resonator.radius_a;
        auto q = quadrature_Il(cfg.resonator, l, a, a, 5.0, inwin, ko);
        const cplx rs = residue_Il(cfg.resonator, inwin, a, a, 5.0);
        kerr.push_back({{"l", l},
                        {"tau", 5.0},
                        {"rel_err", std::abs(q.value - rs) / std::abs(q.value)}});
    }
    rep["kernel_errors"] = kerr;
    out.emit("oracle_report.json", rep.dump(2) + "\n");
}

// Scenario driver. Returns process exit status (0 ok).
inline int run_scenario(const ScenarioConfig& cfg, const std::string& scenario) {
    RunOutput out;
    out.dir = cfg.output_dir;
    if (scenario == "spectrum") {
        SystemBuild sb = build_system(cfg, false);
        run_spectrum(sb, out);
    } else if (scenario == "poles") {
        SystemBuild sb = build_system(cfg, false);
        run_poles(sb, out);
    } else if (scenario == "couplings") {
        SystemBuild sb = build_system(cfg, false);
        run_couplings(sb, out);
    } else if (scenario == "dynamics") {
        SystemBuild sb = build_system(cfg);
        run_dynamics(sb, out);
    } else if (scenario == "two_mode") {
        SystemBuild sb = build_system(cfg);
        run_two_mode(sb, out);
    } else if (scenario == "portraits") {
        SystemBuild sb = build_system(cfg, false);
        run_portraits(sb, out);
    } else if (scenario == "fieldmap") {
        SystemBuild sb = build_system(cfg);
        run_fieldmap(sb, out);
    } else if (scenario == "oracle_compare") {
        SystemBuild sb = build_system(cfg);
        run_oracle_compare(sb, out);
    } else {
        throw std::invalid_argument("unknown scenario '" + scenario + "'");
    }
    write_manifest(out, cfg, scenario);
    return 0;
}

inline std::vector<std::string> list_scenarios() {
    return {"spectrum", "poles",     "couplings", "dynamics",
            "two_mode", "portraits", "fieldmap",  "oracle_compare", "acceptance"};
}

} // namespace pmqed
