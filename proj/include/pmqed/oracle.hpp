// Brute-force verification layer: the exact continuum discretised in a finite
// box of radius R_box. Box modes are the roots of the outside radial function
// at R_box; their couplings sample the density-absorbed continuum coupling
// with equal-phase (local-spacing) weights, so narrow resonances -- where the
// box spectrum locally compresses -- are integrated with spectral accuracy.
//
// The resulting emitter + bath Hamiltonian is a Hermitian arrow matrix. Its
// eigenproblem separates into a secular equation with one root strictly
// between consecutive bath frequencies, which safeguarded Newton locates to
// machine precision; the evolution is then exact and probability-conserving
// by construction, far beyond what adaptive time stepping could certify at
// this dimension (an RK integrator is retained for cross-checks on small
// boxes).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmqed/mie.hpp"
#include "pmqed/pole_finder.hpp"
#include "pmqed/pseudomode.hpp"

namespace pmqed {

struct BoxDiscretization {
    double R_box = 200.0;
    int l = 1;
    std::vector<double> k_modes;  // roots of f_out(k, R_box)
    std::vector<double> weights;  // local spacing (equal-phase measure)
    std::vector<double> g_modes;  // sqrt(ghat^2(k_j) * w_j)
};

namespace detail {

inline double f_outside(const ResonatorSpec& spec, int l, double k, double R) {
    const ModeCoefficients mc = match_interface(spec, l, k);
    return (mc.alpha * sph_j(l, k * R) + mc.beta * sph_y(l, k * R)).real();
}

} // namespace detail

// All box-mode roots in (0, k_max], including the compressed clusters around
// narrow resonances (sampled on an arctangent grid in the resonance phase).
inline BoxDiscretization discretize_box(const ResonatorSpec& spec, const EmitterSpec& emitter,
                                        int l, double R_box, double k_max,
                                        const std::vector<Pole>* poles_l = nullptr) {
    if (R_box < 100.0 * spec.radius_a)
        throw std::invalid_argument("discretize_box: R_box must be >= 100 a");
    if (k_max > 25.0) throw std::invalid_argument("discretize_box: k_max must be <= 25");
    BoxDiscretization box;
    box.R_box = R_box;
    box.l = l;
    auto f = [&](double k) { return detail::f_outside(spec, l, k, R_box); };

    // base scan at a quarter of the asymptotic spacing
    std::vector<double> roots;
    {
        const double dk = pi / R_box / 4.0;
        double k_prev = dk, f_prev = f(k_prev);
        for (double k = 2 * dk; k <= k_max + 0.5 * dk; k += dk) {
            const double fk = f(k);
            if (f_prev * fk < 0.0) {
                double a = k_prev, b = k, fa = f_prev;
                for (int it = 0; it < 100; ++it) {
                    const double m = 0.5 * (a + b);
                    const double fm = f(m);
                    if (fa * fm <= 0.0) b = m;
                    else { a = m; fa = fm; }
                    if (b - a < 1e-15 * std::max(1.0, a)) break;
                }
                roots.push_back(0.5 * (a + b));
            }
            k_prev = k;
            f_prev = fk;
        }
    }

    (void)poles_l; // a narrow resonance pins exactly one extra root, which the
                   // quarter-spacing base scan resolves except when it lands
                   // next to a background root; anomalous gaps are rescanned

    if (roots.size() < 3) throw std::runtime_error("discretize_box: too few box modes");

    auto bisect_into = [&](double aa, double bb, double fa, std::vector<double>& out) {
        for (int it = 0; it < 110; ++it) {
            const double m = 0.5 * (aa + bb);
            const double fm = f(m);
            if (fa * fm <= 0.0) bb = m;
            else { aa = m; fa = fm; }
            if (bb - aa < 1e-15 * std::max(1.0, aa)) break;
        }
        out.push_back(0.5 * (aa + bb));
    };
    auto scan_points = [&](const std::vector<double>& ks, std::vector<double>& out) {
        if (ks.size() < 2) return;
        double kp = ks.front(), fp2 = f(kp);
        for (std::size_t i = 1; i < ks.size(); ++i) {
            const double fk = f(ks[i]);
            if (fp2 * fk < 0.0) bisect_into(kp, ks[i], fp2, out);
            kp = ks[i];
            fp2 = fk;
        }
    };
    auto rescan_gap = [&](double lo, double hi) {
        std::vector<double> found;
        // stay clear of the endpoint roots' numerical sign-noise zones
        const double margin = std::max(1e-11 * std::abs(hi), 0.02 * (hi - lo));
        lo += margin;
        hi -= margin;
        if (hi <= lo) return found;
        std::vector<double> ks;
        for (int i = 0; i <= 512; ++i) ks.push_back(lo + (hi - lo) * i / 512);
        scan_points(ks, found);
        if (found.empty() && poles_l) {
            // a pinned root may sit within ~gamma of a background root: sample
            // on an arctangent grid around each near-axis pole in the gap
            for (const auto& p : *poles_l) {
                const double k0 = p.z.real();
                const double g0 = std::max(p.gamma(), 1e-13);
                if (k0 <= lo || k0 >= hi || p.gamma() > 0.1) continue;
                std::vector<double> kt;
                const int n_th = 2048;
                for (int i = 0; i <= n_th; ++i) {
                    const double th = -0.5 * pi + pi * i / n_th;
                    const double k = k0 + g0 * std::tan(0.999 * th);
                    if (k > lo && k < hi) kt.push_back(k);
                }
                scan_points(kt, found);
            }
        }
        return found;
    };
    for (int pass = 0; pass < 3; ++pass) {
        bool changed = false;
        for (std::size_t i = 2; i + 1 < roots.size(); ++i) {
            const double d1 = roots[i] - roots[i - 1];
            const double d0 = roots[i - 1] - roots[i - 2];
            const double d2 = roots[i + 1] - roots[i];
            const double local = 0.5 * (d0 + d2);
            if (d1 > 1.7 * local && roots[i] > 20.0 / R_box) {
                const auto extra = rescan_gap(roots[i - 1], roots[i]);
                if (!extra.empty()) {
                    roots.insert(roots.end(), extra.begin(), extra.end());
                    changed = true;
                }
            }
        }
        if (!changed) break;
        std::sort(roots.begin(), roots.end());
        roots.erase(std::unique(roots.begin(), roots.end(),
                                [](double x, double y) {
                                    return std::abs(x - y) < 1e-11 * std::max(1.0, x);
                                }),
                    roots.end());
    }
    for (std::size_t i = 2; i + 1 < roots.size(); ++i) {
        const double d1 = roots[i] - roots[i - 1];
        const double d0 = roots[i - 1] - roots[i - 2];
        const double d2 = roots[i + 1] - roots[i];
        const double local = 0.5 * (d0 + d2);
        if (d1 > 2.2 * local && roots[i] > 20.0 / R_box)
            throw std::runtime_error("discretize_box: missed root suspected near k = " +
                                     std::to_string(roots[i]) + " (l = " + std::to_string(l) + ")");
    }

    // Exact finite-box couplings. The mode norm has a closed form: with
    // S = r f and the TM matching, the interface terms cancel and
    //   Int dr eps [l(l+1) f^2 + S'^2] / k^2 = N^4 L_in + L_out,
    // where L are Lommel integrals Int r^2 f^2 dr of the respective branches.
    // A mode pinned on a narrow resonance gets a large interior norm and
    // thereby exactly the single-mode cavity coupling.
    const double N = spec.refractive_index;
    const double a = spec.radius_a;
    const double re = emitter.r_emit;
    const double A0 = vsh_radial_component(l, 0, emitter.theta);
    const double amp = kappa_units() * emitter.dipole_debye * l * (l + 1.0) * A0;
    box.k_modes = roots;
    box.weights.resize(roots.size());
    box.g_modes.resize(roots.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double k = roots[i];
        const ModeCoefficients mc = match_interface(spec, l, k);
        const double al = mc.alpha.real(), be = mc.beta.real();
        auto f_mix = [&](int m, double y) {
            return al * sph_j(m, y).real() + be * sph_y(m, y).real();
        };
        // Lommel: Int_0^b r^2 Z_l(x r)^2 dr = b^3/2 [Z_l^2 - Z_{l-1} Z_{l+1}](x b)
        const double xa = N * k * a;
        const double jl = sph_j(l, xa).real();
        const double L_in =
            0.5 * a * a * a * (jl * jl - sph_j(l - 1, xa).real() * sph_j(l + 1, xa).real());
        auto F_out = [&](double b) {
            const double fl = f_mix(l, k * b);
            return 0.5 * b * b * b * (fl * fl - f_mix(l - 1, k * b) * f_mix(l + 1, k * b));
        };
        const double L_out = F_out(R_box) - F_out(a);
        const double norm = N * N * N * N * L_in + L_out;
        if (!(norm > 0.0))
            throw std::runtime_error("discretize_box: non-positive mode norm at k = " +
                                     std::to_string(k));
        const double f_emit = radial_Z(spec, l, k, re, false).real();
        box.g_modes[i] = amp * std::sqrt(k / spec.eps_at(re)) * f_emit /
                         (k * re * std::sqrt(norm));
        // effective spectral cell of the mode (-> pi/R away from resonances)
        const double ghat = continuum_coupling_g(spec, emitter, l, k);
        box.weights[i] = ghat > 0.0 ? box.g_modes[i] * box.g_modes[i] / (ghat * ghat) : 0.0;
    }
    return box;
}

// ---- arrow-matrix eigensolver -------------------------------------------

// Hermitian arrow matrix H = [[w0, g^T], [g, diag(d)]]. The secular function
// s(lam) = w0 - lam - sum_j g_j^2/(d_j - lam) is strictly decreasing between
// consecutive d_j, giving exactly one eigenvalue per interval plus one on
// each flank. Weakly coupled bath modes shift by mu ~ g^2/(d - w0), far below
// the double-precision gap of the absolute eigenvalue, so every root is
// stored as an offset mu from its anchoring diagonal entry and the secular
// equation is solved in the offset variable, keeping lam - d_i =
// (d_anchor - d_i) + mu exact to relative precision.
struct ArrowEigen {
    std::vector<double> d;       // sorted bath frequencies
    std::vector<double> g;       // couplings (matched order)
    std::vector<int> anchor;     // index into d (or -1 for the w0-free flanks)
    std::vector<double> mu;      // lam_m = d[anchor] + mu (or w0 + mu if anchor = -1)
    double w0 = 0.0;
    std::vector<double> w_head;  // |<head|v_m>|^2

    double lambda(std::size_t m) const {
        return (anchor[m] < 0 ? w0 : d[static_cast<std::size_t>(anchor[m])]) + mu[m];
    }
    // lam_m - d_i, cancellation-free
    double lam_minus_d(std::size_t m, std::size_t i) const {
        const double base = anchor[m] < 0 ? w0 - d[i]
                                          : d[static_cast<std::size_t>(anchor[m])] - d[i];
        return base + mu[m];
    }
};

namespace detail {

// Secular function in the offset variable around anchor index a (or around w0
// for a = -1): f(mu) = w0 - base - mu - sum_i g_i^2 / ((d_i - base) - mu).
inline double arrow_secular_mu(double w0, const std::vector<double>& d,
                               const std::vector<double>& g, double base, double mu) {
    double s = (w0 - base) - mu;
    for (std::size_t i = 0; i < d.size(); ++i) s -= g[i] * g[i] / ((d[i] - base) - mu);
    return s;
}

// Root in the offset bracket (mu_lo, mu_hi) around the given base; f is
// strictly decreasing in mu. Graded probing toward mu = 0 locates roots that
// hug the anchor exponentially closely, then bisection+Newton polishes.
inline double arrow_root_mu(double w0, const std::vector<double>& d,
                            const std::vector<double>& g, double base, double mu_lo,
                            double mu_hi) {
    auto f = [&](double m) { return arrow_secular_mu(w0, d, g, base, m); };
    double a = mu_lo, b = mu_hi;
    // graded probes from the anchor side outward
    const bool anchored_left = std::abs(mu_lo) < std::abs(mu_hi); // root offset from lower side
    const double span = mu_hi - mu_lo;
    double prev = anchored_left ? mu_lo : mu_hi;
    double fprev = f(prev); // may be +-inf-like; sign is what matters
    for (int e = 52; e >= 1; --e) {
        const double m = anchored_left ? mu_lo + span * std::ldexp(1.0, -e)
                                       : mu_hi - span * std::ldexp(1.0, -e);
        const double fm = f(m);
        if ((fprev > 0.0) != (fm > 0.0)) {
            if (anchored_left) { a = prev; b = m; }
            else { a = m; b = prev; }
            break;
        }
        // tighten the bracket from the anchored side as probes pass
        if (anchored_left) a = m;
        else b = m;
        prev = m;
        fprev = fm;
    }
    // bisection with Newton acceleration; the bracket can span hundreds of
    // decades (mu ~ g^2/detuning for weakly coupled modes), so same-sign
    // brackets are halved geometrically
    auto midpoint = [](double lo2, double hi2) {
        if (lo2 < 0.0 && hi2 > 0.0) return 0.5 * (lo2 + hi2);
        const double alo = std::abs(lo2), ahi = std::abs(hi2);
        const double ratio = std::max(alo, ahi) / std::max(std::min(alo, ahi), 1e-320);
        if (ratio > 4.0) {
            const double m = std::sqrt(alo * ahi);
            return lo2 < 0.0 ? -m : m;
        }
        return 0.5 * (lo2 + hi2);
    };
    double x = midpoint(a, b);
    for (int it = 0; it < 400; ++it) {
        const double fx = f(x);
        if (fx > 0.0) a = x;
        else b = x;
        double fp = -1.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double dd = (d[i] - base) - x;
            fp -= g[i] * g[i] / (dd * dd);
        }
        double xn = x - fx / fp;
        // Newton crawls when started far below the root on a 1/mu branch;
        // force the log-space bisection on alternate iterations
        if (!(xn > a && xn < b) || (it & 1)) xn = midpoint(a, b);
        if (std::abs(xn - x) <= 4.0 * std::abs(xn) * 1e-17 + 1e-300) { x = xn; break; }
        x = xn;
        if (b - a <= 8.0 * std::abs(x) * 1e-17) break;
    }
    return x;
}

} // namespace detail

inline ArrowEigen arrow_eigensolve(double w0, std::vector<double> d, std::vector<double> g) {
    // sort by d and merge near-degeneracies (couplings add in quadrature; the
    // orthogonal combination decouples from the head)
    std::vector<std::size_t> idx(d.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    ArrowEigen ae;
    ae.w0 = w0;
    // bath modes closer than ~1e-12 are indistinguishable over any window
    // t << 1/spacing and their micro-interval would sit at the fp resolution
    // of the secular equation; merge them exactly (couplings in quadrature)
    for (std::size_t i : idx) {
        if (!ae.d.empty() && d[i] - ae.d.back() < 1e-12 * std::max(1.0, d[i])) {
            ae.g.back() = std::sqrt(ae.g.back() * ae.g.back() + g[i] * g[i]);
        } else {
            ae.d.push_back(d[i]);
            ae.g.push_back(g[i]);
        }
    }
    const std::size_t N = ae.d.size();
    ae.anchor.resize(N + 1);
    ae.mu.resize(N + 1);
    double span = 0.0;
    for (double gg : ae.g) span += gg * gg;
    const double guard = std::sqrt(span) + 1.0;

    // left flank: root below d_0, anchored to d_0 (mu < 0)
    {
        const double lo = std::min(w0, ae.d.front()) - guard;
        ae.anchor[0] = 0;
        ae.mu[0] = detail::arrow_root_mu(w0, ae.d, ae.g, ae.d.front(), lo - ae.d.front(),
                                         -1e-300);
    }
    // interior roots: anchor to the nearer interval endpoint (secular sign at
    // the midpoint decides which half holds the root)
    for (std::size_t j = 0; j + 1 < N; ++j) {
        const double h = ae.d[j + 1] - ae.d[j];
        const double fmid = detail::arrow_secular_mu(w0, ae.d, ae.g, ae.d[j], 0.5 * h);
        if (fmid <= 0.0) { // root in the left half, anchored to d_j
            ae.anchor[j + 1] = static_cast<int>(j);
            ae.mu[j + 1] = detail::arrow_root_mu(w0, ae.d, ae.g, ae.d[j], 1e-300, 0.5 * h);
        } else { // right half, anchored to d_{j+1}
            ae.anchor[j + 1] = static_cast<int>(j + 1);
            ae.mu[j + 1] = detail::arrow_root_mu(w0, ae.d, ae.g, ae.d[j + 1], -0.5 * h, -1e-300);
        }
    }
    // right flank: above d_{N-1}, anchored to it (mu > 0)
    {
        const double hi = std::max(w0, ae.d.back()) + guard;
        ae.anchor[N] = static_cast<int>(N - 1);
        ae.mu[N] = detail::arrow_root_mu(w0, ae.d, ae.g, ae.d.back(), 1e-300,
                                         hi - ae.d.back());
    }

    ae.w_head.resize(N + 1);
    for (std::size_t m = 0; m <= N; ++m) {
        double s = 1.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double dd = ae.lam_minus_d(m, i);
            s += ae.g[i] * ae.g[i] / (dd * dd);
        }
        ae.w_head[m] = 1.0 / s;
    }
    return ae;
}

struct OracleResult {
    std::vector<double> t;
    std::vector<cplx> c0;         // lab frame
    double omega0 = 0.0;
    double weight_sum = 0.0;      // sum of head weights; 1 up to fp
    std::vector<double> norm_samples;   // |c0|^2 + sum |c_j|^2 at sample times
    std::vector<double> norm_sample_t;
    std::size_t n_modes = 0;
    std::string method;
};

struct OracleOptions {
    int n_conservation_samples = 5;
    bool use_rk = false;    // cross-check path for small boxes
    double rk_tol = 1e-10;
};

// Direct evolution of the discretised continuum (emitter + all box modes of
// all l), exact via the arrow eigendecomposition.
inline OracleResult oracle_evolve(const EmitterSpec& emitter,
                                  const std::vector<BoxDiscretization>& boxes,
                                  const std::vector<double>& t_grid,
                                  const OracleOptions& opt = {}) {
    double R_box = 0.0;
    std::vector<double> d, g;
    for (const auto& b : boxes) {
        R_box = std::max(R_box, b.R_box);
        for (std::size_t j = 0; j < b.k_modes.size(); ++j) {
            d.push_back(b.k_modes[j]); // c k_j with c = 1
            g.push_back(b.g_modes[j]);
        }
    }
    if (!t_grid.empty() && t_grid.back() >= 2.0 * R_box)
        throw std::invalid_argument("oracle_evolve: t beyond the box recurrence 2 R_box");

    OracleResult out;
    out.t = t_grid;
    out.omega0 = emitter.omega0;
    out.n_modes = d.size();

    if (opt.use_rk) {
        // small-box cross-check: adaptive RK on the full state vector
        out.method = "rk";
        const std::size_t N = d.size();
        std::vector<cplx> a(N + 1, cplx(0.0, 0.0));
        a[0] = 1.0;
        double t = 0.0, h = 1e-3;
        std::size_t next = 0;
        auto rhs = [&](const std::vector<cplx>& y, std::vector<cplx>& dy) {
            cplx acc = 0.0;
            for (std::size_t j = 0; j < N; ++j) acc += g[j] * y[j + 1];
            dy[0] = cplx(0.0, -1.0) * (emitter.omega0 * y[0] + acc);
            for (std::size_t j = 0; j < N; ++j)
                dy[j + 1] = cplx(0.0, -1.0) * (d[j] * y[j + 1] + g[j] * y[0]);
        };
        std::vector<cplx> k1(N + 1), k2(N + 1), k3(N + 1), k4(N + 1), tmp(N + 1);
        auto record = [&](double tt) {
            while (next < t_grid.size() && t_grid[next] <= tt + 1e-12) {
                out.c0.push_back(a[0]);
                ++next;
            }
        };
        record(0.0);
        // classic RK4 with fixed conservative step (cross-check only)
        h = std::min(0.02 / (std::abs(d.back()) + 1.0), 0.01);
        (void)opt.rk_tol;
        const double t_end = t_grid.back();
        while (t < t_end - 1e-12) {
            double hh = std::min(h, t_end - t);
            if (next < t_grid.size()) hh = std::min(hh, std::max(t_grid[next] - t, 1e-9));
            rhs(a, k1);
            for (std::size_t i = 0; i <= N; ++i) tmp[i] = a[i] + 0.5 * hh * k1[i];
            rhs(tmp, k2);
            for (std::size_t i = 0; i <= N; ++i) tmp[i] = a[i] + 0.5 * hh * k2[i];
            rhs(tmp, k3);
            for (std::size_t i = 0; i <= N; ++i) tmp[i] = a[i] + hh * k3[i];
            rhs(tmp, k4);
            for (std::size_t i = 0; i <= N; ++i)
                a[i] += hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            t += hh;
            record(t);
        }
        return out;
    }

    out.method = "eigen";
    // modes with couplings below the floor never influence c0 above 1e-30
    // on any window (total dropped weight < N * g_floor^2)
    {
        std::vector<double> dk, gk;
        for (std::size_t j = 0; j < d.size(); ++j)
            if (g[j] > 1e-18) { dk.push_back(d[j]); gk.push_back(g[j]); }
        d.swap(dk);
        g.swap(gk);
    }
    if (d.empty()) {
        out.weight_sum = 1.0;
        out.c0.resize(t_grid.size());
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            out.c0[i] = std::exp(cplx(0.0, -emitter.omega0 * t_grid[i]));
        out.norm_samples.assign(std::max(1, opt.n_conservation_samples), 1.0);
        out.norm_sample_t.assign(std::max(1, opt.n_conservation_samples), 0.0);
        return out;
    }
    const ArrowEigen ae = arrow_eigensolve(emitter.omega0, d, g);
    const std::size_t M = ae.mu.size();
    out.weight_sum = 0.0;
    for (double w : ae.w_head) out.weight_sum += w;

    out.c0.resize(t_grid.size());
    for (std::size_t it = 0; it < t_grid.size(); ++it) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < M; ++m)
            acc += ae.w_head[m] * std::exp(cplx(0.0, -ae.lambda(m) * t_grid[it]));
        out.c0[it] = acc;
    }

    // probability conservation at sampled times: |c0|^2 + sum_j |c_j|^2
    const int S = std::max(1, opt.n_conservation_samples);
    for (int s = 0; s < S; ++s) {
        const double t = t_grid.empty() ? 0.0 : t_grid[(t_grid.size() - 1) * s / std::max(1, S - 1)];
        std::vector<cplx> phases(M);
        for (std::size_t m = 0; m < M; ++m)
            phases[m] = ae.w_head[m] * std::exp(cplx(0.0, -ae.lambda(m) * t));
        cplx c0 = 0.0;
        for (std::size_t m = 0; m < M; ++m) c0 += phases[m];
        double norm = std::norm(c0);
        for (std::size_t j = 0; j < ae.d.size(); ++j) {
            cplx cj = 0.0;
            for (std::size_t m = 0; m < M; ++m)
                cj += phases[m] * ae.g[j] / ae.lam_minus_d(m, j);
            norm += std::norm(cj);
        }
        out.norm_samples.push_back(norm);
        out.norm_sample_t.push_back(t);
    }
    return out;
}

} // namespace pmqed
