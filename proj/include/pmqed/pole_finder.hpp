// Enumeration of the complex natural-mode poles z_ln: fourth-quadrant roots of
// alpha_l + i beta_l, with an argument-principle completeness certificate.
//
// Seeding combines three sources per l:
//   - paired sign changes of alpha(k) and beta(k) on a real-axis scan (a
//     near-axis pole forces both to cross zero within ~gamma of each other,
//     so arbitrarily narrow resonances are caught by a coarse grid),
//   - local maxima of 1 / IM_hat(k) pushed into the lower half-plane,
//   - a graded uniform grid over the search window.
// All seeds are polished by a damped Newton iteration on G = alpha + i beta,
// then deduplicated, sorted by Re z and indexed n = 1, 2, ... per l. The
// argument principle is evaluated on the window rectangle and on bisected
// sub-rectangles until every count matches the refined list.

#pragma once

#include <algorithm>
#include <complex>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmqed/constants.hpp"
#include "pmqed/mie.hpp"

namespace pmqed {

struct Pole {
    int l = 0;
    int n = 0;       // radial index, 1-based in increasing Re z within fixed l
    cplx z;          // rad/um, fourth quadrant
    double residual = 0.0; // |G| / (|G'| |z|) at z

    double omega() const { return z.real(); }
    double gamma() const { return -z.imag(); }
};

struct PoleWindow {
    int l_max = 30;
    double re_min = 0.1;
    double re_max = 20.0;
    double im_min = -10.0;
    double im_max = 0.05; // slightly positive so near-axis poles are interior
};

struct PoleSet {
    ResonatorSpec resonator;
    PoleWindow window;
    std::vector<Pole> poles; // sorted by (l, n)

    const Pole* find(int l, int n) const {
        for (const auto& p : poles)
            if (p.l == l && p.n == n) return &p;
        return nullptr;
    }
    // Pole of given l closest to a real-axis anchor wavenumber.
    const Pole* nearest(int l, double k_anchor) const {
        const Pole* best = nullptr;
        double d = 1e300;
        for (const auto& p : poles) {
            if (p.l != l) continue;
            const double dd = std::abs(p.z.real() - k_anchor);
            if (dd < d) { d = dd; best = &p; }
        }
        return best;
    }
};

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
    bool empty() const { return re_lo >= re_hi || im_lo >= im_hi; }
};

namespace detail {

// Dispersion evaluation for root work: the raw G near the axis, the scaled
// W-form deep below it (same zeros, no cancelling exponentials).
inline cplx dispersion_root_fn(const ResonatorSpec& spec, int l, cplx z) {
    return z.imag() < deep_switch_im(spec) ? dispersion_W(spec, l, z)
                                           : dispersion_G(spec, l, z);
}

inline double scaled_residual(const ResonatorSpec& spec, int l, cplx z) {
    const bool deep = z.imag() < deep_switch_im(spec);
    const cplx g = deep ? dispersion_W(spec, l, z) : dispersion_G(spec, l, z);
    const cplx gp = deep ? dispersion_W_deriv(spec, l, z) : dispersion_G_deriv(spec, l, z);
    const double denom = std::abs(gp) * std::max(std::abs(z), 1e-30);
    return denom > 0.0 ? std::abs(g) / denom : std::abs(g);
}

// Winding number of the root function around a small circle; certifies a zero
// at the centre when the direct residual is buried in the noise of G.
inline int winding_circle(const ResonatorSpec& spec, int l, cplx center, double radius) {
    const int n = 96;
    double winding = 0.0;
    cplx prev = dispersion_root_fn(spec, l, center + cplx(radius, 0.0));
    for (int i = 1; i <= n; ++i) {
        const double th = 2.0 * pi * i / n;
        const cplx g =
            dispersion_root_fn(spec, l, center + radius * cplx(std::cos(th), std::sin(th)));
        winding += std::arg(g / prev);
        prev = g;
    }
    return static_cast<int>(std::lround(winding / (2.0 * pi)));
}

} // namespace detail

// Winding number of the dispersion function around the rectangle boundary, by
// adaptive sampling with phase steps kept below pi/2. Rectangles spanning the
// deep-evaluation switch line are split there (winding counts are additive),
// so each boundary walk uses one analytic function.
inline int count_zeros(const ResonatorSpec& spec, int l, const Rect& rect) {
    if (rect.empty()) return 0;
    const double sw = deep_switch_im(spec);
    if (rect.im_lo < sw && rect.im_hi > sw) {
        Rect top = rect, bottom = rect;
        bottom.im_hi = sw;
        top.im_lo = sw;
        return count_zeros(spec, l, bottom) + count_zeros(spec, l, top);
    }
    const bool deep = rect.im_hi <= sw;
    auto eval = [&](cplx z) {
        return deep ? dispersion_W(spec, l, z) : dispersion_G(spec, l, z);
    };
    struct Node { cplx z; cplx g; };
    const cplx corners[4] = {{rect.re_lo, rect.im_lo},
                             {rect.re_hi, rect.im_lo},
                             {rect.re_hi, rect.im_hi},
                             {rect.re_lo, rect.im_hi}};
    double winding = 0.0;
    // Away from zeros the phase rate of the dispersion function is bounded by
    // ~(N+1) a per unit of z; the base sampling must resolve that, since
    // aliased jumps > pi look small and would defeat the adaptive refinement.
    const double phase_rate = (spec.refractive_index + 1.0) * spec.radius_a;
    for (int e = 0; e < 4; ++e) {
        const cplx za = corners[e];
        const cplx zb = corners[(e + 1) % 4];
        // adaptive subdivision stack over the edge
        std::vector<std::pair<Node, Node>> stack;
        const int base =
            std::max(24, static_cast<int>(std::abs(zb - za) * 6.0 * phase_rate) + 1);
        std::vector<Node> pts(base + 1);
        for (int i = 0; i <= base; ++i) {
            const cplx z = za + (zb - za) * (static_cast<double>(i) / base);
            pts[i] = {z, eval(z)};
        }
        for (int i = 0; i < base; ++i) stack.push_back({pts[i], pts[i + 1]});
        while (!stack.empty()) {
            auto [n1, n2] = stack.back();
            stack.pop_back();
            const double dphi = std::arg(n2.g / n1.g);
            if (std::abs(dphi) < 1.4) { // < pi/2 with margin
                winding += dphi;
                continue;
            }
            if (std::abs(n2.z - n1.z) < 1e-12 * (1.0 + std::abs(n1.z)))
                throw std::runtime_error("count_zeros: boundary zero suspected near z = (" +
                                         std::to_string(n1.z.real()) + ", " +
                                         std::to_string(n1.z.imag()) + ")");
            const cplx zm = 0.5 * (n1.z + n2.z);
            const Node nm{zm, eval(zm)};
            stack.push_back({n1, nm});
            stack.push_back({nm, n2});
        }
    }
    const double w = winding / (2.0 * pi);
    const long nearest = std::lround(w);
    if (std::abs(w - static_cast<double>(nearest)) > 0.2)
        throw std::runtime_error("count_zeros: winding did not converge to an integer");
    return static_cast<int>(nearest);
}

// Newton refinement from a seed; throws on non-convergence or when the root
// leaves the fourth quadrant. Convergence accepts either the target scaled
// residual or a Newton step at the fp resolution of the root together with a
// residual at the cancellation noise floor of G.
inline Pole refine_pole(const ResonatorSpec& spec, int l, cplx seed) {
    cplx z = seed;
    cplx best_z = seed;
    double best_scaled = 1e300;
    double last_step = 1e300;
    int stalled = 0;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
        const bool deep = z.imag() < deep_switch_im(spec);
        const cplx g = deep ? dispersion_W(spec, l, z) : dispersion_G(spec, l, z);
        const cplx gp = deep ? dispersion_W_deriv(spec, l, z) : dispersion_G_deriv(spec, l, z);
        if (std::abs(gp) == 0.0) break;
        const double denom = std::abs(gp) * std::max(std::abs(z), 1e-30);
        const double scaled = std::abs(g) / denom;
        if (scaled < 0.5 * best_scaled) {
            best_scaled = scaled;
            best_z = z;
            stalled = 0;
        } else if (++stalled >= 6) {
            break; // residual no longer improving: at the fp noise floor of G
        }
        if (scaled < 1e-12) {
            converged = true;
            best_scaled = scaled;
            best_z = z;
            break;
        }
        cplx step = g / gp;
        const double max_step = 0.5 * std::max(1.0, std::abs(z));
        if (std::abs(step) > max_step) step *= max_step / std::abs(step);
        z -= step;
        last_step = std::abs(step);
        if (!(std::isfinite(z.real()) && std::isfinite(z.imag()))) break;
    }
    if (!converged && best_scaled < 1e-6) {
        // Residual is noise-limited; certify a genuine zero by the winding of
        // G around a circle comfortably above the noise.
        const double radius =
            std::min(0.05, std::max({64.0 * last_step, 1e-8 * std::abs(best_z), 1e-10}));
        if (detail::winding_circle(spec, l, best_z, radius) == 1) {
            converged = true;
            z = best_z;
        }
    }
    if (!converged)
        throw std::runtime_error("refine_pole: no convergence in 100 iterations (l=" +
                                 std::to_string(l) + ")");
    if (!(z.real() > 0.0) || z.imag() > 1e-12 * std::abs(z))
        throw std::runtime_error("refine_pole: converged outside fourth quadrant");
    // Radiative widths below double-precision resolution show up as |Im z|
    // smaller than the fp noise floor; clamp to a tiny negative value.
    if (z.imag() > -1e-15 * std::abs(z)) z = {z.real(), -1e-15 * std::abs(z)};
    Pole p;
    p.l = l;
    p.z = z;
    p.residual = detail::scaled_residual(spec, l, z);
    return p;
}

namespace detail {

// Find zeros of a real-valued function on a grid by sign change + bisection.
template <typename F>
inline std::vector<double> real_zeros(F&& f, double lo, double hi, int n_grid) {
    std::vector<double> out;
    double xp = lo, fp = f(lo);
    for (int i = 1; i <= n_grid; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / n_grid;
        const double fx = f(x);
        if (fp == 0.0) out.push_back(xp);
        else if (fp * fx < 0.0) {
            double a = xp, b = x, fa = fp;
            for (int it = 0; it < 80; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fa * fm <= 0.0) b = m;
                else { a = m; fa = fm; }
                if (b - a < 1e-14 * std::max(1.0, std::abs(a))) break;
            }
            out.push_back(0.5 * (a + b));
        }
        xp = x;
        fp = fx;
    }
    return out;
}

inline void dedupe_and_sort(std::vector<Pole>& poles) {
    std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) {
        return a.z.real() < b.z.real();
    });
    std::vector<Pole> out;
    for (const auto& p : poles) {
        bool dup = false;
        for (auto it = out.rbegin(); it != out.rend(); ++it) {
            // Position uncertainty of a noise-limited root is ~ residual * |z|.
            const double tol = std::max(
                1e-8, 16.0 * std::abs(p.z) * std::max(p.residual, it->residual));
            if (p.z.real() - it->z.real() > std::max(1e-7, tol)) break;
            if (std::abs(p.z - it->z) < tol) {
                if (p.residual < it->residual) *it = p; // keep the sharper one
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(p);
    }
    poles.swap(out);
}

inline bool in_window(const Pole& p, const PoleWindow& w) {
    return p.z.real() > w.re_min && p.z.real() < w.re_max && p.z.imag() > w.im_min &&
           p.z.imag() < w.im_max;
}

// Seed Newton from a grid inside the rectangle, collect converged in-window poles.
inline void harvest_rect(const ResonatorSpec& spec, int l, const Rect& r,
                         const PoleWindow& win, int nx, int ny, std::vector<Pole>& into) {
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const cplx seed(r.re_lo + (r.re_hi - r.re_lo) * (i + 0.5) / nx,
                            r.im_lo + (r.im_hi - r.im_lo) * (j + 0.5) / ny);
            try {
                Pole p = refine_pole(spec, l, seed);
                if (in_window(p, win)) into.push_back(p);
            } catch (const std::runtime_error&) {
                // seed outside any basin: expected, skip
            }
        }
    }
    dedupe_and_sort(into);
}

} // namespace detail

// All fourth-quadrant poles of a single l inside the window, certificate included.
inline std::vector<Pole> enumerate_poles_l(const ResonatorSpec& spec, int l,
                                           const PoleWindow& win,
                                           int grid_density = 1) {
    std::vector<Pole> found;
    auto try_seed = [&](cplx seed) {
        try {
            Pole p = refine_pole(spec, l, seed);
            if (detail::in_window(p, win)) found.push_back(p);
        } catch (const std::runtime_error&) {
        }
    };

    // 1) paired real-axis crossings of alpha and beta
    const int n_scan = 2400 * grid_density;
    auto alpha_f = [&](double k) { return match_interface(spec, l, k).alpha.real(); };
    auto beta_f = [&](double k) { return match_interface(spec, l, k).beta.real(); };
    const auto za = detail::real_zeros(alpha_f, win.re_min, win.re_max, n_scan);
    const auto zb = detail::real_zeros(beta_f, win.re_min, win.re_max, n_scan);
    for (const double ka : za) {
        double nearest = 1e300;
        for (const double kb : zb) nearest = std::min(nearest, std::abs(ka - kb));
        if (nearest < 0.25) {
            const double depth = std::max(0.5 * nearest, 1e-9);
            try_seed(cplx(ka, -depth));
        }
    }

    // 2) graded complex grid, geometric in depth down to the window floor
    std::vector<double> im_levels;
    for (double im = -0.04; im > win.im_min; im *= 1.55) im_levels.push_back(im);
    const int n_re = static_cast<int>((win.re_max - win.re_min) / 0.5) * grid_density + 1;
    for (double im : im_levels) {
        for (int i = 0; i <= n_re; ++i)
            try_seed(cplx(win.re_min + (win.re_max - win.re_min) * i / n_re, im));
    }

    detail::dedupe_and_sort(found);

    // 3) argument-principle certificate with bisection recovery
    struct Job { Rect r; int depth; };
    std::vector<Job> jobs{{Rect{win.re_min, win.re_max, win.im_min, win.im_max}, 0}};
    while (!jobs.empty()) {
        const Job job = jobs.back();
        jobs.pop_back();
        const int expected = count_zeros(spec, l, job.r);
        int have = 0;
        for (const auto& p : found)
            if (p.z.real() > job.r.re_lo && p.z.real() < job.r.re_hi &&
                p.z.imag() > job.r.im_lo && p.z.imag() < job.r.im_hi)
                ++have;
        if (expected == have) continue;
        if (expected < have)
            throw std::runtime_error("enumerate_poles: duplicate roots in certificate rect (l=" +
                                     std::to_string(l) + ")");
        if (job.depth >= 12)
            throw std::runtime_error(
                "enumerate_poles: completeness certificate failed in rect Re [" +
                std::to_string(job.r.re_lo) + "," + std::to_string(job.r.re_hi) + "] Im [" +
                std::to_string(job.r.im_lo) + "," + std::to_string(job.r.im_hi) + "] (l=" +
                std::to_string(l) + ")");
        // seed harder inside this rectangle, then bisect along the longer side
        detail::harvest_rect(spec, l, job.r, win, 14, 10, found);
        int have2 = 0;
        for (const auto& p : found)
            if (p.z.real() > job.r.re_lo && p.z.real() < job.r.re_hi &&
                p.z.imag() > job.r.im_lo && p.z.imag() < job.r.im_hi)
                ++have2;
        if (expected == have2) continue;
        Rect r1 = job.r, r2 = job.r;
        if (job.r.re_hi - job.r.re_lo >= job.r.im_hi - job.r.im_lo) {
            const double mid = 0.5 * (job.r.re_lo + job.r.re_hi);
            r1.re_hi = mid;
            r2.re_lo = mid;
        } else {
            const double mid = 0.5 * (job.r.im_lo + job.r.im_hi);
            r1.im_hi = mid;
            r2.im_lo = mid;
        }
        jobs.push_back({r1, job.depth + 1});
        jobs.push_back({r2, job.depth + 1});
    }

    for (std::size_t i = 0; i < found.size(); ++i) found[i].n = static_cast<int>(i) + 1;
    return found;
}

inline PoleSet enumerate_poles(const ResonatorSpec& spec, int l_max, double re_max,
                               double im_min) {
    if (l_max < 1 || !(re_max > 0.0) || !(im_min < 0.0))
        throw std::invalid_argument("enumerate_poles: empty window");
    PoleSet set;
    set.resonator = spec;
    set.window = PoleWindow{l_max, 0.1, re_max, im_min, 0.05};
    for (int l = 1; l <= l_max; ++l) {
        const auto pl = enumerate_poles_l(spec, l, set.window);
        set.poles.insert(set.poles.end(), pl.begin(), pl.end());
    }
    return set;
}

} // namespace pmqed
