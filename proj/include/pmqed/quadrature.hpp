// Adaptive Gauss-Kronrod (15-point) quadrature for complex-valued integrands,
// with caller-supplied breakpoints for known sharp features.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace pmqed {

using cplx = std::complex<double>;

namespace gk {

// 15-point Kronrod nodes/weights on [-1,1] with embedded 7-point Gauss.
inline constexpr double xk[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
    -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
    0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double wk[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double wg[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
    0.381830050505119, 0.279705391489277, 0.129484966168870};

} // namespace gk

struct QuadResult {
    cplx value{0.0, 0.0};
    double error = 0.0;   // accumulated local error estimate
    long evaluations = 0;
};

// Adaptive GK15 on [a, b] with optional interior breakpoints.
inline QuadResult integrate(const std::function<cplx(double)>& f, double a, double b,
                            double abs_tol, double rel_tol,
                            const std::vector<double>& breakpoints = {},
                            int max_panels = 20000) {
    struct Panel {
        double a, b;
        cplx val;
        double err;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    auto eval_panel = [&](double pa, double pb, long& n) {
        const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
        cplx sk = 0.0, sg = 0.0;
        for (int i = 0; i < 15; ++i) {
            const cplx fv = f(c + h * gk::xk[i]);
            sk += gk::wk[i] * fv;
            if (i % 2 == 1) sg += gk::wg[i / 2] * fv;
        }
        n += 15;
        return Panel{pa, pb, sk * h, std::abs(sk - sg) * std::abs(h)};
    };

    std::vector<double> edges{a, b};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    QuadResult res;
    std::priority_queue<Panel> heap;
    cplx value = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        Panel p = eval_panel(edges[i], edges[i + 1], res.evaluations);
        value += p.val;
        error += p.err;
        heap.push(p);
    }

    for (int iter = 0; iter < max_panels && !heap.empty(); ++iter) {
        if (error <= abs_tol + rel_tol * std::abs(value)) break;
        const Panel p = heap.top();
        heap.pop();
        if (p.b - p.a < 1e-15 * std::max(1.0, std::abs(p.a))) break; // fp-limited panel
        const double mid = 0.5 * (p.a + p.b);
        Panel p1 = eval_panel(p.a, mid, res.evaluations);
        Panel p2 = eval_panel(mid, p.b, res.evaluations);
        value += p1.val + p2.val - p.val;
        error += p1.err + p2.err - p.err;
        heap.push(p1);
        heap.push(p2);
    }
    res.value = value;
    res.error = error;
    return res;
}

// Gauss-Legendre nodes/weights on [a, b] (Newton on Legendre polynomials).
inline void gauss_legendre(int n, double a, double b, std::vector<double>& x,
                           std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (t * p0 - p1) / (t * t - 1.0);
            const double dt = p0 / pp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        x[i] = 0.5 * (a + b) - 0.5 * (b - a) * t;
        x[n - 1 - i] = 0.5 * (a + b) + 0.5 * (b - a) * t;
        w[i] = (b - a) / ((1.0 - t * t) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

} // namespace pmqed
