#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "pmqed/constants.hpp"
#include "pmqed/kernel.hpp"
#include "pmqed/oracle.hpp"

using namespace pmqed;

namespace {
const ResonatorSpec silicon{};
}

TEST_CASE("arrow eigensolver against a dense reference") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        const int N = 50;
        std::vector<double> d(N), g(N);
        const double w0 = 3.0 + u(rng);
        for (int i = 0; i < N; ++i) {
            d[i] = 6.0 * (i + u(rng)) / N;
            g[i] = std::pow(10.0, -8.0 + 7.0 * u(rng));
        }
        const ArrowEigen ae = arrow_eigensolve(w0, d, g);
        const int M = static_cast<int>(ae.d.size());
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(M + 1, M + 1);
        H(0, 0) = w0;
        for (int i = 0; i < M; ++i) {
            H(i + 1, i + 1) = ae.d[i];
            H(0, i + 1) = H(i + 1, 0) = ae.g[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        double wsum = 0.0;
        for (int m = 0; m <= M; ++m) {
            CHECK(std::abs(ae.lambda(m) - es.eigenvalues()(m)) < 1e-12);
            const double wref = es.eigenvectors()(0, m) * es.eigenvectors()(0, m);
            CHECK(std::abs(ae.w_head[m] - wref) < 1e-10);
            wsum += ae.w_head[m];
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("free-space box: spacing approaches pi/R within 1 percent") {
    ResonatorSpec fs;
    fs.refractive_index = 1.0 + 1e-9;
    EmitterSpec em;
    const double R = 120.0;
    const BoxDiscretization box = discretize_box(fs, em, 1, R, 8.0, nullptr);
    for (std::size_t i = 1; i + 1 < box.k_modes.size(); ++i) {
        if (box.k_modes[i] < 20.0 / R) continue;
        const double sp = box.k_modes[i + 1] - box.k_modes[i];
        CHECK(std::abs(sp - pi / R) < 0.01 * pi / R);
    }
}

TEST_CASE("box root count and residuals (l = 8, R = 200)") {
    EmitterSpec em;
    PoleWindow win;
    win.im_min = -14.285;
    auto pl = enumerate_poles_l(silicon, 8, win);
    const BoxDiscretization box = discretize_box(silicon, em, 8, 200.0, 20.0, &pl);
    const double expected = 20.0 * 200.0 / pi;
    CHECK(std::abs(static_cast<double>(box.k_modes.size()) - expected) < 0.02 * expected);
    for (std::size_t i = 0; i < box.k_modes.size(); i += 97) {
        // root residual measured against the local amplitude scale
        const ModeCoefficients mc = match_interface(silicon, 8, box.k_modes[i]);
        const double f = (mc.alpha * sph_j(8, box.k_modes[i] * 200.0) +
                          mc.beta * sph_y(8, box.k_modes[i] * 200.0))
                             .real();
        const double amp = std::hypot(mc.alpha.real(), mc.beta.real()) /
                           (box.k_modes[i] * 200.0);
        CHECK(std::abs(f) < 1e-10 * amp);
    }
}

TEST_CASE("pinned box mode carries the (8,3) residue weight") {
    EmitterSpec em;
    PoleWindow win;
    win.im_min = -14.285;
    auto pl = enumerate_poles_l(silicon, 8, win);
    const Pole* p83 = nullptr;
    for (const auto& p : pl)
        if (p.n == 3) p83 = &p;
    REQUIRE(p83 != nullptr);
    const BoxDiscretization box = discretize_box(silicon, em, 8, 200.0, 20.0, &pl);
    // sum of g_j^2 within +-20 gamma of the resonance vs |gbar|^2
    const double k0 = p83->z.real(), g0 = p83->gamma();
    double sum = 0.0;
    for (std::size_t j = 0; j < box.k_modes.size(); ++j)
        if (std::abs(box.k_modes[j] - k0) < 20.0 * g0) sum += box.g_modes[j] * box.g_modes[j];
    const double gbar2 = std::norm(coupling_gbar(silicon, em, *p83));
    CHECK(sum == doctest::Approx(gbar2).epsilon(0.05));
}

TEST_CASE("oracle with zero dipole stays in the initial state") {
    ResonatorSpec fs;
    fs.refractive_index = 1.0 + 1e-9;
    EmitterSpec em;
    em.dipole_debye = 0.0;
    em.omega0 = 2.0;
    const BoxDiscretization box = discretize_box(fs, em, 1, 120.0, 5.0, nullptr);
    std::vector<double> t{0.0, 10.0, 100.0};
    OracleOptions oo; // coupling floor removes every mode; pure phase remains
    const OracleResult orc = oracle_evolve(em, {box}, t, oo);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(std::abs(orc.c0[i]) - 1.0) < 1e-12);
}

TEST_CASE("eigen and rk oracle integrators agree on a small box") {
    EmitterSpec em;
    em.omega0 = 3.668004987;
    PoleWindow win;
    win.im_min = -14.285;
    win.re_max = 6.0;
    auto pl = enumerate_poles_l(silicon, 8, win);
    const BoxDiscretization box = discretize_box(silicon, em, 8, 150.0, 6.0, &pl);
    std::vector<double> t;
    for (int i = 0; i <= 40; ++i) t.push_back(60.0 * i / 40.0);
    const OracleResult a = oracle_evolve(em, {box}, t);
    OracleOptions oo;
    oo.use_rk = true;
    const OracleResult b = oracle_evolve(em, {box}, t, oo);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(a.c0[i] - b.c0[i]) < 1e-7);
}

TEST_CASE("probability conservation and R-convergence on a reduced problem") {
    EmitterSpec em;
    em.omega0 = 3.668004987;
    auto run = [&](double R, double t_max) {
        std::vector<BoxDiscretization> boxes;
        PoleWindow win;
        win.im_min = -14.285;
        win.re_max = 10.0;
        for (int l = 1; l <= 10; ++l) {
            auto pl = enumerate_poles_l(silicon, l, win);
            boxes.push_back(discretize_box(silicon, em, l, R, 10.0, &pl));
        }
        std::vector<double> t;
        for (int i = 0; i <= 80; ++i) t.push_back(t_max * i / 80.0);
        return oracle_evolve(em, boxes, t);
    };
    const OracleResult o1 = run(100.0, 150.0);
    const OracleResult o2 = run(200.0, 150.0);
    for (double nv : o1.norm_samples) CHECK(std::abs(nv - 1.0) < 1e-8);
    double worst = 0.0;
    for (std::size_t i = 0; i < o1.c0.size(); ++i)
        worst = std::max(worst, std::abs(o1.c0[i] - o2.c0[i]));
    CHECK(worst < 1e-4);
}

TEST_CASE("box recurrence echo invalidates times beyond 2 R_box") {
    EmitterSpec em;
    em.omega0 = 2.0;
    ResonatorSpec fs;
    fs.refractive_index = 1.0 + 1e-9;
    const BoxDiscretization box = discretize_box(fs, em, 1, 120.0, 5.0, nullptr);
    std::vector<double> t{0.0, 230.0};
    CHECK_THROWS_AS(oracle_evolve(em, {box}, {0.0, 500.0}), std::invalid_argument);
    CHECK_NOTHROW(oracle_evolve(em, {box}, t));
}

TEST_CASE("half-line symmetrisation bookkeeping on a sampled integrand") {
    // Int_0^K g(k) dk = 1/2 Int_{-K}^{K} [g_s + sgn(k) g_a] dk with
    // g_s/g_a the even/odd parts of the analytic continuation
    EmitterSpec em;
    auto g = [&](double k) -> cplx {
        const cplx kk(k, 0.0);
        return coupling_density_continued(silicon, em, 5, kk) *
               std::exp(cplx(0.0, -2.0 * k));
    };
    auto half = integrate([&](double k) { return g(k); }, 1e-6, 6.0, 1e-12, 1e-9, {3.66});
    auto sym = integrate(
        [&](double k) {
            const cplx gs = 0.5 * (g(k) + g(-k));
            const cplx ga = 0.5 * (g(k) - g(-k));
            return gs + (k > 0 ? 1.0 : -1.0) * ga;
        },
        -6.0, 6.0, 1e-12, 1e-9, {-3.66, 1e-9, 3.66});
    CHECK(std::abs(half.value - 0.5 * sym.value) < 1e-6 * std::abs(half.value));
}

TEST_CASE("kernel quadrature: causality before the light cone") {
    PoleWindow win;
    win.im_min = -14.285;
    win.re_max = 40.0;
    auto pl = enumerate_poles_l(silicon, 8, win);
    std::vector<Pole> inwin;
    for (auto& p : pl)
        if (p.z.real() < 38.0) inwin.push_back(p);
    const double a = silicon.radius_a;
    // r - a = 2: residue side exactly zero for c tau < 2
    CHECK(residue_Il(silicon, inwin, a + 2.0, a, 1.0) == cplx(0.0, 0.0));
    KernelQuadOptions ko;
    ko.k_max = 38.0;
    ko.add_tail_estimate = false;
    const auto inside = quadrature_Il(silicon, 8, a + 2.0, a, 1.0, inwin, ko);
    const auto peak = quadrature_Il(silicon, 8, a + 2.0, a, 2.5, inwin, ko);
    CHECK(std::abs(inside.value) < 1e-3 * std::abs(peak.value));
}
