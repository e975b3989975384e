#include <doctest.h>

#include "pmqed/dynamics.hpp"

using namespace pmqed;

namespace {
const ResonatorSpec silicon{};

struct SmallSystem {
    PoleSet poles;
    PseudomodeSet pm;
};

// hand-built pseudomode set for closed-form checks
SmallSystem make_system(const std::vector<cplx>& zs, const std::vector<cplx>& gs) {
    SmallSystem s;
    s.poles.resonator = silicon;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        Pole p;
        p.l = 1;
        p.n = static_cast<int>(i) + 1;
        p.z = zs[i];
        s.poles.poles.push_back(p);
    }
    s.pm.resonator = silicon;
    s.pm.poles = s.poles;
    s.pm.gbar = gs;
    s.pm.prefactor.assign(zs.size(), cplx(1.0, 0.0));
    s.pm.w_emit.assign(zs.size(), cplx(1.0, 0.0));
    return s;
}
} // namespace

TEST_CASE("no pseudomodes: trivial phase evolution") {
    SmallSystem s = make_system({}, {});
    EffectiveGenerator gen = assemble_generator(s.pm, 2.5);
    std::vector<double> t{0.0, 1.0, 5.0, 20.0};
    Trajectory tr = evolve(gen, t);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(std::abs(std::abs(tr.c0[i]) - 1.0) < 1e-14);
        CHECK(std::abs(tr.c0[i] - std::exp(cplx(0.0, -2.5 * t[i]))) < 1e-12);
    }
}

TEST_CASE("single lossless mode: textbook vacuum Rabi splitting") {
    const double w0 = 2.0, wc = 2.3, g = 0.05;
    SmallSystem s = make_system({cplx(wc, 0.0)}, {cplx(g, 0.0)});
    EffectiveGenerator gen = assemble_generator(s.pm, w0);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen.M);
    const double mean = 0.5 * (w0 + wc);
    const double split = std::sqrt(0.25 * (w0 - wc) * (w0 - wc) + g * g);
    std::vector<double> lam{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
    std::sort(lam.begin(), lam.end());
    CHECK(lam[0] == doctest::Approx(mean - split).epsilon(1e-12));
    CHECK(lam[1] == doctest::Approx(mean + split).epsilon(1e-12));
}

TEST_CASE("d-scaling is exact on the lossless two-level reduction") {
    // gamma = 0 resonant mode: doubling g halves the |c0|^2 period exactly
    const double w0 = 3.0;
    SmallSystem s1 = make_system({cplx(w0, 0.0)}, {cplx(1e-3, 0.0)});
    SmallSystem s2 = make_system({cplx(w0, 0.0)}, {cplx(2e-3, 0.0)});
    auto period = [&](SmallSystem& s) {
        EffectiveGenerator gen = assemble_generator(s.pm, w0);
        std::vector<double> t;
        for (int i = 0; i <= 40000; ++i) t.push_back(4000.0 * i / 40000.0);
        Trajectory tr = evolve(gen, t);
        // first local minimum of |c0|^2 = half period of the population
        for (std::size_t i = 1; i + 1 < t.size(); ++i) {
            const double p0 = std::norm(tr.c0[i - 1]);
            const double p1 = std::norm(tr.c0[i]);
            const double p2 = std::norm(tr.c0[i + 1]);
            if (p1 < 0.5 && p1 < p0 && p1 <= p2) {
                const double d = 0.5 * (p0 - p2) / (p0 - 2 * p1 + p2 + 1e-300);
                return 2.0 * (t[i] + d * (t[i + 1] - t[i]));
            }
        }
        return 0.0;
    };
    CHECK(period(s1) == doctest::Approx(2.0 * period(s2)).epsilon(1e-3));
}

TEST_CASE("lamb shift closed forms") {
    const double w0 = 2.0;
    SmallSystem s = make_system({cplx(w0, -0.01)}, {cplx(1e-3, 0.0)});
    // single off-resonant pole at omega0: pure decay -i g^2/gamma
    const cplx dw = lamb_shift(s.pm, w0, {});
    CHECK(dw.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dw.imag() == doctest::Approx(-1e-6 / 0.01).epsilon(1e-9));
    // zero dipole
    SmallSystem s0 = make_system({cplx(2.5, -0.01)}, {cplx(0.0, 0.0)});
    CHECK(std::abs(lamb_shift(s0.pm, w0, {})) == 0.0);
}

TEST_CASE("two_mode_approx with every mode kept equals evolve exactly") {
    SmallSystem s = make_system({cplx(2.1, -0.02), cplx(2.4, -0.005)},
                                {cplx(2e-3, 1e-4), cplx(1e-3, 0.0)});
    const double w0 = 2.2;
    std::vector<double> t;
    for (int i = 0; i <= 500; ++i) t.push_back(2000.0 * i / 500.0);
    EffectiveGenerator gen = assemble_generator(s.pm, w0);
    Trajectory full = evolve(gen, t);
    Trajectory tm = two_mode_approx(s.pm, w0, {0, 1}, t);
    for (std::size_t i = 0; i < t.size(); ++i)
        CHECK(std::abs(full.c0[i] - tm.c0[i]) < 1e-12);
}

TEST_CASE("generator spectrum is stable under pole reordering") {
    SmallSystem s = make_system({cplx(2.1, -0.02), cplx(2.4, -0.005), cplx(2.6, -0.1)},
                                {cplx(2e-3, 1e-4), cplx(1e-3, 0.0), cplx(3e-3, -2e-4)});
    SmallSystem r = make_system({cplx(2.6, -0.1), cplx(2.1, -0.02), cplx(2.4, -0.005)},
                                {cplx(3e-3, -2e-4), cplx(2e-3, 1e-4), cplx(1e-3, 0.0)});
    auto spectrum = [&](SmallSystem& q) {
        EffectiveGenerator gen = assemble_generator(q.pm, 2.2);
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(gen.M, false);
        std::vector<cplx> lam;
        for (int i = 0; i < gen.dim(); ++i) lam.push_back(es.eigenvalues()(i));
        std::sort(lam.begin(), lam.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
        return lam;
    };
    const auto a = spectrum(s);
    const auto b = spectrum(r);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("rk fallback agrees with the eigen path") {
    SmallSystem s = make_system({cplx(2.1, -0.02), cplx(2.4, -0.005)},
                                {cplx(2e-3, 1e-4), cplx(1e-3, 0.0)});
    EffectiveGenerator gen = assemble_generator(s.pm, 2.2);
    std::vector<double> t;
    for (int i = 0; i <= 100; ++i) t.push_back(800.0 * i / 100.0);
    Trajectory te = evolve(gen, t);
    EvolveOptions opt;
    opt.force_rk = true;
    opt.rk_tol = 1e-12;
    Trajectory tr = evolve(gen, t, opt);
    CHECK(tr.method == "rk");
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(std::abs(te.c0[i] - tr.c0[i]) < 1e-6);
}

TEST_CASE("hybrid time grid is sorted, deduplicated, spans the range") {
    const auto t = hybrid_time_grid(1e-2, 10.0, 1000.0, 30, 200);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == doctest::Approx(1000.0));
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
}

TEST_CASE("classification label errors on a too-short window") {
    SmallSystem s = make_system({cplx(2.0, -1e-4)}, {cplx(1e-3, 0.0)});
    EffectiveGenerator gen = assemble_generator(s.pm, 2.0);
    std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    Trajectory tr = evolve(gen, t);
    CHECK_THROWS_AS(classify_markovianity(tr, s.pm), std::runtime_error);
}
