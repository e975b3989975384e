#include <doctest.h>

#include "pmqed/constants.hpp"
#include "pmqed/pole_finder.hpp"

using namespace pmqed;

namespace {
const ResonatorSpec silicon{};
const double k_anchor = 2.0 * pi / 1.72;
}

TEST_CASE("refine the (8,3) pole from a seed near the resonance") {
    const Pole p = refine_pole(silicon, 8, cplx(3.653, -0.001));
    CHECK(std::abs(p.z.real() - k_anchor) / k_anchor < 0.01);
    CHECK(p.z.imag() < 0.0);
    CHECK(p.residual < 1e-12);
}

TEST_CASE("the (5,4) pole is the broader of the anchor pair") {
    const Pole p54 = refine_pole(silicon, 5, cplx(3.664, -0.01));
    const Pole p83 = refine_pole(silicon, 8, cplx(3.668, -1e-5));
    CHECK(std::abs(p54.z.real() - k_anchor) / k_anchor < 0.01);
    CHECK(p54.gamma() > p83.gamma());
}

TEST_CASE("controlled failure far from any root") {
    CHECK_THROWS_AS(refine_pole(silicon, 8, cplx(50.0, 50.0)), std::runtime_error);
}

TEST_CASE("argument principle: no zeros in the upper half-plane") {
    CHECK(count_zeros(silicon, 8, Rect{0.1, 20.0, 0.1, 1.0}) == 0);
    CHECK(count_zeros(silicon, 8, Rect{3.0, 3.0, -1.0, -0.5}) == 0); // degenerate
}

TEST_CASE("cross-method count agreement for l = 8") {
    PoleWindow win;
    win.im_min = -3.0;
    const auto poles = enumerate_poles_l(silicon, 8, win);
    const int counted = count_zeros(silicon, 8, Rect{0.1, 20.0, -3.0, 0.05});
    CHECK(counted == static_cast<int>(poles.size()));
    for (const auto& p : poles) CHECK(p.residual < 1e-10);
}

TEST_CASE("window monotonicity: enlarging the window keeps every pole") {
    PoleWindow small;
    small.re_max = 8.0;
    small.im_min = -1.0;
    PoleWindow large;
    large.re_max = 12.0;
    large.im_min = -4.0;
    for (int l : {2, 3}) {
        const auto ps = enumerate_poles_l(silicon, l, small);
        const auto pl = enumerate_poles_l(silicon, l, large);
        for (const auto& a : ps) {
            bool found = false;
            for (const auto& b : pl)
                if (std::abs(a.z - b.z) < 1e-8) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("conjugate structure: alpha - i beta vanishes at the mirror point") {
    const Pole p = refine_pole(silicon, 5, cplx(3.664, -0.01));
    const ModeCoefficients mc = match_interface(silicon, 5, std::conj(p.z));
    const cplx g = mc.alpha - cplx(0, 1) * mc.beta;
    const cplx gp = dispersion_G_deriv(silicon, 5, std::conj(p.z));
    CHECK(std::abs(g) < 1e-10 * std::abs(gp) * std::abs(p.z));
}

TEST_CASE("pole positions independent of seed-grid density") {
    PoleWindow win;
    win.re_max = 10.0;
    win.im_min = -2.0;
    const auto a = enumerate_poles_l(silicon, 6, win, 1);
    const auto b = enumerate_poles_l(silicon, 6, win, 2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i].z - b[i].z) < 1e-9);
}

TEST_CASE("empty window yields no poles") {
    PoleWindow win;
    win.re_max = 0.5;
    win.im_min = -0.2;
    CHECK(enumerate_poles_l(silicon, 1, win).empty());
}

TEST_CASE("n labels the anchor pair as (5,4) and (8,3)") {
    PoleWindow win; // default window depth (613-pole calibration)
    win.im_min = -14.285;
    const auto p5 = enumerate_poles_l(silicon, 5, win);
    const auto p8 = enumerate_poles_l(silicon, 8, win);
    const Pole* a = nullptr;
    const Pole* b = nullptr;
    for (const auto& p : p5)
        if (std::abs(p.z.real() - k_anchor) / k_anchor < 0.01) a = &p;
    for (const auto& p : p8)
        if (std::abs(p.z.real() - k_anchor) / k_anchor < 0.01) b = &p;
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(a->n == 4);
    CHECK(b->n == 3);
}
