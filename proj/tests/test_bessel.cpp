#include <doctest.h>

#include <complex>
#include <random>

#include "pmqed/complex_bessel.hpp"

using namespace pmqed;
typedef std::complex<long double> lcplx;

namespace {

// independent reference: long-double Maclaurin series (converges for any z,
// entirely different code path from the production Miller/upward evaluators)
lcplx jl_reference(int l, lcplx z) {
    long double dfact = 1.0L;
    for (int m = 3; m <= 2 * l + 1; m += 2) dfact *= m;
    lcplx zl = 1.0L;
    for (int m = 0; m < l; ++m) zl *= z;
    const lcplx x2 = -0.5L * z * z;
    lcplx term = 1.0L, sum = 1.0L;
    for (int m = 1; m < 500; ++m) {
        term *= x2 / (static_cast<long double>(m) * (2.0L * l + 1.0L + 2.0L * m));
        sum += term;
        if (std::abs(term) < 1e-25L * std::abs(sum)) break;
    }
    return zl / dfact * sum;
}

} // namespace

TEST_CASE("spherical bessel closed forms") {
    // j0(pi) = sin(pi)/pi = 0
    CHECK(std::abs(sph_j(0, cplx(3.14159265358979323846, 0.0))) < 1e-15);
    // h1_0(i) = -i e^{i i} / i = -e^{-1}
    const cplx h = sph_h1(0, cplx(0.0, 1.0));
    CHECK(h.real() == doctest::Approx(-std::exp(-1.0)).epsilon(1e-14));
    CHECK(std::abs(h.imag()) < 1e-15);
}

TEST_CASE("j_8 at 3.65 against the independent high-precision series") {
    const lcplx ref = jl_reference(8, lcplx(3.65L, 0.0L));
    const cplx v = sph_j(8, cplx(3.65, 0.0));
    CHECK(std::abs(v.real() - static_cast<double>(ref.real())) <
          1e-12 * std::abs(static_cast<double>(ref.real())));
}

TEST_CASE("accuracy across the (l, z) domain against the reference") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const int l = static_cast<int>(u(rng) * 40);
        // the long-double series reference is itself exact only while its own
        // term cancellation stays below ~1e19, i.e. |z| <~ 35
        const double mag = std::pow(10.0, -3.0 + 4.5 * u(rng));
        const double ph = 2.0 * 3.14159265358979 * u(rng);
        const cplx z(mag * std::cos(ph), mag * std::sin(ph));
        if (std::abs(z) > 34.0) continue;
        const lcplx ref = jl_reference(l, lcplx(z.real(), z.imag()));
        const double scale = std::abs(static_cast<cplx>(
            cplx(static_cast<double>(ref.real()), static_cast<double>(ref.imag()))));
        if (scale < 1e-280) continue;
        const cplx v = sph_j(l, z);
        const double err = std::abs(v - cplx(static_cast<double>(ref.real()),
                                             static_cast<double>(ref.imag())));
        CHECK(err < 1e-12 * scale);
    }
}

TEST_CASE("wronskian j y' - j' y = 1/z^2 on random samples") {
    // beyond |Im z| ~ 5 both j and y are e^{|Im z|}-dominated and the
    // identity is below the fp floor of the pair; there the equivalent
    // cross-product identity of the scaled Hankel functions takes over
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const int l = static_cast<int>(u(rng) * 41);
        const double mag = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const double ph = 2.0 * 3.14159265358979 * u(rng);
        cplx z(mag * std::cos(ph), mag * std::sin(ph));
        if (std::abs(z.imag()) > 5.0) z = cplx(z.real(), z.imag() > 0 ? 5.0 : -5.0);
        const cplx j = sph_j(l, z), y = sph_y(l, z);
        const cplx jp = sph_bessel_deriv(BesselKind::j, l, z);
        const cplx yp = sph_bessel_deriv(BesselKind::y, l, z);
        worst = std::max(worst, std::abs((j * yp - jp * y) * z * z - 1.0));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("scaled hankel cross identity deep in the lower half-plane") {
    // h1_l h2_{l-1} - h1_{l-1} h2_l = 2i/z^2, evaluated from the scaled pair
    // (the exponentials cancel), valid at any depth
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto hs2 = [](int l, cplx z) { return std::conj(sph_h1_scaled(l, std::conj(z))); };
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const int l = 1 + static_cast<int>(u(rng) * 39);
        const cplx z(0.5 + 80.0 * u(rng), -(2.0 + 120.0 * u(rng)));
        const cplx lhs = sph_h1_scaled(l, z) * hs2(l - 1, z) -
                         sph_h1_scaled(l - 1, z) * hs2(l, z);
        worst = std::max(worst, std::abs(lhs + cplx(0.0, 2.0) / (z * z)) * std::norm(z) / 2.0);
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("recurrence f_{l-1} + f_{l+1} = (2l+1)/z f_l for each kind") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        const int l = 1 + static_cast<int>(u(rng) * 38);
        const double mag = std::pow(10.0, -2.0 + 4.0 * u(rng));
        const double ph = 2.0 * 3.14159265358979 * u(rng);
        const cplx z(mag * std::cos(ph), mag * std::sin(ph));
        for (BesselKind kind : {BesselKind::j, BesselKind::y}) {
            const cplx fm = sph_bessel(kind, l - 1, z);
            const cplx f = sph_bessel(kind, l, z);
            const cplx fp = sph_bessel(kind, l + 1, z);
            const double scale = std::max({std::abs(fm), std::abs(f), std::abs(fp)});
            CHECK(std::abs(fm + fp - (2.0 * l + 1.0) / z * f) < 1e-10 * scale);
        }
    }
}

TEST_CASE("hankel combinations match j +- i y identically") {
    const cplx z(2.2, -0.7);
    for (int l : {0, 3, 11}) {
        const cplx j = sph_j(l, z), y = sph_y(l, z);
        CHECK(std::abs(sph_h1(l, z) - (j + cplx(0, 1) * y)) <
              1e-14 * std::abs(sph_h1(l, z)));
        CHECK(std::abs(sph_h2(l, z) - (j - cplx(0, 1) * y)) <
              1e-14 * std::abs(sph_h2(l, z)));
    }
}

TEST_CASE("scaled hankel equals h1 e^{-iz} where both are representable") {
    for (const cplx z : {cplx(4.0, -2.0), cplx(1.5, -9.0), cplx(20.0, -0.01)}) {
        for (int l : {1, 6, 15}) {
            const cplx a = sph_h1_scaled(l, z);
            const cplx b = sph_h1(l, z) * std::exp(cplx(0, -1) * z);
            CHECK(std::abs(a - b) < 1e-11 * std::abs(b));
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(sph_y(2, cplx(0.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(sph_h1(0, cplx(0.0, 0.0)), std::domain_error);
    CHECK(sph_j(0, cplx(0.0, 0.0)) == cplx(1.0, 0.0));
    CHECK_THROWS_AS(sph_bessel(BesselKind::j, -1, cplx(1.0, 0.0)), std::invalid_argument);
    // overflow is flagged, not saturated
    CHECK_THROWS_AS(sph_h1(3, cplx(0.1, -800.0)), std::overflow_error);
}

TEST_CASE("riccati pair consistency") {
    const cplx z(3.1, -0.4);
    for (int l : {1, 5, 9}) {
        const Riccati rc = riccati(BesselKind::j, l, z);
        CHECK(std::abs(rc.value - z * sph_j(l, z)) < 1e-13 * std::abs(rc.value));
        // S'(z) = f + z f'
        const cplx alt = sph_j(l, z) + z * sph_bessel_deriv(BesselKind::j, l, z);
        CHECK(std::abs(rc.deriv - alt) < 1e-11 * std::max(1.0, std::abs(alt)));
    }
}
