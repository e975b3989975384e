// TM (electric-type) radial layer for a dielectric sphere in vacuum:
// interface matching coefficients, piecewise radial functions, reduced mode
// norm and scattering cross-section.
//
// Matching convention. With Riccati functions psi = x j_l(x), phi = x y_l(x)
// and m = N, x = z a, the two matched tangential quantities are
//     alpha psi'(x) + beta phi'(x) = eta psi'(m x)     (tangential E)
//     alpha psi(x)  + beta phi(x)  = eta m psi(m x)    (radial D / tangential H)
// with the gauge eta = 1, which makes alpha and beta real for real z. Zeros of
// alpha + i beta are then exactly the TM natural-mode poles: alpha + i beta =
// -i eta [m psi(mx) xi'(x) - psi'(mx) xi(x)], xi = x h1_l(x).

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "pmqed/complex_bessel.hpp"

namespace pmqed {

struct ResonatorSpec {
    double radius_a = 1.0;          // um
    double refractive_index = 3.446; // N, dimensionless
    double permittivity_outside = 1.0;

    double permittivity_inside() const { return refractive_index * refractive_index; }
    double eps_at(double r) const {
        return r < radius_a ? permittivity_inside() : permittivity_outside;
    }
    void validate() const {
        if (!(radius_a > 0.0)) throw std::invalid_argument("ResonatorSpec: radius_a must be > 0");
        if (!(refractive_index > 1.0))
            throw std::invalid_argument("ResonatorSpec: refractive_index must be > 1");
        if (permittivity_outside != 1.0)
            throw std::invalid_argument("ResonatorSpec: only vacuum background is supported");
    }
};

struct ModeCoefficients {
    int l = 0;
    cplx z;       // wavenumber argument (may be complex)
    cplx alpha;
    cplx beta;
    cplx eta;     // fixed to 1 by the gauge
};

// Interface matching for the TM mode of order l at (possibly complex) wavenumber z.
inline ModeCoefficients match_interface(const ResonatorSpec& spec, int l, cplx z) {
    if (l < 1) throw std::invalid_argument("match_interface: no TM mode for l = 0");
    spec.validate();
    const double N = spec.refractive_index;
    const cplx x = z * spec.radius_a;
    const cplx mx = N * x;
    const Riccati pj_in = riccati(BesselKind::j, l, mx);
    const Riccati pj = riccati(BesselKind::j, l, x);
    const Riccati py = riccati(BesselKind::y, l, x);
    ModeCoefficients mc;
    mc.l = l;
    mc.z = z;
    mc.eta = 1.0;
    mc.alpha = N * pj_in.value * py.deriv - pj_in.deriv * py.value;
    mc.beta = pj_in.deriv * pj.value - N * pj_in.value * pj.deriv;
    return mc;
}

// alpha + i beta, the TM dispersion function whose fourth-quadrant zeros are
// the natural-mode poles.
inline cplx dispersion_G(const ResonatorSpec& spec, int l, cplx z) {
    const ModeCoefficients mc = match_interface(spec, l, z);
    return mc.alpha + cplx(0.0, 1.0) * mc.beta;
}

// G together with the magnitude of the terms entering it, which bounds the
// cancellation noise floor eps * term_scale of the evaluated G deep in the
// lower half-plane.
struct DispersionEval {
    cplx G;
    double term_scale;
};

inline DispersionEval dispersion_G_eval(const ResonatorSpec& spec, int l, cplx z) {
    const double N = spec.refractive_index;
    const cplx x = z * spec.radius_a;
    const cplx mx = N * x;
    const Riccati pj_in = riccati(BesselKind::j, l, mx);
    const Riccati pj = riccati(BesselKind::j, l, x);
    const Riccati py = riccati(BesselKind::y, l, x);
    const cplx alpha = N * pj_in.value * py.deriv - pj_in.deriv * py.value;
    const cplx beta = pj_in.deriv * pj.value - N * pj_in.value * pj.deriv;
    const double scale = std::abs(N * pj_in.value) * (std::abs(py.deriv) + std::abs(pj.deriv)) +
                         std::abs(pj_in.deriv) * (std::abs(py.value) + std::abs(pj.value));
    return {alpha + cplx(0.0, 1.0) * beta, scale};
}

// Central-difference derivative of alpha + i beta; shared by the Newton pole
// refinement and the pseudomode prefactor.
inline cplx dispersion_G_deriv(const ResonatorSpec& spec, int l, cplx z) {
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    return (dispersion_G(spec, l, z + h) - dispersion_G(spec, l, z - h)) / (2.0 * h);
}

// Exponential-free form of the dispersion function for the deep lower
// half-plane. With xi = x h1 and the h1-dominant part of psi(mx) factored out,
//   G(z) = -(i/2) e^{i(m+1)x} [ W(z) + O(e^{-2 m |Im x|}) ],
//   W(z) = m xihat(mx) xihat'(x) - xihat'(mx) xihat(x),
// where xihat = xi e^{-i argument} is built from scaled Hankel functions. W is
// evaluated without large cancelling exponentials, so deep roots of G can be
// refined to machine precision on W. Valid as a zero-locator below
// Im z < -depth_switch (the neglected part is < 1e-15 relative there).
inline cplx dispersion_W(const ResonatorSpec& spec, int l, cplx z) {
    const double N = spec.refractive_index;
    const cplx x = z * spec.radius_a;
    const cplx mx = N * x;
    const cplx s_mx = mx * sph_h1_scaled(l, mx);
    const cplx sp_mx = mx * sph_h1_scaled(l - 1, mx) - static_cast<double>(l) * sph_h1_scaled(l, mx);
    const cplx s_x = x * sph_h1_scaled(l, x);
    const cplx sp_x = x * sph_h1_scaled(l - 1, x) - static_cast<double>(l) * sph_h1_scaled(l, x);
    return N * s_mx * sp_x - sp_mx * s_x;
}

inline cplx dispersion_W_deriv(const ResonatorSpec& spec, int l, cplx z) {
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    return (dispersion_W(spec, l, z + h) - dispersion_W(spec, l, z - h)) / (2.0 * h);
}

// Depth below which the W-form is used for root work.
inline double deep_switch_im(const ResonatorSpec& spec) { return -5.0 / spec.radius_a; }

// U enters (alpha - i beta)(z_n) = (i/2) e^{i(m-1)x} U(z_n) deep below the axis:
// U(z) = m xihat(mx) xi2hat'(x) - xihat'(mx) xi2hat(x), xi2hat = (x h2) e^{+ix}.
inline cplx dispersion_U(const ResonatorSpec& spec, int l, cplx z) {
    const double N = spec.refractive_index;
    const cplx x = z * spec.radius_a;
    const cplx mx = N * x;
    auto hs2 = [](int ll, cplx w) { return std::conj(sph_h1_scaled(ll, std::conj(w))); };
    const cplx s_mx = mx * sph_h1_scaled(l, mx);
    const cplx sp_mx = mx * sph_h1_scaled(l - 1, mx) - static_cast<double>(l) * sph_h1_scaled(l, mx);
    const cplx t_x = x * hs2(l, x);
    const cplx tp_x = x * hs2(l - 1, x) - static_cast<double>(l) * hs2(l, x);
    return N * s_mx * tp_x - sp_mx * t_x;
}

// Reduced mode norm IM_hat(k) = (alpha^2 + beta^2) / (2 k^2) for real k > 0.
// The box-size factor R of the full norm is carried analytically and cancels
// against the mode density rho = R / pi everywhere downstream.
inline double mode_norm_IM(const ResonatorSpec& spec, int l, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("mode_norm_IM: k must be > 0");
    const ModeCoefficients mc = match_interface(spec, l, k);
    const double a = mc.alpha.real();
    const double b = mc.beta.real();
    return (a * a + b * b) / (2.0 * k * k);
}

// Piecewise radial function of Eq-type Z_l: eta j_l(N z r) inside,
// alpha j_l(z r) + beta y_l(z r) outside; with_norm divides by sqrt(IM_hat).
inline cplx radial_Z(const ResonatorSpec& spec, int l, cplx z, double r, bool with_norm) {
    if (r < 0.0) throw std::invalid_argument("radial_Z: r must be >= 0");
    const ModeCoefficients mc = match_interface(spec, l, z);
    cplx f;
    if (r < spec.radius_a) {
        f = mc.eta * sph_j(l, spec.refractive_index * z * r);
    } else {
        f = mc.alpha * sph_j(l, z * r) + mc.beta * sph_y(l, z * r);
    }
    if (with_norm) {
        const cplx g = mc.alpha + cplx(0.0, 1.0) * mc.beta;
        const cplx gb = mc.alpha - cplx(0.0, 1.0) * mc.beta;
        if (std::abs(g) < 1e-6 * std::abs(gb))
            throw std::domain_error("radial_Z: pole evaluation: use pseudomode_radial");
        f /= std::sqrt(g * gb / (2.0 * z * z));
    }
    return f;
}

// Residuals of the two matched tangential quantities at r = a, relative to the
// local magnitude. Used by tests to pin the matching convention numerically.
struct MatchResidual {
    double tangential_E;
    double radial_D;
};

inline MatchResidual interface_residual(const ResonatorSpec& spec, int l, cplx z) {
    const ModeCoefficients mc = match_interface(spec, l, z);
    const double N = spec.refractive_index;
    const cplx x = z * spec.radius_a;
    const cplx mx = N * x;
    const Riccati pj_in = riccati(BesselKind::j, l, mx);
    const Riccati pj = riccati(BesselKind::j, l, x);
    const Riccati py = riccati(BesselKind::y, l, x);
    const cplx lhs1 = mc.alpha * pj.deriv + mc.beta * py.deriv;
    const cplx rhs1 = mc.eta * pj_in.deriv;
    const cplx lhs2 = mc.alpha * pj.value + mc.beta * py.value;
    const cplx rhs2 = mc.eta * N * pj_in.value;
    const double s1 = std::max({std::abs(lhs1), std::abs(rhs1), 1e-300});
    const double s2 = std::max({std::abs(lhs2), std::abs(rhs2), 1e-300});
    return {std::abs(lhs1 - rhs1) / s1, std::abs(lhs2 - rhs2) / s2};
}

struct CrossSection {
    double sigma_s;            // um^2
    double last_term_fraction; // relative contribution of the l=l_max term
};

// sigma_s(k) = k^-2 sum_l (2l+1) |beta_l / (alpha_l + i beta_l)|^2 up to l_max.
inline CrossSection scattering_cross_section(const ResonatorSpec& spec, double k, int l_max) {
    if (!(k > 0.0)) throw std::invalid_argument("scattering_cross_section: k must be > 0");
    if (l_max < 1) throw std::invalid_argument("scattering_cross_section: l_max must be >= 1");
    double sum = 0.0, last = 0.0;
    for (int l = 1; l <= l_max; ++l) {
        const ModeCoefficients mc = match_interface(spec, l, k);
        const cplx ratio = mc.beta / (mc.alpha + cplx(0.0, 1.0) * mc.beta);
        last = (2.0 * l + 1.0) * std::norm(ratio);
        sum += last;
    }
    const double total = sum / (k * k);
    return {total, sum > 0.0 ? last / sum : 0.0};
}

// Per-l partial term of the cross-section sum (for spectrum tables).
inline double scattering_term(const ResonatorSpec& spec, double k, int l) {
    const ModeCoefficients mc = match_interface(spec, l, k);
    const cplx ratio = mc.beta / (mc.alpha + cplx(0.0, 1.0) * mc.beta);
    return (2.0 * l + 1.0) * std::norm(ratio) / (k * k);
}

} // namespace pmqed
