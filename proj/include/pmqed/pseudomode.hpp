// Pseudomode construction: vector-spherical-harmonic angular layer, continuum
// coupling density, per-pole radial functions and emitter couplings.
//
// All couplings are stored R-free: the box norm I_M = R * IM_hat and the mode
// density rho = R / pi only enter through the combination rho g^2, so the
// density-absorbed coupling ghat^2(k) = rho(k) g^2(k) is the working object.
// Per pole, ghat^2 continues analytically and
//     gbar_n^2 = -2 pi i Res[ghat^2(z)]_{z_n},
// which reduces to the radial factor
//     w_n(r) = sqrt[(alpha - i beta)(z_n) / (i dG/dz(z_n))] * h1_l(z_n r)
// outside the sphere. w_n diverges with r (as it must); stable evaluation
// factors the exponential out: w_n(r) = S_n * hs1_l(z_n r) * e^{i z_n (r-a)}
// with S_n bounded, so retarded-field products never overflow.

#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pmqed/constants.hpp"
#include "pmqed/mie.hpp"
#include "pmqed/pole_finder.hpp"

namespace pmqed {

// The default emitter radius is calibrated so the d = 10 Debye coupling to
// the (8,3) mode reproduces the reference Rabi period cT = 4.63e5 um; the
// emitter then sits inside the dielectric on the outer flank of the (8,3)
// interior lobe. Inside placement also keeps every pseudomode coupling at a
// physical magnitude (outside the sphere, the deep high-l poles acquire
// enormous mutually-cancelling residues and the coupled ODE system of the
// plain pseudomode expansion loses validity).
struct EmitterSpec {
    double r_emit = 0.94703856; // um
    double theta = 0.0;         // fixed on the polar axis
    double dipole_debye = 10.0;
    double omega0 = 0.0;        // rad/um; 0 = tune to the anchor mode downstream

    void validate() const {
        if (theta != 0.0)
            throw std::invalid_argument("EmitterSpec: only theta = 0 is supported (m = 0)");
        if (!(r_emit > 0.0)) throw std::invalid_argument("EmitterSpec: r_emit must be > 0");
        if (!(dipole_debye >= 0.0))
            throw std::invalid_argument("EmitterSpec: dipole moment must be >= 0");
    }
};

// Legendre P_l(x) and dP_l/dx.
inline double legendre_P(int l, double x) {
    if (l == 0) return 1.0;
    double pm = 1.0, p = x;
    for (int m = 1; m < l; ++m) {
        const double pn = ((2.0 * m + 1.0) * x * p - m * pm) / (m + 1.0);
        pm = p;
        p = pn;
    }
    return p;
}

inline double legendre_dP(int l, double x) {
    if (l == 0) return 0.0;
    const double p = legendre_P(l, x);
    const double pm = legendre_P(l - 1, x);
    const double denom = 1.0 - x * x;
    if (std::abs(denom) < 1e-12) {
        // endpoint limit: P_l'(+-1) = l(l+1)/2 * (+-1)^{l+1}
        const double s = x > 0.0 ? 1.0 : ((l % 2 == 0) ? -1.0 : 1.0);
        return s * 0.5 * l * (l + 1.0);
    }
    return (l * pm - l * x * p) / denom;
}

// Normalised angular amplitude A_l(theta) of the m = 0 TM mode: the radial
// field component is A_l(theta) * l(l+1) * Z_l(rho)/rho. Normalisation is
// fixed by l(l+1) * Int |A_l|^2 dOmega = 1.
inline double vsh_radial_component(int l, int m, double theta) {
    if (l < 1) throw std::invalid_argument("vsh_radial_component: l must be >= 1");
    if (m != 0) throw std::invalid_argument("vsh_radial_component: only m = 0 is supported");
    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * pi * l * (l + 1.0)));
    return norm * legendre_P(l, std::cos(theta));
}

// d A_l / d theta, for the tangential component of the mode.
inline double vsh_theta_derivative(int l, double theta) {
    const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * pi * l * (l + 1.0)));
    return norm * (-std::sin(theta)) * legendre_dP(l, std::cos(theta));
}

namespace detail {

// (alpha - i beta)(z), stable at any depth: the direct combination near the
// axis, the factored exponential form below the deep switch.
inline cplx alpha_minus_ibeta(const ResonatorSpec& spec, int l, cplx z) {
    if (z.imag() >= deep_switch_im(spec)) {
        const ModeCoefficients mc = match_interface(spec, l, z);
        return mc.alpha - cplx(0.0, 1.0) * mc.beta;
    }
    const cplx x = z * spec.radius_a;
    const double N = spec.refractive_index;
    return cplx(0.0, 0.5) * std::exp(cplx(0.0, 1.0) * (N - 1.0) * x) * dispersion_U(spec, l, z);
}

// dG/dz at a pole, stable at any depth (deep: from the scaled W-form).
inline cplx dispersion_G_deriv_at_pole(const ResonatorSpec& spec, int l, cplx z) {
    if (z.imag() >= deep_switch_im(spec)) return dispersion_G_deriv(spec, l, z);
    const cplx x = z * spec.radius_a;
    const double N = spec.refractive_index;
    return cplx(0.0, -0.5) * std::exp(cplx(0.0, 1.0) * (N + 1.0) * x) *
           dispersion_W_deriv(spec, l, z);
}

} // namespace detail

enum class SqrtBranch { principal, flipped };
enum class LambConvention { abs2, square };

// Bounded prefactor S_n of the factored radial function
// w_n(r) = S_n * hs1_l(z_n r) * e^{i z_n (r - a)}.
inline cplx pseudomode_prefactor(const ResonatorSpec& spec, const Pole& pole,
                                 SqrtBranch branch = SqrtBranch::principal) {
    cplx s2;
    if (pole.z.imag() >= deep_switch_im(spec)) {
        const cplx amb = detail::alpha_minus_ibeta(spec, pole.l, pole.z);
        const cplx gp = dispersion_G_deriv(spec, pole.l, pole.z);
        s2 = amb / (cplx(0.0, 1.0) * gp) *
             std::exp(cplx(0.0, 2.0) * pole.z * spec.radius_a);
    } else {
        // exponentials cancel exactly between (alpha - i beta) and G'
        s2 = cplx(0.0, 1.0) * dispersion_U(spec, pole.l, pole.z) /
             dispersion_W_deriv(spec, pole.l, pole.z);
    }
    cplx s = std::sqrt(s2);
    if (branch == SqrtBranch::flipped) s = -s;
    return s;
}

// Eq-15-style radial factor of the pseudomode at radius r (true, unscaled
// value; grows like e^{|Im z| r} for large r by construction).
inline cplx pseudomode_radial(const ResonatorSpec& spec, const Pole& pole, double r,
                              SqrtBranch branch = SqrtBranch::principal) {
    if (!(r > 0.0)) throw std::invalid_argument("pseudomode_radial: r must be > 0");
    const cplx s = pseudomode_prefactor(spec, pole, branch);
    const cplx z = pole.z;
    const double a = spec.radius_a;
    if (r >= a)
        return s * sph_h1_scaled(pole.l, z * r) * std::exp(cplx(0.0, 1.0) * z * (r - a));
    // inside branch: eta j_l(N z r) continued with the same prefactor,
    // w_in = S * e^{-i z a} * 2 j_l(N z r) / (alpha - i beta)
    const double N = spec.refractive_index;
    const cplx amb = detail::alpha_minus_ibeta(spec, pole.l, pole.z);
    if (pole.z.imag() >= deep_switch_im(spec)) {
        return s * std::exp(cplx(0.0, -1.0) * z * a) * 2.0 * sph_j(pole.l, N * z * r) / amb;
    }
    // deep: fold e^{i(N-1) z a} of (alpha - i beta) into the Bessel growth
    const cplx u = dispersion_U(spec, pole.l, pole.z);
    const cplx expfac = std::exp(cplx(0.0, -1.0) * N * z * a);
    return s * 2.0 * sph_j(pole.l, N * z * r) * expfac / (cplx(0.0, 0.5) * u);
}

// Density-absorbed continuum coupling ghat_l(k) = sqrt(rho) g_l(k) for real k.
// Units: (rad/um) * um^{1/2}; Int dk ghat^2 has units (rad/um)^2.
inline double continuum_coupling_g(const ResonatorSpec& spec, const EmitterSpec& emitter,
                                   int l, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("continuum_coupling_g: k must be > 0");
    emitter.validate();
    const double re = emitter.r_emit;
    const double eps_e = spec.eps_at(re);
    const double A0 = vsh_radial_component(l, 0, emitter.theta);
    const double zeta = radial_Z(spec, l, k, re, false).real() / std::sqrt(mode_norm_IM(spec, l, k));
    const double amp = kappa_units() * emitter.dipole_debye * l * (l + 1.0) * A0;
    const double g2 = amp * amp / eps_e * zeta * zeta / (k * re * re * pi);
    return std::sqrt(g2);
}

// Emitter-pseudomode coupling gbar_n (complex). Works for emitters on either
// side of the interface; the inside branch uses the regular j_l continuation.
inline cplx coupling_gbar(const ResonatorSpec& spec, const EmitterSpec& emitter,
                          const Pole& pole, SqrtBranch branch = SqrtBranch::principal) {
    emitter.validate();
    const double re = emitter.r_emit;
    const double eps_e = spec.eps_at(re);
    const double A0 = vsh_radial_component(pole.l, 0, emitter.theta);
    const cplx w = pseudomode_radial(spec, pole, re, branch);
    const double amp =
        kappa_units() * emitter.dipole_debye * pole.l * (pole.l + 1.0) * A0;
    return amp / std::sqrt(eps_e) * std::sqrt(pole.z) * w / re;
}

struct PseudomodeSet {
    ResonatorSpec resonator;
    EmitterSpec emitter;
    PoleSet poles;
    std::vector<cplx> prefactor;  // S_n (branch-resolved)
    std::vector<cplx> w_emit;     // w_n(r_emit)
    std::vector<cplx> gbar;       // rad/um

    std::size_t size() const { return poles.poles.size(); }
    int index_of(int l, int n) const {
        for (std::size_t i = 0; i < poles.poles.size(); ++i)
            if (poles.poles[i].l == l && poles.poles[i].n == n) return static_cast<int>(i);
        return -1;
    }
};

// Build the coupling table for every pole. The square-root branch is the
// principal one with sign continuity enforced along each l-ladder; only
// gbar^2 is observable, which the branch-invariance tests pin down.
inline PseudomodeSet build_pseudomodes(const ResonatorSpec& spec, const EmitterSpec& emitter,
                                       const PoleSet& poles,
                                       SqrtBranch branch = SqrtBranch::principal) {
    PseudomodeSet set;
    set.resonator = spec;
    set.emitter = emitter;
    set.poles = poles;
    set.prefactor.reserve(poles.poles.size());
    set.w_emit.reserve(poles.poles.size());
    set.gbar.reserve(poles.poles.size());
    cplx prev_s = 0.0;
    int prev_l = -1;
    for (const auto& p : poles.poles) {
        const cplx s0 = pseudomode_prefactor(spec, p, branch);
        cplx s = s0;
        if (p.l == prev_l && (prev_s * std::conj(s)).real() < 0.0) s = -s;
        prev_s = s;
        prev_l = p.l;
        cplx w = pseudomode_radial(spec, p, emitter.r_emit, branch);
        if (s != s0) w = -w; // keep the ladder-continuous sign
        const double A0 = vsh_radial_component(p.l, 0, emitter.theta);
        const double amp =
            kappa_units() * emitter.dipole_debye * p.l * (p.l + 1.0) * A0;
        set.prefactor.push_back(s);
        set.w_emit.push_back(w);
        set.gbar.push_back(amp / std::sqrt(spec.eps_at(emitter.r_emit)) * std::sqrt(p.z) * w /
                           emitter.r_emit);
    }
    return set;
}

// Analytic continuation of ghat^2 off the real axis, split so that every
// factor is evaluated in its stable form. Used by the per-pole numeric
// residue cross-check.
inline cplx coupling_density_continued(const ResonatorSpec& spec, const EmitterSpec& emitter,
                                       int l, cplx z) {
    const double re = emitter.r_emit;
    const double a = spec.radius_a;
    const cplx G = dispersion_G(spec, l, z);
    const cplx amb = detail::alpha_minus_ibeta(spec, l, z);
    const double A0 = vsh_radial_component(l, 0, emitter.theta);
    const double amp = kappa_units() * emitter.dipole_debye * l * (l + 1.0) * A0;
    const double C = amp * amp / spec.eps_at(re);
    cplx f2;
    if (re < a) {
        const cplx f_in = sph_j(l, spec.refractive_index * z * re); // eta = 1 gauge
        f2 = f_in * f_in;
    } else {
        const cplx h1 = sph_h1_scaled(l, z * re) * std::exp(cplx(0.0, 1.0) * z * re);
        const cplx h2 = std::conj(sph_h1_scaled(l, std::conj(z * re))) *
                        std::exp(cplx(0.0, -1.0) * z * re);
        f2 = 0.25 * amb * amb * h1 * h1 + 0.5 * amb * G * h1 * h2 + 0.25 * G * G * h2 * h2;
    }
    return C / pi * 2.0 * z * f2 / (re * re * amb * G);
}

// Numeric residue of the continued coupling density around a pole:
// gbar^2 = -contour integral (counter-clockwise) of ghat^2.
inline cplx numeric_gbar2(const ResonatorSpec& spec, const EmitterSpec& emitter,
                          const Pole& pole, double radius = 0.0, int n_samples = 128) {
    if (radius <= 0.0) {
        radius = std::min({1e-3, 0.5 * pole.gamma() > 0.0 ? 0.5 * pole.gamma() : 1e-3});
        radius = std::max(radius, 1e-13 * std::abs(pole.z));
    }
    cplx sum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double th = 2.0 * pi * (i + 0.5) / n_samples;
        const cplx dz = radius * cplx(std::cos(th), std::sin(th));
        sum += coupling_density_continued(spec, emitter, pole.l, pole.z + dz) *
               cplx(0.0, 1.0) * dz;
    }
    return -sum * (2.0 * pi / n_samples);
}

} // namespace pmqed
