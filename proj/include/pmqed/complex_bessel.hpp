// Spherical Bessel, Neumann and Hankel functions of complex argument.
//
// Evaluation strategy per regime:
//   - j_l: Maclaurin series when |z| is small against the order, forward
//     recurrence in the oscillatory regime |z| > l + 10, Miller downward
//     recurrence in between (forward recurrence is unstable for j when the
//     order exceeds |z|).
//   - y_l: forward recurrence from the closed forms y_0, y_1. y is the
//     dominant solution of the recurrence for growing order, so this is
//     stable everywhere.
//   - h1 = j + i y, h2 = j - i y on the real axis and in the half-plane where
//     the combination is dominant; in the opposite half-plane the finite
//     closed-form sum is used to avoid the subtractive cancellation.
//
// Scaled variants hs1 = h1 * exp(-i z) are provided for code that combines
// Hankel tails with explicit exponentials (retarded fields, deep poles).

#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmqed {

using cplx = std::complex<double>;

enum class BesselKind { j, y, h1, h2 };

namespace detail {

inline void check_finite(cplx v, int l, cplx z, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw std::overflow_error(std::string("spherical ") + what + " overflow at l=" +
                                  std::to_string(l) + ", |z|=" + std::to_string(std::abs(z)));
}

// j_l by Maclaurin series: z^l/(2l+1)!! * sum_m (-z^2/2)^m / (m! (2l+3)(2l+5)...(2l+1+2m)).
inline cplx sph_j_series(int l, cplx z) {
    double dfact = 1.0;
    for (int m = 3; m <= 2 * l + 1; m += 2) dfact *= m;
    cplx zl = 1.0;
    for (int m = 0; m < l; ++m) zl *= z;
    const cplx x2 = -0.5 * z * z;
    cplx term = 1.0, sum = 1.0;
    for (int m = 1; m < 220; ++m) {
        term *= x2 / (static_cast<double>(m) * (2.0 * l + 1.0 + 2.0 * m));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return zl / dfact * sum;
}

// Forward recurrence f_{m+1} = (2m+1)/z f_m - f_{m-1} from (f0, f1).
inline cplx recur_up(int l, cplx z, cplx f0, cplx f1) {
    if (l == 0) return f0;
    if (l == 1) return f1;
    cplx fm = f0, f = f1;
    for (int m = 1; m < l; ++m) {
        cplx fn = (2.0 * m + 1.0) / z * f - fm;
        fm = f;
        f = fn;
    }
    return f;
}

// Miller downward recurrence for j_l, normalised against the closed-form j_0 or j_1.
inline cplx sph_j_miller(int l, cplx z) {
    const int start = l + 44 + static_cast<int>(0.7 * std::abs(z));
    cplx fp = 0.0;   // f_{m+2}
    cplx f = 1e-280; // f_{m+1}, arbitrary seed
    cplx fl = 0.0, f1 = 0.0, f0 = 0.0;
    for (int m = start - 1; m >= 0; --m) {
        const cplx fm = (2.0 * m + 3.0) / z * f - fp;
        fp = f;
        f = fm;
        if (m == l) fl = f;
        if (m == 1) f1 = f;
        if (m == 0) f0 = f;
        const double mag = std::abs(f);
        if (mag > 1e250) { // rescale to dodge overflow
            f /= mag;
            fp /= mag;
            fl /= mag;
            f1 /= mag;
            f0 /= mag;
        }
    }
    const cplx j0 = std::sin(z) / z;
    const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
    // Normalise against whichever reference is better conditioned.
    if (std::abs(j0) * std::abs(f0) >= std::abs(j1) * std::abs(f1))
        return fl * (j0 / f0);
    return fl * (j1 / f1);
}

inline cplx sph_j(int l, cplx z) {
    if (l == 0) return std::abs(z) < 1e-8 ? sph_j_series(0, z) : std::sin(z) / z;
    const double az = std::abs(z);
    if (az * az <= 2.0 * (2.0 * l + 3.0)) return sph_j_series(l, z);
    if (az > l + 20.0) {
        const cplx j0 = std::sin(z) / z;
        const cplx j1 = std::sin(z) / (z * z) - std::cos(z) / z;
        return recur_up(l, z, j0, j1);
    }
    return sph_j_miller(l, z);
}

inline cplx sph_j(int l, cplx z);

// y_l by upward recurrence. On the real axis y is the dominant solution and
// the classic recurrence from y_0, y_1 is stable. At complex z the exact y_l
// passes through a deep dip in l (both j and y fall orders of magnitude below
// e^{|Im z|} near the turning point) where the recurrence error modes do not
// dip, so instead recurse h2 upward in the lower half-plane -- h2 starts at
// e^{-|Im z|} and rides the pure growth direction -- and recover
// y = -i (j - h2). The upper half-plane follows by Schwarz reflection.
inline cplx sph_y(int l, cplx z) {
    if (z.imag() > 0.0) return std::conj(sph_y(l, std::conj(z)));
    const cplx y0 = -std::cos(z) / z;
    if (l == 0) return y0;
    const cplx y1 = -std::cos(z) / (z * z) - std::sin(z) / z;
    if (z.imag() == 0.0) return recur_up(l, z, y0, y1);
    const cplx i1(0.0, 1.0);
    const cplx e = std::exp(-i1 * z);
    const cplx h2_0 = i1 * e / z;
    const cplx h2_1 = e * (i1 / (z * z) - 1.0 / z);
    const cplx h2 = recur_up(l, z, h2_0, h2_1);
    return -i1 * (sph_j(l, z) - h2);
}

// Closed-form h1_l(z) e^{-iz} = (-i)^{l+1}/z * sum_{m<=l} (i/2z)^m (l+m)!/(m!(l-m)!),
// exponential-free. Reports the term amplification (max |term| / |sum|), which
// bounds the relative rounding error; the sum is ill-conditioned for l >> |z|.
inline cplx sph_h1_closed_scaled(int l, cplx z, double* amplification = nullptr) {
    const cplx iz = cplx(0.0, 1.0) / (2.0 * z);
    cplx term = 1.0, sum = 1.0;
    double max_term = 1.0;
    for (int m = 1; m <= l; ++m) {
        term *= iz * (static_cast<double>(l + m) * static_cast<double>(l - m + 1)) /
                static_cast<double>(m);
        sum += term;
        max_term = std::max(max_term, std::abs(term));
    }
    if (amplification) *amplification = max_term / std::max(std::abs(sum), 1e-300);
    cplx pref = 1.0 / z;
    // (-i)^{l+1}
    switch ((l + 1) & 3) {
        case 0: break;
        case 1: pref *= cplx(0.0, -1.0); break;
        case 2: pref *= -1.0; break;
        case 3: pref *= cplx(0.0, 1.0); break;
    }
    return pref * sum;
}

} // namespace detail

// Spherical Bessel/Neumann/Hankel function of order l at complex z.
inline cplx sph_bessel(BesselKind kind, int l, cplx z) {
    if (l < 0) throw std::invalid_argument("sph_bessel: l must be >= 0");
    if (z == 0.0) {
        if (kind == BesselKind::j) return l == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
        throw std::domain_error("sph_bessel: z = 0 is singular for y/h kinds");
    }
    cplx v;
    switch (kind) {
        case BesselKind::j: v = detail::sph_j(l, z); break;
        case BesselKind::y: v = detail::sph_y(l, z); break;
        case BesselKind::h1:
            v = detail::sph_j(l, z) + cplx(0.0, 1.0) * detail::sph_y(l, z);
            break;
        case BesselKind::h2:
            v = detail::sph_j(l, z) - cplx(0.0, 1.0) * detail::sph_y(l, z);
            break;
    }
    detail::check_finite(v, l, z, "bessel");
    return v;
}

inline cplx sph_j(int l, cplx z) { return sph_bessel(BesselKind::j, l, z); }
inline cplx sph_y(int l, cplx z) { return sph_bessel(BesselKind::y, l, z); }
inline cplx sph_h1(int l, cplx z) { return sph_bessel(BesselKind::h1, l, z); }
inline cplx sph_h2(int l, cplx z) { return sph_bessel(BesselKind::h2, l, z); }

// h1_l(z) * exp(-i z): bounded as Im z -> -inf, for retarded-field products.
// Lower half-plane: h1 is the dominant combination, j + i y has no
// cancellation and the explicit exp(-iz) rescale is exact. Upper half-plane:
// h1 is subdominant and j + i y cancels at depth e^{2 Im z}, so the closed
// finite sum is used whenever its own term amplification allows it.
inline cplx sph_h1_scaled(int l, cplx z) {
    if (z == 0.0) throw std::domain_error("sph_h1_scaled: z = 0");
    cplx v;
    if (z.imag() <= 0.0 && z.imag() > -600.0) {
        v = (detail::sph_j(l, z) + cplx(0.0, 1.0) * detail::sph_y(l, z)) *
            std::exp(cplx(0.0, -1.0) * z);
    } else {
        double amp = 0.0;
        v = detail::sph_h1_closed_scaled(l, z, &amp);
        if (amp > 1e4 && std::abs(z.imag()) < 15.0) {
            v = (detail::sph_j(l, z) + cplx(0.0, 1.0) * detail::sph_y(l, z)) *
                std::exp(cplx(0.0, -1.0) * z);
        }
    }
    detail::check_finite(v, l, z, "hankel(scaled)");
    return v;
}

// Derivative f_l'(z) = f_{l-1}(z) - (l+1)/z * f_l(z); for l = 0, f_0' = -f_1.
inline cplx sph_bessel_deriv(BesselKind kind, int l, cplx z) {
    if (l == 0) return -sph_bessel(kind, 1, z);
    return sph_bessel(kind, l - 1, z) - (l + 1.0) / z * sph_bessel(kind, l, z);
}

// Riccati pair S_l(z) = z f_l(z) and S_l'(z) = z f_{l-1}(z) - l f_l(z).
struct Riccati {
    cplx value;
    cplx deriv;
};

inline Riccati riccati(BesselKind kind, int l, cplx z) {
    const cplx fl = sph_bessel(kind, l, z);
    if (l == 0) return {z * fl, fl + z * sph_bessel_deriv(kind, 0, z)};
    const cplx flm = sph_bessel(kind, l - 1, z);
    return {z * fl, z * flm - static_cast<double>(l) * fl};
}

} // namespace pmqed
