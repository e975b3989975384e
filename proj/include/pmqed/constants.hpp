// Physical constants and unit conversions.
//
// Working units: lengths in micrometres, wavenumbers / frequencies / couplings
// in rad/um with c = 1 (time is reported as ct in um). Dipole moments are given
// in Debye. A single conversion constant maps sqrt(hbar*c*k / (2 eps0)) * d / (hbar*c)
// with d in Debye onto rad/um; everything else in the library is expressed in
// the reduced units.

#pragma once

#include <cmath>

namespace pmqed {

namespace si {
inline constexpr double c = 2.99792458e8;            // m/s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double debye = 3.33564095198152e-30; // C m
} // namespace si

// Coupling conversion: g [rad/um] = kappa_units * d[Debye] * sqrt(k[rad/um]) * u[um^-3/2]
// where u is the (mode-volume normalised) mode amplitude at the emitter.
// This CODATA-built constant reproduces the analytic free-space decay rate
// exactly (see the unit tests).
inline double kappa_units() {
    // g[rad/s] = d * u * sqrt(c k / (2 hbar eps0)); convert d->SI, u: um^-3/2 -> m^-3/2,
    // k: um^-1 -> m^-1, then rad/s -> rad/um via 1/c and m -> um.
    const double root = std::sqrt(si::c * 1.0e6 / (2.0 * si::hbar * si::eps0));
    return si::debye * 1.0e9 * root / si::c * 1.0e-6;
}


inline constexpr double pi = 3.14159265358979323846;

} // namespace pmqed
