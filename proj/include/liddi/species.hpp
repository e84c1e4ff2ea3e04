#pragma once

#include <cmath>
#include <stdexcept>

#include "liddi/constants.hpp"

namespace liddi {

/// Two-level reduction of one atomic species.
///
/// gamma and omega0 are angular frequencies [rad/s]; d_ge is the dipole
/// matrix element [C m] that enters the steady-state dipole moment.
struct SpeciesParams {
    double mass = 0.0;       // [kg]
    double gamma = 0.0;      // natural linewidth Gamma [rad/s]
    double lambda0 = 0.0;    // transition wavelength [m]
    double d_ge = 0.0;       // dipole matrix element [C m]
    double a_s = 0.0;        // s-wave scattering length [m]
    double omega0 = 0.0;     // transition angular frequency [rad/s]

    void validate(const PhysicalConstants& pc = {}) const {
        if (!(mass > 0)) throw std::invalid_argument("SpeciesParams: mass must be positive");
        if (!(gamma > 0)) throw std::invalid_argument("SpeciesParams: gamma must be positive");
        if (!(lambda0 > 0)) throw std::invalid_argument("SpeciesParams: lambda0 must be positive");
        if (!(d_ge > 0)) throw std::invalid_argument("SpeciesParams: d_ge must be positive");
        if (a_s < 0) throw std::invalid_argument("SpeciesParams: a_s must be non-negative");
        const double expected = two_pi * pc.c / lambda0;
        if (std::abs(omega0 - expected) > 1e-9 * expected)
            throw std::invalid_argument("SpeciesParams: omega0 must equal 2*pi*c/lambda0");
    }
};

/// Dipole matrix element consistent with the two-level decay rate,
/// d_ge^2 = 3*pi*eps0*hbar*c^3*Gamma/omega0^3. With this choice the maximum
/// steady-state dipole equals d_ge/sqrt(2).
inline double two_level_dipole_element(double gamma, double omega0,
                                       const PhysicalConstants& pc = {}) {
    return std::sqrt(3.0 * pi * pc.epsilon0 * pc.hbar * pc.c * pc.c * pc.c * gamma /
                     (omega0 * omega0 * omega0));
}

/// Rb-87 on the D2 line, F=2 -> F'=3, treated as a two-level system.
inline SpeciesParams rb87_defaults(const PhysicalConstants& pc = {}) {
    SpeciesParams sp;
    sp.mass = 1.44e-25;
    sp.gamma = two_pi * 6.07e6;
    sp.lambda0 = 780.249e-9;
    sp.omega0 = two_pi * pc.c / sp.lambda0;
    sp.d_ge = two_level_dipole_element(sp.gamma, sp.omega0, pc);
    sp.a_s = 100.0 * pc.bohr_radius;
    sp.validate(pc);
    return sp;
}

/// Saturation intensity Isat = pi*h*c*Gamma/(3*lambda^3) [W/m^2].
inline double saturation_intensity(const SpeciesParams& sp, const PhysicalConstants& pc = {}) {
    return pi * pc.h * pc.c * sp.gamma / (3.0 * sp.lambda0 * sp.lambda0 * sp.lambda0);
}

} // namespace liddi
