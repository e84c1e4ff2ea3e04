#pragma once

#include <cmath>
#include <stdexcept>

#include "liddi/constants.hpp"
#include "liddi/species.hpp"
#include "liddi/vec.hpp"

namespace liddi {

/// Flash beam driving the dipoles: uniform plane wave along y whose linear
/// polarization rotates in the x-z plane from x (phi = 0) to z (phi = 90).
///
/// The wave vector magnitude uses the bare transition wavelength; the
/// detuning's effect on k is a 3e-7 relative correction, far below the grid
/// resolution, and is ignored.
struct FlashParams {
    double intensity = 0.0;               // [W/m^2]
    double detuning = 0.0;                // laser minus atom [rad/s]
    double polarization_angle_deg = 0.0;  // phi in [0, 90]
    Vec3 propagation{0.0, 1.0, 0.0};      // unit vector
    double wavelength = 780.249e-9;       // [m]
    double flash_time = 300e-9;           // [s]

    void validate() const {
        if (intensity < 0) throw std::invalid_argument("FlashParams: intensity must be >= 0");
        if (polarization_angle_deg < 0.0 || polarization_angle_deg > 90.0)
            throw std::invalid_argument("FlashParams: polarization angle must be in [0, 90] deg");
        if (!(flash_time > 0)) throw std::invalid_argument("FlashParams: flash_time must be positive");
        if (!(wavelength > 0)) throw std::invalid_argument("FlashParams: wavelength must be positive");
        if (std::abs(norm(propagation) - 1.0) > 1e-12 ||
            std::abs(propagation[0]) > 1e-12 || std::abs(propagation[2]) > 1e-12)
            throw std::invalid_argument("FlashParams: propagation must be the +y or -y unit vector");
    }

    double wavenumber() const { return two_pi / wavelength; }

    Vec3 wave_vector() const { return scaled(propagation, wavenumber()); }

    Vec3 polarization_vector() const {
        const double phi = polarization_angle_deg * pi / 180.0;
        return {std::cos(phi), 0.0, std::sin(phi)};
    }
};

/// s = (I0/Isat) / (1 + 4 (delta/Gamma)^2).
inline double saturation_parameter(const FlashParams& flash, const SpeciesParams& sp,
                                   const PhysicalConstants& pc = {}) {
    const double isat = saturation_intensity(sp, pc);
    const double dg = flash.detuning / sp.gamma;
    return (flash.intensity / isat) / (1.0 + 4.0 * dg * dg);
}

/// Steady-state dipole moment of the driven two-level atom [C m]:
/// d = 2 (d_ge/Omega) (s/(s+1)) sqrt(delta^2 + Gamma^2/4),
/// Omega = Gamma sqrt(I0 / 2 Isat).
inline double steady_state_dipole(const FlashParams& flash, const SpeciesParams& sp,
                                  const PhysicalConstants& pc = {}) {
    if (flash.intensity == 0.0) return 0.0;
    const double isat = saturation_intensity(sp, pc);
    const double omega_rabi = sp.gamma * std::sqrt(flash.intensity / (2.0 * isat));
    const double s = saturation_parameter(flash, sp, pc);
    return 2.0 * (sp.d_ge / omega_rabi) * (s / (s + 1.0)) *
           std::sqrt(flash.detuning * flash.detuning + sp.gamma * sp.gamma / 4.0);
}

/// d_max = sqrt(3 Gamma eps0 h c^3 / (4 omega0^3)), reached at s = 1.
inline double max_dipole(const SpeciesParams& sp, const PhysicalConstants& pc = {}) {
    return std::sqrt(3.0 * sp.gamma * pc.epsilon0 * pc.h * pc.c * pc.c * pc.c /
                     (4.0 * sp.omega0 * sp.omega0 * sp.omega0));
}

/// Spontaneous photon scattering rate R = (Gamma/2) s/(1+s) [photons/s].
inline double scattering_rate(const FlashParams& flash, const SpeciesParams& sp,
                              const PhysicalConstants& pc = {}) {
    const double s = saturation_parameter(flash, sp, pc);
    return 0.5 * sp.gamma * s / (1.0 + s);
}

} // namespace liddi
