#pragma once

#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>

namespace liddi {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Fundamental constants, SI units. Planck constant and speed of light are
/// the exact SI defining values; the rest are CODATA 2018.
struct PhysicalConstants {
    double h = 6.62607015e-34;                  // Planck constant [J s]
    double hbar = 6.62607015e-34 / two_pi;      // reduced Planck constant [J s]
    double c = 299792458.0;                     // speed of light [m/s]
    double epsilon0 = 8.8541878128e-12;         // vacuum permittivity [F/m]
    double bohr_radius = 5.29177210903e-11;     // [m]
    double debye = 1.0e-21 / 299792458.0;       // 1 D in [C m]

    void validate() const {
        if (!(h > 0 && hbar > 0 && c > 0 && epsilon0 > 0 && bohr_radius > 0 && debye > 0))
            throw std::invalid_argument("PhysicalConstants: all constants must be positive");
        if (std::abs(h - two_pi * hbar) > 4.0 * std::numeric_limits<double>::epsilon() * h)
            throw std::invalid_argument("PhysicalConstants: h must equal 2*pi*hbar");
    }
};

/// Unit conventions used at external interfaces.
///
/// Frequencies cross the API boundary as plain frequencies in Hz; internal
/// formulas work with angular frequencies in rad/s. Energies are reported as
/// E/h in Hz, momenta in recoil units hbar*k of the flash beam.
struct UnitConvention {
    static double angular_from_hz(double f_hz) { return two_pi * f_hz; }
    static double hz_from_angular(double omega) { return omega / two_pi; }
    static double energy_to_hz(double energy_j, const PhysicalConstants& pc) {
        return energy_j / pc.h;
    }
    static double momentum_to_recoils(double k_rad_per_m, double k_flash) {
        return k_rad_per_m / k_flash;
    }
};

} // namespace liddi
