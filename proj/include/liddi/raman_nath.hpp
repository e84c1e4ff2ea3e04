#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "liddi/constants.hpp"
#include "liddi/fft.hpp"
#include "liddi/fitting.hpp"
#include "liddi/gpe.hpp"
#include "liddi/species.hpp"

namespace liddi {

/// Momentum density n(k) = |integral e^{-i k.r} psi(r) d3r|^2 / (2 pi)^3 on
/// the spectral counterpart of the spatial grid, in DFT bin order. Its
/// integral over d3k equals the atom number.
struct MomentumSpectrum {
    GridSpec grid;                // spatial grid the spectrum derives from
    std::vector<double> density;  // [m^3], DFT bin order, z fastest
    double recoil_unit = 0.0;     // flash |k| [rad/m]
    double atom_number = 0.0;

    double wavenumber(int axis, int m) const { return grid.wavenumber(axis, m); }
    double bin_volume() const {
        return grid.spectral_spacing(0) * grid.spectral_spacing(1) * grid.spectral_spacing(2);
    }

    double total() const {
        double acc = 0.0;
        for (double v : density) acc += v;
        return acc * bin_volume();
    }
};

/// psi'(r) = exp(-i V(r) t / hbar) psi(r). Pointwise unit-modulus factor:
/// the density is frozen (Raman-Nath regime), only the phase winds up.
inline Wavefunction phase_imprint(const Wavefunction& psi, const ScalarField3D& potential,
                                  double t, const PhysicalConstants& pc = {}) {
    if (t < 0) throw std::invalid_argument("phase_imprint: t must be non-negative");
    if (!psi.field.grid.same_layout(potential.grid))
        throw std::invalid_argument("phase_imprint: wavefunction and potential grids differ");
    Wavefunction out;
    out.atom_number = psi.atom_number;
    out.field = psi.field;
    const double c = -t / pc.hbar;
    for (std::size_t i = 0; i < out.field.values.size(); ++i) {
        const double phase = c * potential.values[i];
        out.field.values[i] *= cdouble(std::cos(phase), std::sin(phase));
    }
    return out;
}

/// 3D momentum distribution with continuum normalization.
inline MomentumSpectrum momentum_distribution(const Wavefunction& psi, double recoil_unit) {
    ComplexField3D spec = fft3(psi.field, FftDirection::Forward);
    const double h = psi.field.grid.spacing;
    const double scale = std::pow(h * h * h, 2) / std::pow(two_pi, 3);
    MomentumSpectrum out;
    out.grid = psi.field.grid;
    out.recoil_unit = recoil_unit;
    out.atom_number = psi.atom_number;
    out.density.resize(spec.values.size());
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        out.density[i] = scale * std::norm(spec.values[i]);
    return out;
}

/// Projection of the momentum density onto one axis, in recoil units,
/// sorted by k. value has units of atoms per recoil.
inline Profile1D project_spectrum(const MomentumSpectrum& sp, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("project_spectrum: bad axis");
    const auto& n = sp.grid.n;
    std::vector<double> sum(n[axis], 0.0);
    std::size_t idx = 0;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k, ++idx) {
                const int b = (axis == 0) ? i : (axis == 1) ? j : k;
                sum[b] += sp.density[idx];
            }
    double dk_others = 1.0;
    for (int a = 0; a < 3; ++a)
        if (a != axis) dk_others *= sp.grid.spectral_spacing(a);

    Profile1D p;
    p.spacing = sp.grid.spectral_spacing(axis) / sp.recoil_unit;
    std::vector<std::pair<double, double>> rows(n[axis]);
    for (int m = 0; m < n[axis]; ++m)
        rows[m] = {sp.wavenumber(axis, m) / sp.recoil_unit,
                   sum[m] * dk_others * sp.recoil_unit};
    std::sort(rows.begin(), rows.end());
    for (auto& [k, v] : rows) {
        p.position.push_back(k);
        p.value.push_back(v);
    }
    return p;
}

/// Gaussian width of the projected momentum density along one axis, in
/// recoil units. The fit center is pinned to k = 0: the coherent imprint of
/// an even potential is symmetric, and the directed photon kick lives in
/// the scattering background, which is handled separately.
inline GaussianFit fit_width(const MomentumSpectrum& sp, int axis) {
    const Profile1D p = project_spectrum(sp, axis);
    return fit_centered_gaussian(p.position, p.value);
}

/// Mean kinetic energy per atom of a spectrum [J].
inline double mean_kinetic_energy(const MomentumSpectrum& sp, double mass,
                                  const PhysicalConstants& pc = {}) {
    const auto& n = sp.grid.n;
    double acc = 0.0;
    std::size_t idx = 0;
    for (int i = 0; i < n[0]; ++i)
        for (int j = 0; j < n[1]; ++j)
            for (int k = 0; k < n[2]; ++k, ++idx) {
                const double kx = sp.wavenumber(0, i), ky = sp.wavenumber(1, j),
                             kz = sp.wavenumber(2, k);
                acc += (kx * kx + ky * ky + kz * kz) * sp.density[idx];
            }
    return acc * sp.bin_volume() * pc.hbar * pc.hbar / (2.0 * mass) / sp.atom_number;
}

/// Raman-Nath validity figure: kinetic energy gained per atom during the
/// imprint over the largest potential magnitude. Values well below one mean
/// the frozen-density assumption holds; the CLI warns above 0.3.
inline double raman_nath_check(const Wavefunction& psi_before, const ScalarField3D& potential,
                               double t, const SpeciesParams& sp,
                               const PhysicalConstants& pc = {}) {
    const double vmax = max_abs(potential);
    if (vmax == 0.0 || t == 0.0) return 0.0;
    const double recoil = 1.0;  // unused by the energies; any positive unit works
    const MomentumSpectrum before = momentum_distribution(psi_before, recoil);
    const Wavefunction after = phase_imprint(psi_before, potential, t, pc);
    const MomentumSpectrum after_spec = momentum_distribution(after, recoil);
    const double gained = mean_kinetic_energy(after_spec, sp.mass, pc) -
                          mean_kinetic_energy(before, sp.mass, pc);
    return gained / vmax;
}

} // namespace liddi
