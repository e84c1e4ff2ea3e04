#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "liddi/constants.hpp"
#include "liddi/fft.hpp"
#include "liddi/field.hpp"
#include "liddi/fitting.hpp"
#include "liddi/species.hpp"

namespace liddi {

/// Single lattice site: tight harmonic confinement along z (the lattice,
/// quoted by its resulting trap frequency) and a weak radial harmonic trap.
struct TrapParams {
    double omega_radial = two_pi * 1.0e3;   // [rad/s]
    double omega_axial = two_pi * 105.0e3;  // [rad/s]
    double lattice_depth_recoils = 100.0;   // informational
    double lattice_wavelength = 785.0e-9;   // [m]

    void validate() const {
        if (!(omega_radial > 0) || !(omega_axial > 0))
            throw std::invalid_argument("TrapParams: trap frequencies must be positive");
        if (!(lattice_wavelength > 0))
            throw std::invalid_argument("TrapParams: lattice wavelength must be positive");
    }

    bool pancake_regime() const { return omega_axial > 10.0 * omega_radial; }
};

/// Condensate amplitude on the grid, normalized to the atom number:
/// integral of |psi|^2 d3r = atom_number.
struct Wavefunction {
    ComplexField3D field;
    double atom_number = 0.0;

    void validate() const {
        double n = 0.0;
        for (const auto& v : field.values) n += std::norm(v);
        const double h = field.grid.spacing;
        n *= h * h * h;
        if (std::abs(n - atom_number) > 1e-9 * std::max(atom_number, 1.0))
            throw std::runtime_error("Wavefunction: norm does not match atom number");
    }
};

struct GroundStateReport {
    double chemical_potential_hz = 0.0;  // mu/h, from (Ekin + Etrap + 2 Eint)/N
    double peak_density = 0.0;           // [m^-3]
    double tf_radius_radial = 0.0;       // [m], inverted-parabola fit
    double axial_1e2_radius = 0.0;       // [m], 2 sigma of the axial density Gaussian
    double kinetic_hz = 0.0;             // per atom
    double trap_hz = 0.0;                // per atom
    double interaction_hz = 0.0;         // per atom
    int iterations = 0;
    double residual = 0.0;               // last relative energy change
    std::vector<std::string> warnings;
};

struct GpeOptions {
    double dtau = 2.0e-7;      // imaginary-time step [s]
    double tolerance = 1e-9;   // relative energy change per step
    int max_iter = 40000;
    std::vector<double>* energy_trace = nullptr;  // total energy per iteration [J]
};

inline double contact_coupling(const SpeciesParams& sp, const PhysicalConstants& pc = {}) {
    return 4.0 * pi * pc.hbar * pc.hbar * sp.a_s / sp.mass;
}

inline double oscillator_length(double mass, double omega, const PhysicalConstants& pc = {}) {
    return std::sqrt(pc.hbar / (mass * omega));
}

/// Radial Thomas-Fermi radius of the pancake in the quasi-2D limit, where
/// the axial profile is the oscillator ground state:
///   g2d = g / (sqrt(2 pi) a_z),  mu2d = sqrt(m wr^2 g2d N / pi),
///   R = sqrt(2 mu2d / (m wr^2)).
/// Falls back to twice the radial oscillator length for an ideal gas.
inline double tf_radius_estimate(const TrapParams& trap, const SpeciesParams& sp,
                                 double atom_number, const PhysicalConstants& pc = {}) {
    const double a_r = oscillator_length(sp.mass, trap.omega_radial, pc);
    if (sp.a_s <= 0.0 || atom_number <= 0.0) return 2.0 * a_r;
    const double a_z = oscillator_length(sp.mass, trap.omega_axial, pc);
    const double g2d = contact_coupling(sp, pc) / (std::sqrt(2.0 * pi) * a_z);
    const double mu2d =
        std::sqrt(sp.mass * trap.omega_radial * trap.omega_radial * g2d * atom_number / pi);
    const double r = std::sqrt(2.0 * mu2d / (sp.mass * trap.omega_radial * trap.omega_radial));
    return std::max(r, 2.0 * a_r);
}

/// Radial parabola profile with an axial density Gaussian of the given
/// sigma; peak_density sits at the center. Test and sweep helper.
inline ScalarField3D make_pancake_density(const GridSpec& grid, double peak_density,
                                          double tf_radius, double axial_sigma) {
    ScalarField3D out(grid, "density_m^-3");
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j) {
            const double x = grid.coordinate(0, i);
            const double y = grid.coordinate(1, j);
            const double radial = 1.0 - (x * x + y * y) / (tf_radius * tf_radius);
            if (radial <= 0.0) continue;
            for (int k = 0; k < grid.n[2]; ++k) {
                const double z = grid.coordinate(2, k);
                out.at(i, j, k) =
                    peak_density * radial * std::exp(-z * z / (2.0 * axial_sigma * axial_sigma));
            }
        }
    return out;
}

namespace detail {

struct GpeEnergies {
    double kinetic = 0.0, trap = 0.0, interaction = 0.0;  // totals [J]
    double total() const { return kinetic + trap + interaction; }
};

/// Energy functional on the solver slab. psi is real (imaginary-time
/// evolution of a nodeless initial state stays real and positive).
class SlabWorkspace {
public:
    SlabWorkspace(const GridSpec& grid, int nz_slab, double mass, double g,
                  const TrapParams& trap, const PhysicalConstants& pc)
        : grid_(grid), nz_(nz_slab), z_off_((grid.n[2] - nz_slab) / 2),
          buf_(grid.n[0], grid.n[1], nz_slab), mass_(mass), g_(g) {
        const int nx = grid.n[0], ny = grid.n[1];
        psi_.resize(static_cast<std::size_t>(nx) * ny * nz_);
        vtrap_.resize(psi_.size());
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j)
                for (int k = 0; k < nz_; ++k) {
                    const double x = grid.coordinate(0, i);
                    const double y = grid.coordinate(1, j);
                    const double z = grid.coordinate(2, k + z_off_);
                    vtrap_[at(i, j, k)] =
                        0.5 * mass *
                        (trap.omega_radial * trap.omega_radial * (x * x + y * y) +
                         trap.omega_axial * trap.omega_axial * z * z);
                }
        // spectral kinetic factors per axis
        kin_x_.resize(nx); kin_y_.resize(ny); kin_z_.resize(nz_ / 2 + 1);
        const double pref = pc.hbar * pc.hbar / (2.0 * mass);
        for (int i = 0; i < nx; ++i) {
            const double k = grid.wavenumber(0, i);
            kin_x_[i] = pref * k * k;
        }
        for (int j = 0; j < ny; ++j) {
            const double k = grid.wavenumber(1, j);
            kin_y_[j] = pref * k * k;
        }
        for (int k = 0; k <= nz_ / 2; ++k) {
            const double kz = two_pi * k / (nz_ * grid.spacing);
            kin_z_[k] = pref * kz * kz;
        }
        hbar_ = pc.hbar;
    }

    std::size_t at(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * grid_.n[1] + j) * nz_ + k;
    }

    std::vector<double>& psi() { return psi_; }
    int nz() const { return nz_; }
    int z_offset() const { return z_off_; }

    void renormalize(double atom_number) {
        double n = 0.0;
        for (double v : psi_) n += v * v;
        const double h = grid_.spacing;
        n *= h * h * h;
        const double s = std::sqrt(atom_number / n);
        for (double& v : psi_) v *= s;
    }

    void half_potential_step(double dtau) {
        const double c = -0.5 * dtau / hbar_;
        for (std::size_t idx = 0; idx < psi_.size(); ++idx) {
            const double dens = psi_[idx] * psi_[idx];
            psi_[idx] *= std::exp(c * (vtrap_[idx] + g_ * dens));
        }
    }

    void kinetic_step(double dtau) {
        load_buffer();
        buf_.forward();
        const double norm = buf_.norm_factor();
        for (int i = 0; i < grid_.n[0]; ++i)
            for (int j = 0; j < grid_.n[1]; ++j)
                for (int k = 0; k <= nz_ / 2; ++k) {
                    const double e = kin_x_[i] + kin_y_[j] + kin_z_[k];
                    buf_.spectral(i, j, k) *= std::exp(-dtau * e / hbar_) * norm;
                }
        buf_.backward();
        store_buffer();
    }

    GpeEnergies energies() {
        GpeEnergies e;
        const double h = grid_.spacing;
        const double dv = h * h * h;
        for (std::size_t idx = 0; idx < psi_.size(); ++idx) {
            const double dens = psi_[idx] * psi_[idx];
            e.trap += vtrap_[idx] * dens;
            e.interaction += 0.5 * g_ * dens * dens;
        }
        e.trap *= dv;
        e.interaction *= dv;
        load_buffer();
        buf_.forward();
        const std::size_t cells =
            static_cast<std::size_t>(grid_.n[0]) * grid_.n[1] * static_cast<std::size_t>(nz_);
        double kin = 0.0;
        for (int i = 0; i < grid_.n[0]; ++i)
            for (int j = 0; j < grid_.n[1]; ++j)
                for (int k = 0; k <= nz_ / 2; ++k) {
                    const double w = (k == 0 || k == nz_ / 2) ? 1.0 : 2.0;
                    kin += w * (kin_x_[i] + kin_y_[j] + kin_z_[k]) *
                           std::norm(buf_.spectral(i, j, k));
                }
        e.kinetic = kin * dv / static_cast<double>(cells);
        return e;
    }

private:
    void load_buffer() {
        for (int i = 0; i < grid_.n[0]; ++i)
            for (int j = 0; j < grid_.n[1]; ++j)
                for (int k = 0; k < nz_; ++k)
                    buf_.real(i, j, k) = psi_[at(i, j, k)];
    }
    void store_buffer() {
        for (int i = 0; i < grid_.n[0]; ++i)
            for (int j = 0; j < grid_.n[1]; ++j)
                for (int k = 0; k < nz_; ++k)
                    psi_[at(i, j, k)] = buf_.real(i, j, k);
    }

    GridSpec grid_;
    int nz_, z_off_;
    PaddedRealBuffer buf_;
    double mass_, g_, hbar_ = 0.0;
    std::vector<double> psi_, vtrap_;
    std::vector<double> kin_x_, kin_y_, kin_z_;
};

} // namespace detail

/// Fits the axially-integrated radial column density to an inverted
/// parabola and returns the Thomas-Fermi radius.
inline ParabolaFit fit_radial_parabola(const ScalarField3D& density) {
    const auto& g = density.grid;
    std::vector<double> rho, val;
    rho.reserve(static_cast<std::size_t>(g.n[0]) * g.n[1]);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            double col = 0.0;
            for (int k = 0; k < g.n[2]; ++k) col += density.at(i, j, k);
            const double x = g.coordinate(0, i), y = g.coordinate(1, j);
            rho.push_back(std::sqrt(x * x + y * y));
            val.push_back(col * g.spacing);
        }
    return fit_inverted_parabola(rho, val);
}

/// Ground-state diagnostics: parabola fit of the radial profile, Gaussian
/// fit of the axial profile (1/e^2 radius = 2 sigma of the density), peak
/// density, energy breakdown and mu/h = (Ekin + Etrap + 2 Eint)/(N h).
inline GroundStateReport diagnostics(const Wavefunction& psi, const TrapParams& trap,
                                     const SpeciesParams& sp, const PhysicalConstants& pc = {}) {
    trap.validate();
    sp.validate(pc);
    const auto& g = psi.field.grid;
    ScalarField3D density(g, "density_m^-3");
    for (std::size_t i = 0; i < density.values.size(); ++i)
        density.values[i] = std::norm(psi.field.values[i]);

    GroundStateReport rep;
    rep.peak_density = *std::max_element(density.values.begin(), density.values.end());

    const Profile1D axial = project(density, 2);
    const GaussianFit zfit = fit_centered_gaussian(axial.position, axial.value);
    rep.axial_1e2_radius = 2.0 * zfit.sigma;
    rep.tf_radius_radial = fit_radial_parabola(density).radius;

    // energies from the complex field
    const double h = g.spacing;
    const double dv = h * h * h;
    const double gcoupling = contact_coupling(sp, pc);
    double etrap = 0.0, eint = 0.0;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const double x = g.coordinate(0, i), y = g.coordinate(1, j),
                             z = g.coordinate(2, k);
                const double vt = 0.5 * sp.mass *
                                  (trap.omega_radial * trap.omega_radial * (x * x + y * y) +
                                   trap.omega_axial * trap.omega_axial * z * z);
                const double dens = density.at(i, j, k);
                etrap += vt * dens;
                eint += 0.5 * gcoupling * dens * dens;
            }
    etrap *= dv;
    eint *= dv;
    ComplexField3D spec = fft3(psi.field, FftDirection::Forward);
    double ekin = 0.0;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const double kx = g.wavenumber(0, i), ky = g.wavenumber(1, j),
                             kz = g.wavenumber(2, k);
                ekin += (kx * kx + ky * ky + kz * kz) * std::norm(spec.at(i, j, k));
            }
    ekin *= pc.hbar * pc.hbar / (2.0 * sp.mass) * dv / static_cast<double>(g.size());

    const double n_atoms = psi.atom_number;
    rep.kinetic_hz = ekin / (n_atoms * pc.h);
    rep.trap_hz = etrap / (n_atoms * pc.h);
    rep.interaction_hz = eint / (n_atoms * pc.h);
    rep.chemical_potential_hz = (ekin + etrap + 2.0 * eint) / (n_atoms * pc.h);
    if (!trap.pancake_regime())
        rep.warnings.push_back("trap is not in the pancake regime (omega_axial <= 10 omega_radial)");
    return rep;
}

/// Imaginary-time split-step ground state of the Gross-Pitaevskii equation
/// with contact coupling g = 4 pi hbar^2 a_s / m.
///
/// Strang splitting between the spectral kinetic step and the pointwise
/// potential-plus-interaction step, renormalizing to the atom number after
/// every step; converged when the relative energy change per step drops
/// below opts.tolerance. The solve runs on an axial sub-slab of the grid
/// wide enough for the oscillator ground state; the returned field lives on
/// the full grid.
inline std::pair<Wavefunction, GroundStateReport> ground_state(
    const TrapParams& trap, const SpeciesParams& sp, double atom_number, const GridSpec& grid,
    const GpeOptions& opts = {}, const PhysicalConstants& pc = {}) {
    trap.validate();
    sp.validate(pc);
    grid.validate();
    if (!(atom_number > 0)) throw std::invalid_argument("ground_state: atom number must be positive");
    if (!(opts.dtau > 0) || !(opts.tolerance > 0) || opts.max_iter < 1)
        throw std::invalid_argument("ground_state: bad solver options");

    const double r_est = tf_radius_estimate(trap, sp, atom_number, pc);
    const double a_z = oscillator_length(sp.mass, trap.omega_axial, pc);
    for (int a = 0; a < 2; ++a)
        if (grid.extent(a) < 2.5 * r_est)
            throw std::invalid_argument(
                "ground_state: transverse grid extent below 2.5 Thomas-Fermi radii (need " +
                std::to_string(2.5 * r_est) + " m)");
    if (grid.extent(2) < 6.0 * a_z)
        throw std::invalid_argument("ground_state: axial grid extent below 6 oscillator lengths");

    // axial slab: at least 10 oscillator lengths, at most the full grid
    int nz_slab = static_cast<int>(std::ceil(10.0 * a_z / grid.spacing));
    nz_slab += nz_slab % 2;
    nz_slab = std::clamp(nz_slab, 4, grid.n[2]);

    const double g = contact_coupling(sp, pc);
    detail::SlabWorkspace ws(grid, nz_slab, sp.mass, g, trap, pc);

    // initial guess: radial Thomas-Fermi profile (or oscillator Gaussian for
    // an ideal gas) times the axial oscillator ground state
    {
        const double a_r = oscillator_length(sp.mass, trap.omega_radial, pc);
        const double g2d = g > 0 ? g / (std::sqrt(2.0 * pi) * a_z) : 0.0;
        const double mu2d =
            g2d > 0
                ? std::sqrt(sp.mass * trap.omega_radial * trap.omega_radial * g2d * atom_number / pi)
                : 0.0;
        auto& psi = ws.psi();
        for (int i = 0; i < grid.n[0]; ++i)
            for (int j = 0; j < grid.n[1]; ++j)
                for (int k = 0; k < nz_slab; ++k) {
                    const double x = grid.coordinate(0, i);
                    const double y = grid.coordinate(1, j);
                    const double z = grid.coordinate(2, k + ws.z_offset());
                    const double rho2 = x * x + y * y;
                    double radial;
                    if (g2d > 0) {
                        const double n2d =
                            (mu2d - 0.5 * sp.mass * trap.omega_radial * trap.omega_radial * rho2) /
                            g2d;
                        radial = n2d > 0 ? std::sqrt(n2d) : 0.0;
                    } else {
                        radial = std::exp(-rho2 / (2.0 * a_r * a_r));
                    }
                    psi[ws.at(i, j, k)] = radial * std::exp(-z * z / (2.0 * a_z * a_z));
                }
        ws.renormalize(atom_number);
    }

    double prev_energy = ws.energies().total();
    if (opts.energy_trace) opts.energy_trace->push_back(prev_energy);
    int iter = 0;
    double rel = std::numeric_limits<double>::max();
    for (iter = 1; iter <= opts.max_iter; ++iter) {
        ws.half_potential_step(opts.dtau);
        ws.kinetic_step(opts.dtau);
        ws.half_potential_step(opts.dtau);
        ws.renormalize(atom_number);
        const double e = ws.energies().total();
        if (opts.energy_trace) opts.energy_trace->push_back(e);
        rel = std::abs(e - prev_energy) / std::max(std::abs(e), 1e-300);
        prev_energy = e;
        if (rel < opts.tolerance) break;
    }
    if (rel >= opts.tolerance)
        throw std::runtime_error("ground_state: not converged within max_iter");

    Wavefunction out;
    out.field = ComplexField3D(grid, "sqrt_density_m^-1.5");
    out.atom_number = atom_number;
    const auto& psi = ws.psi();
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < nz_slab; ++k)
                out.field.at(i, j, k + ws.z_offset()) = psi[ws.at(i, j, k)];

    GroundStateReport rep = diagnostics(out, trap, sp, pc);
    rep.iterations = iter;
    rep.residual = rel;
    return {std::move(out), std::move(rep)};
}

/// Rescales the transverse coordinate of the density so the fitted
/// Thomas-Fermi radius becomes new_tf_radius. With keep_peak_density the
/// peak stays fixed and the atom number scales with the area; otherwise the
/// amplitude is rescaled to preserve the atom number.
inline Wavefunction scale_density(const Wavefunction& psi, double new_tf_radius,
                                  bool keep_peak_density) {
    if (!(new_tf_radius > 0))
        throw std::invalid_argument("scale_density: target radius must be positive");
    const auto& g = psi.field.grid;
    ScalarField3D density(g, "density_m^-3");
    for (std::size_t i = 0; i < density.values.size(); ++i)
        density.values[i] = std::norm(psi.field.values[i]);

    const double r_cur = fit_radial_parabola(density).radius;
    const double gamma = new_tf_radius / r_cur;

    // radius of the occupied region, to reject clouds that would overflow
    const double peak = *std::max_element(density.values.begin(), density.values.end());
    double rho_max = 0.0;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k)
                if (density.at(i, j, k) > 1e-8 * peak) {
                    const double x = g.coordinate(0, i), y = g.coordinate(1, j);
                    rho_max = std::max(rho_max, std::sqrt(x * x + y * y));
                }
    const double half_extent = 0.5 * std::min(g.extent(0), g.extent(1));
    if (gamma * rho_max > 0.99 * half_extent)
        throw std::runtime_error("scale_density: rescaled cloud exceeds the grid");

    Wavefunction out;
    out.field = ComplexField3D(g, psi.field.unit);
    const double amp = keep_peak_density ? 1.0 : 1.0 / gamma;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j) {
            // bilinear sample of the density at the shrunk coordinate
            const double xs = g.coordinate(0, i) / gamma;
            const double ys = g.coordinate(1, j) / gamma;
            const double fi = (xs - g.origin[0]) / g.spacing;
            const double fj = (ys - g.origin[1]) / g.spacing;
            if (fi < 0 || fj < 0 || fi > g.n[0] - 1 || fj > g.n[1] - 1) continue;
            const int i0 = std::min(static_cast<int>(std::floor(fi)), g.n[0] - 2);
            const int j0 = std::min(static_cast<int>(std::floor(fj)), g.n[1] - 2);
            const double wi = fi - i0, wj = fj - j0;
            for (int k = 0; k < g.n[2]; ++k) {
                const double d00 = density.at(i0, j0, k), d10 = density.at(i0 + 1, j0, k);
                const double d01 = density.at(i0, j0 + 1, k), d11 = density.at(i0 + 1, j0 + 1, k);
                const double d = (1 - wi) * ((1 - wj) * d00 + wj * d01) +
                                 wi * ((1 - wj) * d10 + wj * d11);
                out.field.at(i, j, k) = amp * std::sqrt(std::max(d, 0.0));
            }
        }
    double n = 0.0;
    for (const auto& v : out.field.values) n += std::norm(v);
    out.atom_number = n * g.spacing * g.spacing * g.spacing;
    return out;
}

} // namespace liddi
