#pragma once

#include <cmath>
#include <stdexcept>

#include "liddi/constants.hpp"
#include "liddi/field.hpp"
#include "liddi/vec.hpp"

namespace liddi {

/// Two driven dipoles of equal magnitude d, oscillating in phase with the
/// driving wave (wave vector k_vec) and oriented along the common linear
/// polarization.
struct KernelParams {
    double d = 0.0;          // steady-state dipole magnitude [C m]
    Vec3 k_vec{0.0, 0.0, 0.0};  // driving-field wave vector [rad/m]
    Vec3 polarization{1.0, 0.0, 0.0};  // unit vector, perpendicular to k_vec
    double epsilon0 = PhysicalConstants{}.epsilon0;

    void validate() const {
        if (d < 0) throw std::invalid_argument("KernelParams: d must be non-negative");
        if (std::abs(norm(polarization) - 1.0) > 1e-12)
            throw std::invalid_argument("KernelParams: polarization must be a unit vector");
        const double k = norm(k_vec);
        if (k > 0 && std::abs(dot(polarization, k_vec)) > 1e-12 * k)
            throw std::invalid_argument("KernelParams: polarization must be perpendicular to k_vec");
    }
};

namespace detail {

/// Angle-independent pieces of the retarded pair interaction at displacement
/// r: with kr = |k||r|,
///   t1 = cos(kr) + kr sin(kr)   (near field + intermediate field)
///   t2 = (kr)^2 cos(kr)         (far field)
///   pref = d^2 cos(k.r) / (4 pi eps0 r^3)
/// and the full kernel is pref * [(t1 - t2) - cos^2(alpha) * (3 t1 - t2)]
/// where alpha is the angle between the polarization and r.
struct KernelTerms {
    double pref;
    double t1;
    double t2;
};

inline KernelTerms kernel_terms(const Vec3& r, double d, const Vec3& k_vec, double epsilon0) {
    const double r2 = dot(r, r);
    const double rr = std::sqrt(r2);
    const double k = norm(k_vec);
    const double kr = k * rr;
    const double cos_kr = std::cos(kr);
    KernelTerms t;
    t.t1 = cos_kr + kr * std::sin(kr);
    t.t2 = kr * kr * cos_kr;
    t.pref = d * d * std::cos(dot(k_vec, r)) / (4.0 * pi * epsilon0 * r2 * rr);
    return t;
}

} // namespace detail

/// Retarded dipole-dipole interaction energy of two parallel driven dipoles
/// separated by r [J]. r = 0 is a domain error; regularization of the
/// self-cell happens in tabulate_kernel.
inline double kernel_value(const Vec3& r, const KernelParams& p) {
    const double rr = norm(r);
    if (!(rr > 0)) throw std::domain_error("kernel_value: r must be nonzero");
    const auto t = detail::kernel_terms(r, p.d, p.k_vec, p.epsilon0);
    const double ca = dot(p.polarization, r) / rr;
    const double ca2 = ca * ca;
    return t.pref * ((1.0 - 3.0 * ca2) * t.t1 - (1.0 - ca2) * t.t2);
}

/// Samples kernel_value at every grid displacement of a centered grid.
/// The r = 0 cell is set to zero: a dipole does not interact with itself.
inline ScalarField3D tabulate_kernel(const GridSpec& grid, const KernelParams& p) {
    p.validate();
    grid.validate();
    if (!grid.is_centered())
        throw std::invalid_argument("tabulate_kernel: grid must be centered on the origin");
    ScalarField3D out(grid, "energy_J");
    for (int i = 0; i < grid.n[0]; ++i)
        for (int j = 0; j < grid.n[1]; ++j)
            for (int k = 0; k < grid.n[2]; ++k) {
                const Vec3 r = grid.position(i, j, k);
                const bool origin_cell =
                    (i == grid.n[0] / 2) && (j == grid.n[1] / 2) && (k == grid.n[2] / 2);
                out.at(i, j, k) = origin_cell ? 0.0 : kernel_value(r, p);
            }
    return out;
}

/// Decomposition of the kernel over polarization angle for a beam along y
/// with the polarization e(phi) = (cos phi, 0, sin phi):
///   K(phi) = iso + cos^2(phi) xx + 2 cos(phi) sin(phi) xz + sin^2(phi) zz.
/// Exact identity; lets an angle sweep reuse four tabulations.
struct KernelComponents {
    double iso, xx, xz, zz;
};

inline KernelComponents kernel_components(const Vec3& r, double d, const Vec3& k_vec,
                                          double epsilon0) {
    const double r2 = dot(r, r);
    const auto t = detail::kernel_terms(r, d, k_vec, epsilon0);
    const double common = -t.pref * (3.0 * t.t1 - t.t2);
    const double rx2 = r[0] * r[0] / r2;
    const double rxz = r[0] * r[2] / r2;
    const double rz2 = r[2] * r[2] / r2;
    return {t.pref * (t.t1 - t.t2), common * rx2, common * rxz, common * rz2};
}

struct AngleWeights {
    double iso = 1.0, xx = 0.0, xz = 0.0, zz = 0.0;
};

inline AngleWeights angle_weights(double phi_deg) {
    const double phi = phi_deg * pi / 180.0;
    const double c = std::cos(phi), s = std::sin(phi);
    return {1.0, c * c, 2.0 * c * s, s * s};
}

} // namespace liddi
