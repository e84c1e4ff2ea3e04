#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "liddi/constants.hpp"

namespace liddi {

/// Boundary handling per axis when the grid is used in a convolution:
/// Padded axes are zero-padded (aperiodic physics), Periodic axes wrap.
enum class Boundary { Padded, Periodic };

inline const char* to_string(Boundary b) {
    return b == Boundary::Padded ? "padded" : "periodic";
}

/// Uniform simple-cubic lattice: equal spacing on all axes, z fastest in
/// memory. Index (i,j,k) sits at origin + spacing*(i,j,k).
struct GridSpec {
    std::array<int, 3> n{64, 64, 128};
    double spacing = 785.0e-9 / 32.0;  // lattice-laser wavelength / 32
    std::array<double, 3> origin{};
    std::array<Boundary, 3> boundary{Boundary::Padded, Boundary::Padded, Boundary::Padded};

    /// Grid centered so that index (nx/2, ny/2, nz/2) is r = 0.
    static GridSpec centered(int nx, int ny, int nz, double h) {
        GridSpec g;
        g.n = {nx, ny, nz};
        g.spacing = h;
        g.origin = {-h * (nx / 2), -h * (ny / 2), -h * (nz / 2)};
        g.validate();
        return g;
    }

    /// 64 x 64 x 128 at 24.5 nm spacing (785 nm / 32), centered.
    static GridSpec paper_default() { return centered(64, 64, 128, 785.0e-9 / 32.0); }

    void validate() const {
        for (int a = 0; a < 3; ++a) {
            if (n[a] < 4) throw std::invalid_argument("GridSpec: need at least 4 points per axis");
            if (n[a] % 2 != 0) throw std::invalid_argument("GridSpec: axis sizes must be even");
        }
        if (!(spacing > 0)) throw std::invalid_argument("GridSpec: spacing must be positive");
    }

    std::size_t size() const {
        return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
               static_cast<std::size_t>(n[2]);
    }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n[1] + j) * n[2] + k;
    }

    double coordinate(int axis, int i) const { return origin[axis] + spacing * i; }

    std::array<double, 3> position(int i, int j, int k) const {
        return {coordinate(0, i), coordinate(1, j), coordinate(2, k)};
    }

    /// Physical extent n*spacing along an axis.
    double extent(int axis) const { return n[axis] * spacing; }

    /// DFT wavenumber of spectral index m: 2*pi*m_alias/(n*spacing) with the
    /// signed alias m_alias = m for m < n/2 and m - n otherwise.
    double wavenumber(int axis, int m) const {
        const int alias = (m <= n[axis] / 2) ? m : m - n[axis];
        return two_pi * alias / (n[axis] * spacing);
    }

    double spectral_spacing(int axis) const { return two_pi / (n[axis] * spacing); }

    bool same_layout(const GridSpec& o) const {
        return n == o.n && std::abs(spacing - o.spacing) <= 1e-15 * spacing &&
               std::abs(origin[0] - o.origin[0]) <= 1e-9 * spacing &&
               std::abs(origin[1] - o.origin[1]) <= 1e-9 * spacing &&
               std::abs(origin[2] - o.origin[2]) <= 1e-9 * spacing;
    }

    /// True when index (nx/2, ny/2, nz/2) lies at r = 0.
    bool is_centered() const {
        for (int a = 0; a < 3; ++a)
            if (std::abs(origin[a] + spacing * (n[a] / 2)) > 1e-9 * spacing) return false;
        return true;
    }
};

/// Validates the spec and returns it as the usable grid handle.
inline GridSpec make_grid(const GridSpec& spec) {
    spec.validate();
    return spec;
}

} // namespace liddi
