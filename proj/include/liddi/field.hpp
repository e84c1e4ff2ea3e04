#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "liddi/grid.hpp"

namespace liddi {

using cdouble = std::complex<double>;

/// Dense field over a GridSpec, row-major with z fastest. The unit tag is a
/// free-form label carried through I/O (e.g. "density_m^-3", "potential_J").
template <class T>
struct Field3D {
    GridSpec grid;
    std::vector<T> values;
    std::string unit;

    Field3D() = default;
    explicit Field3D(const GridSpec& g, std::string unit_tag = {})
        : grid(make_grid(g)), values(g.size(), T{}), unit(std::move(unit_tag)) {}

    T& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    const T& at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }

    void check_finite() const {
        for (const T& v : values)
            if (!is_finite(v)) throw std::runtime_error("Field3D: non-finite value");
    }

private:
    static bool is_finite(double v) { return std::isfinite(v); }
    static bool is_finite(const cdouble& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    }
};

using ScalarField3D = Field3D<double>;
using ComplexField3D = Field3D<cdouble>;

/// 1D profile extracted from a field (projection or axis cut).
struct Profile1D {
    std::vector<double> position;
    std::vector<double> value;
    double spacing = 0.0;
};

/// Riemann sum times cell volume.
inline double integrate(const ScalarField3D& f) {
    double acc = 0.0;
    for (double v : f.values) acc += v;
    const double h = f.grid.spacing;
    return acc * h * h * h;
}

/// Integral of the field over the two orthogonal axes: sum times spacing^2.
/// Preserves the total integral: sum(project)*spacing == integrate(field).
inline Profile1D project(const ScalarField3D& f, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("project: axis must be 0, 1 or 2");
    const auto& g = f.grid;
    Profile1D p;
    p.spacing = g.spacing;
    p.position.resize(g.n[axis]);
    p.value.assign(g.n[axis], 0.0);
    for (int i = 0; i < g.n[axis]; ++i) p.position[i] = g.coordinate(axis, i);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const int idx = (axis == 0) ? i : (axis == 1) ? j : k;
                p.value[idx] += f.at(i, j, k);
            }
    const double h2 = g.spacing * g.spacing;
    for (double& v : p.value) v *= h2;
    return p;
}

inline double max_abs(const ScalarField3D& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

} // namespace liddi
