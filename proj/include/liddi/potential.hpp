#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "liddi/dipole_kernel.hpp"
#include "liddi/fft.hpp"
#include "liddi/field.hpp"

namespace liddi {

/// How contributions of the neighboring pancakes along z are superposed.
///
/// Truncated sums over +-M translated copies of the density at the stack
/// period. PeriodicZ tiles the density at every period position inside the
/// box and wraps the z axis, so every atom interacts with sources within
/// half a box length; the box must hold an integer number of periods.
enum class StackMode { Truncated, PeriodicZ };

struct StackSpec {
    double period = 785.0e-9 / 2.0;   // pancake separation [m]
    StackMode mode = StackMode::Truncated;
    int pancakes_per_side = 64;       // M in Truncated mode
    double convergence_tol = 1e-3;    // relative; <= 0 disables the check
    int m_cap = 1024;                 // escalation limit in Truncated mode

    void validate() const {
        if (!(period > 0)) throw std::invalid_argument("StackSpec: period must be positive");
        if (pancakes_per_side < 0)
            throw std::invalid_argument("StackSpec: pancake count must be non-negative");
        if (m_cap < pancakes_per_side)
            throw std::invalid_argument("StackSpec: m_cap below pancake count");
    }
};

struct StackReport {
    int m_used = 0;               // pancakes per side actually summed
    double last_increment = 0.0;  // relative change of the last doubling check
    bool checked = false;         // whether the convergence check ran
};

struct PotentialResult {
    ScalarField3D potential;
    StackReport stack;
};

namespace detail {

constexpr double kSelfCellEps = 1e-9;  // fraction of a cell treated as zero displacement

struct ConvPlan {
    GridSpec grid;
    StackSpec stack;
    int px, py, pz;       // FFT box dimensions
    int period_cells;     // stack period in cells when commensurate, else 0
    bool zwrap;           // PeriodicZ

    int wrapped_alias(int idx, int pn) const { return idx <= pn / 2 ? idx : idx - pn; }
};

inline ConvPlan make_conv_plan(const GridSpec& grid, const StackSpec& stack) {
    grid.validate();
    stack.validate();
    ConvPlan plan{grid, stack, 0, 0, 0, 0, stack.mode == StackMode::PeriodicZ};
    plan.px = grid.boundary[0] == Boundary::Padded ? 2 * grid.n[0] : grid.n[0];
    plan.py = grid.boundary[1] == Boundary::Padded ? 2 * grid.n[1] : grid.n[1];

    const double cells = stack.period / grid.spacing;
    const int p = static_cast<int>(std::lround(cells));
    if (p > 0 && std::abs(cells - p) < 1e-9) plan.period_cells = p;

    if (plan.zwrap) {
        if (grid.boundary[2] != Boundary::Periodic)
            throw std::invalid_argument(
                "induced_potential: PeriodicZ stacking requires a periodic z boundary");
        if (plan.period_cells == 0)
            throw std::invalid_argument(
                "induced_potential: stack period must be an integer number of cells in PeriodicZ mode");
        if (grid.n[2] % plan.period_cells != 0)
            throw std::invalid_argument(
                "induced_potential: box must hold an integer number of stack periods in PeriodicZ mode");
        plan.pz = grid.n[2];
    } else {
        if (grid.boundary[2] == Boundary::Periodic)
            throw std::invalid_argument(
                "induced_potential: Truncated stacking requires a padded z boundary");
        plan.pz = 2 * grid.n[2];
    }
    return plan;
}

/// Tiles the single-pancake density at every period position inside the box.
inline std::vector<double> replicate_density_z(const ScalarField3D& density, int period_cells) {
    const auto& g = density.grid;
    const int q = g.n[2] / period_cells;
    std::vector<double> out(density.values.size(), 0.0);
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const double v = density.at(i, j, k);
                if (v == 0.0) continue;
                for (int copy = 0; copy < q; ++copy)
                    out[g.index(i, j, (k + copy * period_cells) % g.n[2])] += v;
            }
    return out;
}

/// Evaluator writing NC kernel components at a displacement; must produce
/// all zeros for the zero displacement (self interaction).
template <int NC, class F>
void tabulate_images(std::array<PaddedRealBuffer*, NC> bufs, F&& eval, const ConvPlan& plan,
                     const std::vector<int>& images) {
    const double h = plan.grid.spacing;
    const double eps2 = (kSelfCellEps * h) * (kSelfCellEps * h);
    const double period = plan.stack.period;

    int m_max = 0;
    for (int m : images) m_max = std::max(m_max, std::abs(m));

    const bool fold = plan.period_cells > 0 && !plan.zwrap &&
                      (plan.pz + 2 * m_max * plan.period_cells) <
                          plan.pz * static_cast<int>(images.size());

    std::array<double, NC> vals{};
    auto eval_at = [&](double dx, double dy, double dz, std::array<double, NC>& out) {
        if (dx * dx + dy * dy + dz * dz < eps2) {
            out.fill(0.0);
            return;
        }
        eval(Vec3{dx, dy, dz}, out.data());
    };

    if (fold) {
        const int p = plan.period_cells;
        const int lo = -(plan.pz / 2 - 1) - m_max * p;
        const int len = plan.pz + 2 * m_max * p;
        std::vector<double> raw(static_cast<std::size_t>(len) * NC);
        for (int i = 0; i < plan.px; ++i) {
            const double dx = plan.wrapped_alias(i, plan.px) * h;
            for (int j = 0; j < plan.py; ++j) {
                const double dy = plan.wrapped_alias(j, plan.py) * h;
                for (int t = 0; t < len; ++t) {
                    eval_at(dx, dy, (lo + t) * h, vals);
                    for (int c = 0; c < NC; ++c) raw[static_cast<std::size_t>(t) * NC + c] = vals[c];
                }
                for (int k = 0; k < plan.pz; ++k) {
                    const int a = plan.wrapped_alias(k, plan.pz);
                    std::array<double, NC> acc{};
                    for (int m : images) {
                        const std::size_t t = static_cast<std::size_t>(a - m * p - lo) * NC;
                        for (int c = 0; c < NC; ++c) acc[c] += raw[t + c];
                    }
                    for (int c = 0; c < NC; ++c) bufs[c]->real(i, j, k) = acc[c];
                }
            }
        }
        return;
    }

    for (int i = 0; i < plan.px; ++i) {
        const double dx = plan.wrapped_alias(i, plan.px) * h;
        for (int j = 0; j < plan.py; ++j) {
            const double dy = plan.wrapped_alias(j, plan.py) * h;
            for (int k = 0; k < plan.pz; ++k) {
                const double dz = plan.wrapped_alias(k, plan.pz) * h;
                std::array<double, NC> acc{};
                for (int m : images) {
                    eval_at(dx, dy, dz - m * period, vals);
                    for (int c = 0; c < NC; ++c) acc[c] += vals[c];
                }
                for (int c = 0; c < NC; ++c) bufs[c]->real(i, j, k) = acc[c];
            }
        }
    }
}

/// Owns the FFT box and the density spectrum for one convolution geometry.
class ConvEngine {
public:
    ConvEngine(const ScalarField3D& density, const StackSpec& stack)
        : plan_(make_conv_plan(density.grid, stack)), density_spec_(plan_.px, plan_.py, plan_.pz) {
        const auto& g = density.grid;
        const double* src = density.values.data();
        std::vector<double> replicated;
        if (plan_.zwrap) {
            replicated = replicate_density_z(density, plan_.period_cells);
            src = replicated.data();
        }
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j)
                for (int k = 0; k < g.n[2]; ++k)
                    density_spec_.real(i, j, k) = src[g.index(i, j, k)];
        density_spec_.forward();
    }

    const ConvPlan& plan() const { return plan_; }

    /// Convolves a tabulated kernel buffer with the stored density spectrum
    /// and accumulates scale * result over the physical box into out.
    void convolve_accumulate(PaddedRealBuffer& kernel_buf, ScalarField3D& out,
                             double scale = 1.0) const {
        kernel_buf.forward();
        const double h = plan_.grid.spacing;
        const double weight = h * h * h * kernel_buf.norm_factor();
        cdouble* k = kernel_buf.spectral_data();
        const cdouble* d =
            const_cast<PaddedRealBuffer&>(density_spec_).spectral_data();
        const std::size_t nspec = kernel_buf.spectral_count();
        for (std::size_t idx = 0; idx < nspec; ++idx) k[idx] *= d[idx] * weight;
        kernel_buf.backward();
        const auto& g = plan_.grid;
        for (int i = 0; i < g.n[0]; ++i)
            for (int j = 0; j < g.n[1]; ++j)
                for (int kk = 0; kk < g.n[2]; ++kk)
                    out.at(i, j, kk) += scale * kernel_buf.real(i, j, kk);
    }

private:
    ConvPlan plan_;
    PaddedRealBuffer density_spec_;
};

inline std::vector<int> image_range(int lo, int hi, bool with_zero) {
    std::vector<int> v;
    if (with_zero) v.push_back(0);
    for (int m = lo; m <= hi; ++m) {
        v.push_back(m);
        v.push_back(-m);
    }
    return v;
}

inline void check_density(const ScalarField3D& density) {
    for (double v : density.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("induced_potential: density not finite");
        if (v < 0.0) throw std::invalid_argument("induced_potential: density must be non-negative");
    }
}

} // namespace detail

/// Interaction potential V(r0) = integral of kernel(r0 - r) n(r) d3r on the
/// density's grid, evaluated as an FFT convolution. Transverse axes flagged
/// Padded are zero-padded to twice their extent; the z axis follows the
/// stacking mode. In Truncated mode the pancake count doubles until the
/// potential changes by less than convergence_tol, starting from
/// pancakes_per_side (skipped when convergence_tol <= 0).
inline PotentialResult induced_potential(const ScalarField3D& density, const KernelParams& kp,
                                         const StackSpec& stack) {
    kp.validate();
    detail::check_density(density);
    detail::ConvEngine engine(density, stack);
    const auto& plan = engine.plan();

    auto eval = [&kp](const Vec3& r, double* out) { out[0] = kernel_value(r, kp); };
    auto run_images = [&](const std::vector<int>& images) {
        PaddedRealBuffer buf(plan.px, plan.py, plan.pz);
        detail::tabulate_images<1>({&buf}, eval, plan, images);
        ScalarField3D v(density.grid, "potential_J");
        engine.convolve_accumulate(buf, v);
        return v;
    };

    if (plan.zwrap) {
        ScalarField3D v = run_images({0});
        return {std::move(v), StackReport{0, 0.0, false}};
    }

    int m = stack.pancakes_per_side;
    ScalarField3D v = run_images(detail::image_range(1, m, true));
    if (stack.convergence_tol <= 0.0) return {std::move(v), StackReport{m, 0.0, false}};

    while (true) {
        ScalarField3D inc = run_images(detail::image_range(m + 1, 2 * m, false));
        ScalarField3D v2 = v;
        for (std::size_t i = 0; i < v2.values.size(); ++i) v2.values[i] += inc.values[i];
        const double scale = max_abs(v2);
        const double rel = scale > 0.0 ? max_abs(inc) / scale : 0.0;
        if (rel <= stack.convergence_tol)
            return {std::move(v), StackReport{m, rel, true}};
        v = std::move(v2);
        m *= 2;
        if (2 * m > stack.m_cap)
            throw std::runtime_error(
                "induced_potential: stack sum not converged at m_cap (relative increment " +
                std::to_string(rel) + ")");
    }
}

/// Brute-force evaluation of the same superposition, O(N^2) over cells.
/// Oracle companion of induced_potential; refuses large grids.
inline ScalarField3D direct_sum_potential(const ScalarField3D& density, const KernelParams& kp,
                                          const StackSpec& stack, std::size_t cell_cap = 4096) {
    kp.validate();
    detail::check_density(density);
    const auto plan = detail::make_conv_plan(density.grid, stack);
    const auto& g = density.grid;
    if (g.size() > cell_cap)
        throw std::invalid_argument("direct_sum_potential: grid exceeds the cell cap");

    const double h = g.spacing;
    const double cell_volume = h * h * h;
    const double eps2 = (detail::kSelfCellEps * h) * (detail::kSelfCellEps * h);

    const double* src = density.values.data();
    std::vector<double> replicated;
    std::vector<int> images;
    if (plan.zwrap) {
        replicated = detail::replicate_density_z(density, plan.period_cells);
        src = replicated.data();
        images = {0};
    } else {
        images = detail::image_range(1, stack.pancakes_per_side, true);
    }

    auto axis_delta = [&](int di, int axis) -> double {
        if (g.boundary[axis] == Boundary::Periodic || (axis == 2 && plan.zwrap)) {
            const int n = g.n[axis];
            int w = ((di % n) + n) % n;
            if (w > n / 2) w -= n;
            return w * h;
        }
        return di * h;
    };

    ScalarField3D out(g, "potential_J");
    for (int ti = 0; ti < g.n[0]; ++ti)
        for (int tj = 0; tj < g.n[1]; ++tj)
            for (int tk = 0; tk < g.n[2]; ++tk) {
                double acc = 0.0;
                for (int si = 0; si < g.n[0]; ++si) {
                    const double dx = axis_delta(ti - si, 0);
                    for (int sj = 0; sj < g.n[1]; ++sj) {
                        const double dy = axis_delta(tj - sj, 1);
                        for (int sk = 0; sk < g.n[2]; ++sk) {
                            const double w = src[g.index(si, sj, sk)];
                            if (w == 0.0) continue;
                            const double dz0 = axis_delta(tk - sk, 2);
                            for (int m : images) {
                                const double dz = dz0 - m * stack.period;
                                if (dx * dx + dy * dy + dz * dz < eps2) continue;
                                acc += w * kernel_value({dx, dy, dz}, kp);
                            }
                        }
                    }
                }
                out.at(ti, tj, tk) = acc * cell_volume;
            }
    return out;
}

struct AccelerationReport {
    double value = 0.0;           // max |grad V| / mass [m/s^2]
    std::array<int, 3> index{};   // grid location of the maximum
};

/// Max |grad V|/m via second-order central differences, one-sided at edges.
inline AccelerationReport max_acceleration(const ScalarField3D& potential, double mass) {
    if (!(mass > 0)) throw std::invalid_argument("max_acceleration: mass must be positive");
    const auto& g = potential.grid;
    const double h = g.spacing;
    auto diff = [&](int i, int j, int k, int axis) {
        std::array<int, 3> u{i, j, k}, d{i, j, k};
        const int n = g.n[axis];
        const int c = (axis == 0) ? i : (axis == 1) ? j : k;
        double denom = 2.0 * h;
        if (c == 0) { u[axis] = 1; d[axis] = 0; denom = h; }
        else if (c == n - 1) { u[axis] = n - 1; d[axis] = n - 2; denom = h; }
        else { u[axis] = c + 1; d[axis] = c - 1; }
        return (potential.at(u[0], u[1], u[2]) - potential.at(d[0], d[1], d[2])) / denom;
    };
    AccelerationReport rep;
    for (int i = 0; i < g.n[0]; ++i)
        for (int j = 0; j < g.n[1]; ++j)
            for (int k = 0; k < g.n[2]; ++k) {
                const double gx = diff(i, j, k, 0);
                const double gy = diff(i, j, k, 1);
                const double gz = diff(i, j, k, 2);
                const double a = std::sqrt(gx * gx + gy * gy + gz * gz) / mass;
                if (a > rep.value) {
                    rep.value = a;
                    rep.index = {i, j, k};
                }
            }
    return rep;
}

/// Values along one axis through the central indices of the other two.
inline Profile1D axis_cut(const ScalarField3D& f, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis_cut: axis must be 0, 1 or 2");
    const auto& g = f.grid;
    Profile1D p;
    p.spacing = g.spacing;
    const int ci = g.n[0] / 2, cj = g.n[1] / 2, ck = g.n[2] / 2;
    p.position.resize(g.n[axis]);
    p.value.resize(g.n[axis]);
    for (int t = 0; t < g.n[axis]; ++t) {
        p.position[t] = g.coordinate(axis, t);
        p.value[t] = (axis == 0) ? f.at(t, cj, ck) : (axis == 1) ? f.at(ci, t, ck) : f.at(ci, cj, t);
    }
    return p;
}

/// Four-component decomposition of the induced potential over polarization
/// angle, for a beam along y with the polarization rotating in the x-z
/// plane. Builds four convolutions once; any angle is then a pointwise
/// linear combination (exact, see kernel_components).
class PolarizationBasis {
public:
    PolarizationBasis(const ScalarField3D& density, double dipole, const Vec3& k_vec,
                      double epsilon0, const StackSpec& stack) {
        if (std::abs(k_vec[0]) > 1e-12 * norm(k_vec) || std::abs(k_vec[2]) > 1e-12 * norm(k_vec))
            throw std::invalid_argument("PolarizationBasis: beam must propagate along y");
        detail::check_density(density);
        detail::ConvEngine engine(density, stack);
        const auto& plan = engine.plan();

        auto eval = [dipole, k_vec, epsilon0](const Vec3& r, double* out) {
            const auto c = kernel_components(r, dipole, k_vec, epsilon0);
            out[0] = c.iso; out[1] = c.xx; out[2] = c.xz; out[3] = c.zz;
        };
        auto run_images = [&](const std::vector<int>& images) {
            std::array<ScalarField3D, 4> vs;
            std::array<std::unique_ptr<PaddedRealBuffer>, 4> bufs;
            for (auto& b : bufs) b = std::make_unique<PaddedRealBuffer>(plan.px, plan.py, plan.pz);
            detail::tabulate_images<4>(
                {bufs[0].get(), bufs[1].get(), bufs[2].get(), bufs[3].get()}, eval, plan, images);
            for (int c = 0; c < 4; ++c) {
                vs[c] = ScalarField3D(density.grid, "potential_J");
                engine.convolve_accumulate(*bufs[c], vs[c]);
                bufs[c].reset();
            }
            return vs;
        };

        if (plan.zwrap) {
            comps_ = run_images({0});
            report_ = StackReport{0, 0.0, false};
            return;
        }

        int m = stack.pancakes_per_side;
        comps_ = run_images(detail::image_range(1, m, true));
        if (stack.convergence_tol <= 0.0) {
            report_ = StackReport{m, 0.0, false};
            return;
        }
        while (true) {
            auto inc = run_images(detail::image_range(m + 1, 2 * m, false));
            double worst = 0.0;
            for (double phi : {0.0, 45.0, 90.0}) {
                const auto w = angle_weights(phi);
                double inc_max = 0.0, tot_max = 0.0;
                for (std::size_t i = 0; i < comps_[0].values.size(); ++i) {
                    const double dv = combine_at(inc, w, i);
                    const double v = combine_at(comps_, w, i) + dv;
                    inc_max = std::max(inc_max, std::abs(dv));
                    tot_max = std::max(tot_max, std::abs(v));
                }
                if (tot_max > 0.0) worst = std::max(worst, inc_max / tot_max);
            }
            if (worst <= stack.convergence_tol) {
                report_ = StackReport{m, worst, true};
                return;
            }
            for (int c = 0; c < 4; ++c)
                for (std::size_t i = 0; i < comps_[c].values.size(); ++i)
                    comps_[c].values[i] += inc[c].values[i];
            m *= 2;
            if (2 * m > stack.m_cap)
                throw std::runtime_error("PolarizationBasis: stack sum not converged at m_cap");
        }
    }

    ScalarField3D at_angle(double phi_deg) const {
        const auto w = angle_weights(phi_deg);
        ScalarField3D out(comps_[0].grid, "potential_J");
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] = combine_at(comps_, w, i);
        return out;
    }

    const StackReport& stack_report() const { return report_; }

private:
    static double combine_at(const std::array<ScalarField3D, 4>& c, const AngleWeights& w,
                             std::size_t i) {
        return w.iso * c[0].values[i] + w.xx * c[1].values[i] + w.xz * c[2].values[i] +
               w.zz * c[3].values[i];
    }

    std::array<ScalarField3D, 4> comps_;
    StackReport report_;
};

} // namespace liddi
