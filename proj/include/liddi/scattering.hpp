#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "liddi/light_atom.hpp"
#include "liddi/vec.hpp"

namespace liddi {

/// Angular distribution of the spontaneously emitted photon. DipolePi is
/// the classical dipole pattern, emission probability proportional to
/// sin^2(theta) relative to the dipole axis.
enum class EmissionPattern { Isotropic, DipolePi };

struct ScatterConfig {
    EmissionPattern pattern = EmissionPattern::DipolePi;
    Vec3 pattern_axis{1.0, 0.0, 0.0};
    std::uint64_t rng_seed = 1;
    int samples = 100000;

    void validate() const {
        if (samples < 1) throw std::invalid_argument("ScatterConfig: samples must be >= 1");
        if (std::abs(norm(pattern_axis) - 1.0) > 1e-9)
            throw std::invalid_argument("ScatterConfig: pattern axis must be a unit vector");
    }
};

/// Normalized angular probability density of the emission pattern [1/sr].
inline double emission_pdf(EmissionPattern pattern, const Vec3& axis, const Vec3& direction) {
    if (pattern == EmissionPattern::Isotropic) return 1.0 / (4.0 * pi);
    const double c = dot(axis, direction);
    return 3.0 / (8.0 * pi) * (1.0 - c * c);
}

/// Per-axis first and second moments of the total recoil, in recoil units.
struct RecoilStats {
    Vec3 mean{};
    Vec3 sigma{};
    double mean_photons = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Vec3 uniform_sphere(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 u;
    double r;
    do {
        u = {n(rng), n(rng), n(rng)};
        r = norm(u);
    } while (r < 1e-12);
    return scaled(u, 1.0 / r);
}

inline Vec3 draw_emission(EmissionPattern pattern, const Vec3& axis, std::mt19937_64& rng) {
    if (pattern == EmissionPattern::Isotropic) return uniform_sphere(rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // rejection against the uniform sphere; the pattern peaks at 1
    while (true) {
        const Vec3 u = uniform_sphere(rng);
        const double c = dot(axis, u);
        if (unif(rng) < 1.0 - c * c) return u;
    }
}

} // namespace detail

/// Monte-Carlo model of photon recoils during the flash. Each simulated
/// atom scatters a Poisson number of photons with mean R*t; each photon
/// contributes one recoil along the beam (absorption) and one recoil in a
/// random emission direction. Atoms use independent RNG streams derived
/// from the seed, so results are reproducible and order-independent.
inline RecoilStats simulate_recoils(const FlashParams& flash, const SpeciesParams& sp,
                                    const ScatterConfig& cfg,
                                    std::vector<Vec3>* raw_samples = nullptr,
                                    const PhysicalConstants& pc = {}) {
    flash.validate();
    cfg.validate();
    const double mean_count = scattering_rate(flash, sp, pc) * flash.flash_time;
    if (raw_samples) {
        raw_samples->clear();
        raw_samples->reserve(cfg.samples);
    }

    Vec3 sum{}, sum2{};
    double photon_total = 0.0;
    for (int a = 0; a < cfg.samples; ++a) {
        std::mt19937_64 rng(detail::splitmix64(cfg.rng_seed ^ (0x51700000ULL + a)));
        std::poisson_distribution<int> poisson(mean_count);
        const int nphot = mean_count > 0 ? poisson(rng) : 0;
        photon_total += nphot;
        Vec3 p{};
        for (int q = 0; q < nphot; ++q) {
            const Vec3 e = detail::draw_emission(cfg.pattern, cfg.pattern_axis, rng);
            for (int c = 0; c < 3; ++c) p[c] += flash.propagation[c] + e[c];
        }
        for (int c = 0; c < 3; ++c) {
            sum[c] += p[c];
            sum2[c] += p[c] * p[c];
        }
        if (raw_samples) raw_samples->push_back(p);
    }

    RecoilStats stats;
    const double n = static_cast<double>(cfg.samples);
    stats.mean_photons = photon_total / n;
    for (int c = 0; c < 3; ++c) {
        stats.mean[c] = sum[c] / n;
        const double var = std::max(sum2[c] / n - stats.mean[c] * stats.mean[c], 0.0);
        stats.sigma[c] = std::sqrt(var);
    }
    return stats;
}

/// Incoherent momentum broadening for a given polarization angle: the
/// emission pattern is the dipole pattern around e(phi). Simplified
/// stand-in for the full multilevel scattering treatment.
inline RecoilStats background_width(const FlashParams& flash, const SpeciesParams& sp,
                                    const ScatterConfig& cfg, double angle_deg,
                                    const PhysicalConstants& pc = {}) {
    ScatterConfig c = cfg;
    c.pattern = EmissionPattern::DipolePi;
    const double phi = angle_deg * pi / 180.0;
    c.pattern_axis = {std::cos(phi), 0.0, std::sin(phi)};
    return simulate_recoils(flash, sp, c, nullptr, pc);
}

/// Widths of independent broadening mechanisms add in quadrature.
inline double combine_quadrature(double sigma_coherent, double sigma_incoherent) {
    if (sigma_coherent < 0 || sigma_incoherent < 0)
        throw std::invalid_argument("combine_quadrature: widths must be non-negative");
    return std::sqrt(sigma_coherent * sigma_coherent + sigma_incoherent * sigma_incoherent);
}

} // namespace liddi
