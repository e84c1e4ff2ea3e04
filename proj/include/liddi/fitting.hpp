#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace liddi {

struct GaussianFit {
    double sigma = 0.0;
    double amplitude = 0.0;
    double residual = 0.0;  // rms misfit over peak value
};

/// Least-squares fit of y(x) to A*exp(-x^2/(2 sigma^2)) with the center
/// fixed at x = 0. The amplitude is solved exactly for each trial sigma and
/// sigma is minimized by golden-section search on a log scale.
inline GaussianFit fit_centered_gaussian(const std::vector<double>& x,
                                         const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 4)
        throw std::invalid_argument("fit_centered_gaussian: need at least 4 samples");
    double ysum = 0.0, peak = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        peak = std::max(peak, std::abs(y[i]));
        if (y[i] > 0.0) {
            ysum += y[i];
            moment += y[i] * x[i] * x[i];
        }
    }
    if (!(ysum > 0.0) || !(peak > 0.0))
        throw std::runtime_error("fit_centered_gaussian: degenerate profile");

    double min_dx = std::numeric_limits<double>::max();
    for (std::size_t i = 1; i < x.size(); ++i)
        min_dx = std::min(min_dx, std::abs(x[i] - x[i - 1]));
    const double sigma0 = std::max(std::sqrt(moment / ysum), 0.25 * min_dx);

    auto sse_for = [&](double sigma, double* amplitude) {
        double gg = 0.0, gy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double g = std::exp(-x[i] * x[i] / (2.0 * sigma * sigma));
            gg += g * g;
            gy += g * y[i];
        }
        const double a = gy / gg;
        double sse = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double g = std::exp(-x[i] * x[i] / (2.0 * sigma * sigma));
            const double r = y[i] - a * g;
            sse += r * r;
        }
        if (amplitude) *amplitude = a;
        return sse;
    };

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(sigma0 / 30.0), hi = std::log(sigma0 * 30.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = sse_for(std::exp(c), nullptr), fd = sse_for(std::exp(d), nullptr);
    for (int it = 0; it < 90; ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo);
            fc = sse_for(std::exp(c), nullptr);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo);
            fd = sse_for(std::exp(d), nullptr);
        }
    }
    GaussianFit fit;
    fit.sigma = std::exp(0.5 * (lo + hi));
    const double sse = sse_for(fit.sigma, &fit.amplitude);
    fit.residual = std::sqrt(sse / static_cast<double>(x.size())) / peak;
    if (!std::isfinite(fit.sigma) || !std::isfinite(fit.amplitude))
        throw std::runtime_error("fit_centered_gaussian: fit diverged");
    return fit;
}

struct ParabolaFit {
    double radius = 0.0;     // sqrt(a/b) for y = a - b x^2
    double peak = 0.0;       // a
    double residual = 0.0;
};

/// Linear least squares of y(x) to max(0, a - b x^2) over samples with
/// y above threshold_fraction of the peak (the support of the parabola).
inline ParabolaFit fit_inverted_parabola(const std::vector<double>& x,
                                         const std::vector<double>& y,
                                         double threshold_fraction = 0.05) {
    if (x.size() != y.size() || x.size() < 4)
        throw std::invalid_argument("fit_inverted_parabola: need at least 4 samples");
    const double peak = *std::max_element(y.begin(), y.end());
    if (!(peak > 0.0)) throw std::runtime_error("fit_inverted_parabola: degenerate profile");
    const double cut = threshold_fraction * peak;
    // normal equations for y = a - b*u with u = x^2
    double n = 0, su = 0, suu = 0, sy = 0, suy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] < cut) continue;
        const double u = x[i] * x[i];
        n += 1; su += u; suu += u * u; sy += y[i]; suy += u * y[i];
    }
    if (n < 8) throw std::runtime_error("fit_inverted_parabola: too few samples above threshold");
    const double det = n * suu - su * su;
    if (std::abs(det) < 1e-300) throw std::runtime_error("fit_inverted_parabola: singular fit");
    const double a = (sy * suu - su * suy) / det;
    const double minus_b = (n * suy - su * sy) / det;  // slope in u
    const double b = -minus_b;
    if (!(a > 0.0) || !(b > 0.0))
        throw std::runtime_error("fit_inverted_parabola: profile is not an inverted parabola");
    ParabolaFit fit;
    fit.radius = std::sqrt(a / b);
    fit.peak = a;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] < cut) continue;
        const double r = y[i] - (a - b * x[i] * x[i]);
        sse += r * r;
    }
    fit.residual = std::sqrt(sse / n) / peak;
    return fit;
}

} // namespace liddi
