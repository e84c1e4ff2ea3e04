#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "liddi/field.hpp"

namespace liddi {

enum class FftDirection { Forward, Inverse };

namespace detail {
/// FFTW's planner is not thread safe; executions of independent plans are.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct PlanGuard {
    fftw_plan plan = nullptr;
    ~PlanGuard() {
        if (plan) {
            std::lock_guard<std::mutex> lock(planner_mutex());
            fftw_destroy_plan(plan);
        }
    }
};
} // namespace detail

/// Discrete Fourier transform of a complex field.
///
/// Forward is the unnormalized sum over e^{-i k.r}; Inverse carries the 1/N
/// factor so that inverse(forward(f)) == f.
inline ComplexField3D fft3(const ComplexField3D& f, FftDirection dir) {
    f.grid.validate();
    ComplexField3D out(f.grid, f.unit);
    detail::PlanGuard guard;
    {
        std::lock_guard<std::mutex> lock(detail::planner_mutex());
        guard.plan = fftw_plan_dft_3d(
            f.grid.n[0], f.grid.n[1], f.grid.n[2],
            reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(f.values.data())),
            reinterpret_cast<fftw_complex*>(out.values.data()),
            dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    if (!guard.plan) throw std::runtime_error("fft3: FFTW plan creation failed");
    fftw_execute(guard.plan);
    if (dir == FftDirection::Inverse) {
        const double scale = 1.0 / static_cast<double>(f.grid.size());
        for (cdouble& v : out.values) v *= scale;
    }
    return out;
}

/// Real 3D array with the last dimension padded for in-place r2c transforms.
/// Used as scratch space by the convolution engine and the imaginary-time
/// propagator; after forward() the buffer holds the half-spectrum.
class PaddedRealBuffer {
public:
    PaddedRealBuffer(int nx, int ny, int nz)
        : nx_(nx), ny_(ny), nz_(nz), nzc_(nz / 2 + 1), data_(padded_size(nx, ny, nz), 0.0) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int nz() const { return nz_; }
    int nzc() const { return nzc_; }

    double& real(int i, int j, int k) {
        return data_[(static_cast<std::size_t>(i) * ny_ + j) * (2 * nzc_) + k];
    }
    double real(int i, int j, int k) const {
        return data_[(static_cast<std::size_t>(i) * ny_ + j) * (2 * nzc_) + k];
    }

    cdouble& spectral(int i, int j, int kc) {
        auto* c = reinterpret_cast<cdouble*>(data_.data());
        return c[(static_cast<std::size_t>(i) * ny_ + j) * nzc_ + kc];
    }

    std::size_t spectral_count() const {
        return static_cast<std::size_t>(nx_) * ny_ * nzc_;
    }
    cdouble* spectral_data() { return reinterpret_cast<cdouble*>(data_.data()); }

    void zero() { std::fill(data_.begin(), data_.end(), 0.0); }

    void forward() { execute(true); }
    void backward() { execute(false); }  // unnormalized; caller divides by nx*ny*nz

    double norm_factor() const { return 1.0 / (static_cast<double>(nx_) * ny_ * static_cast<double>(nz_)); }

private:
    static std::size_t padded_size(int nx, int ny, int nz) {
        return static_cast<std::size_t>(nx) * ny * (2 * (nz / 2 + 1));
    }

    void execute(bool fwd) {
        detail::PlanGuard guard;
        {
            std::lock_guard<std::mutex> lock(detail::planner_mutex());
            if (fwd)
                guard.plan = fftw_plan_dft_r2c_3d(nx_, ny_, nz_, data_.data(),
                                                  reinterpret_cast<fftw_complex*>(data_.data()),
                                                  FFTW_ESTIMATE);
            else
                guard.plan = fftw_plan_dft_c2r_3d(nx_, ny_, nz_,
                                                  reinterpret_cast<fftw_complex*>(data_.data()),
                                                  data_.data(), FFTW_ESTIMATE);
        }
        if (!guard.plan) throw std::runtime_error("PaddedRealBuffer: FFTW plan creation failed");
        fftw_execute(guard.plan);
    }

    int nx_, ny_, nz_, nzc_;
    std::vector<double> data_;
};

} // namespace liddi
