#pragma once

#include <complex>
#include <mutex>
#include <vector>

#include <fftw3.h>

#include "pmot/core.hpp"

namespace pmot {

namespace detail {
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;  // FFTW planning is not thread-safe
    return m;
}
}  // namespace detail

/**
 * Per-grid FFT workspace: d-dimensional c2c transforms over one spatial
 * slice, the discrete Laplacian symbol table, and the half-cell spectral
 * shift used to co-locate face fields with cell centers.
 *
 * Not thread-safe; create one instance per solve / per thread.
 */
class Spectral {
public:
    explicit Spectral(const TorusGrid& grid) : g_(grid) {
        const std::size_t m = g_.cells();
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * m));
        {
            std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
            if (g_.d == 1) {
                fwd_ = fftw_plan_dft_1d(g_.n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
                bwd_ = fftw_plan_dft_1d(g_.n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
            } else {
                fwd_ = fftw_plan_dft_2d(g_.n, g_.n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
                bwd_ = fftw_plan_dft_2d(g_.n, g_.n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
            }
        }
        build_tables();
    }

    ~Spectral() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    const TorusGrid& grid() const { return g_; }

    void forward(const Field& in, std::vector<std::complex<double>>& out) const {
        const std::size_t m = g_.cells();
        for (std::size_t i = 0; i < m; ++i) {
            buf_[i][0] = in[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        out.resize(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = {buf_[i][0], buf_[i][1]};
    }

    // Inverse transform (1/n^d normalized), real part only.
    void backward(const std::vector<std::complex<double>>& in, Field& out) const {
        const std::size_t m = g_.cells();
        for (std::size_t i = 0; i < m; ++i) {
            buf_[i][0] = in[i].real();
            buf_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        const double scale = 1.0 / static_cast<double>(m);
        out.resize(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = buf_[i][0] * scale;
    }

    // Symbol of -div(grad .): lambda_q = (4/h^2) sum_a sin^2(pi q_a / n), >= 0.
    double laplacian_symbol(std::size_t flat_mode) const { return lambda_[flat_mode]; }

    // Per-mode phase of the half-cell shift along one axis (0 at Nyquist).
    std::complex<double> shift_phase(int axis, std::size_t flat_mode) const {
        return axis == 0 ? phase0_[flat_mode] : phase1_[flat_mode];
    }

    /**
     * Spectral half-cell shift along one axis. direction=+1 moves axis-a face
     * samples onto cell centers; direction=-1 is the adjoint (= inverse on the
     * non-Nyquist subspace). The Nyquist mode is annihilated: only the even
     * sub-grid representation of that mode exists on the shifted lattice, so
     * the shift is an orthogonal map composed with a rank-one projector.
     */
    void half_shift(const Field& in, int axis, int direction, Field& out) const {
        const std::size_t m = g_.cells();
        for (std::size_t i = 0; i < m; ++i) {
            buf_[i][0] = in[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        const auto& ph = axis == 0 ? phase0_ : phase1_;
        for (std::size_t i = 0; i < m; ++i) {
            std::complex<double> v{buf_[i][0], buf_[i][1]};
            std::complex<double> p = ph[i];
            if (direction < 0) p = std::conj(p);
            v *= p;
            buf_[i][0] = v.real();
            buf_[i][1] = v.imag();
        }
        fftw_execute(bwd_);
        const double scale = 1.0 / static_cast<double>(m);
        out.resize(m);
        for (std::size_t i = 0; i < m; ++i) out[i] = buf_[i][0] * scale;
    }

private:
    void build_tables() {
        const int n = g_.n;
        const std::size_t m = g_.cells();
        lambda_.resize(m);
        phase0_.resize(m);
        if (g_.d == 2) phase1_.resize(m);

        auto axis_lambda = [&](int q) {
            const double s = std::sin(M_PI * q / n);
            return 4.0 * s * s / (g_.h * g_.h);
        };
        auto axis_phase = [&](int q) -> std::complex<double> {
            // Face j sits at center_j + h/2, so face->center is a -h/2 shift:
            // e^{-i pi q~ / n} on the signed frequency; Nyquist killed.
            if (2 * q == n) return {0.0, 0.0};
            const int qs = (2 * q > n) ? q - n : q;
            const double arg = -M_PI * qs / n;
            return {std::cos(arg), std::sin(arg)};
        };

        if (g_.d == 1) {
            for (int q = 0; q < n; ++q) {
                lambda_[q] = axis_lambda(q);
                phase0_[q] = axis_phase(q);
            }
        } else {
            for (int q0 = 0; q0 < n; ++q0)
                for (int q1 = 0; q1 < n; ++q1) {
                    const std::size_t f = static_cast<std::size_t>(q0) * n + q1;
                    lambda_[f] = axis_lambda(q0) + axis_lambda(q1);
                    phase0_[f] = axis_phase(q0);
                    phase1_[f] = axis_phase(q1);
                }
        }
    }

    TorusGrid g_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
    std::vector<double> lambda_;
    std::vector<std::complex<double>> phase0_;
    std::vector<std::complex<double>> phase1_;
};

}  // namespace pmot
