#pragma once

#include <complex>

#include "pmot/core.hpp"
#include "pmot/operators.hpp"
#include "pmot/spectral.hpp"

namespace pmot {

struct ProjectionResult {
    DensityPath rho;
    FluxField w;
    // Lagrange multiplier of the continuity constraint, one slice per time
    // interval (half-time layout); raw material for the dual potential.
    std::vector<Field> multiplier;
};

namespace detail {

// Solve (lambda*I - L_t) p = r for one spatial mode, where L_t is the
// Neumann time Laplacian on nt nodes scaled by 1/dt^2. SPD for lambda > 0.
inline void time_solve_mode(double lambda, double dt, std::vector<std::complex<double>>& r) {
    const int nt = static_cast<int>(r.size());
    const double idt2 = 1.0 / (dt * dt);
    if (lambda > 0.0) {
        // Thomas algorithm; diag = lambda + (1 or 2)/dt^2, off = -1/dt^2.
        static thread_local std::vector<double> cp;
        static thread_local std::vector<std::complex<double>> dp;
        cp.assign(nt, 0.0);
        dp.assign(nt, {0.0, 0.0});
        double diag0 = lambda + idt2;
        cp[0] = -idt2 / diag0;
        dp[0] = r[0] / diag0;
        for (int k = 1; k < nt; ++k) {
            const double diag = lambda + (k == nt - 1 ? idt2 : 2.0 * idt2);
            const double denom = diag + idt2 * cp[k - 1];
            cp[k] = -idt2 / denom;
            dp[k] = (r[k] + idt2 * dp[k - 1]) / denom;
        }
        r[nt - 1] = dp[nt - 1];
        for (int k = nt - 2; k >= 0; --k) r[k] = dp[k] - cp[k] * r[k + 1];
    } else {
        // Zero spatial mode: singular Neumann system -L_t p = r. De-mean the
        // right-hand side (equal marginals make the mean ~0 already), then
        // integrate twice with p[0] = 0.
        std::complex<double> mean{0.0, 0.0};
        for (const auto& v : r) mean += v;
        mean /= static_cast<double>(nt);
        std::complex<double> gsum{0.0, 0.0};
        std::vector<std::complex<double>> p(nt);
        p[0] = {0.0, 0.0};
        for (int k = 0; k + 1 < nt; ++k) {
            gsum -= (r[k] - mean);  // g_k = -(r_0 + ... + r_k)
            p[k + 1] = p[k] + dt * dt * gsum;
        }
        r = std::move(p);
    }
}

}  // namespace detail

/**
 * Euclidean projection of (rho, w) onto the affine set
 *   { (rho, w) : (rho_{k+1}-rho_k)/dt + div w_k = 0, rho_0 = rho0, rho_Nt = rho1 }.
 *
 * One space-time Poisson solve: FFT over the periodic axes, a direct
 * tridiagonal solve in time per spatial mode. Endpoint slices are eliminated
 * variables, so the time operator has Neumann structure on the multiplier and
 * the solve is unconditionally well-posed when the marginals share total mass.
 */
inline ProjectionResult project_continuity(const DensityPath& rho_in, const FluxField& w_in,
                                           const Field& rho0, const Field& rho1,
                                           const TorusGrid& g, const Spectral& spec) {
    if (rho_in.num_slices() != g.nt + 1 || w_in.num_axes() != g.d)
        throw ConfigError("project_continuity: field shapes do not match grid");
    const double m0 = slice_mass(rho0, g);
    const double m1 = slice_mass(rho1, g);
    if (std::abs(m0 - m1) > 1e-9)
        throw InfeasibleMarginalsError("project_continuity: marginal masses differ by " +
                                       std::to_string(m0 - m1));

    ProjectionResult out{rho_in, w_in, {}};
    out.rho[0] = rho0;
    out.rho[g.nt] = rho1;

    // Continuity residual of the input, endpoint slices already pinned.
    const std::size_t m = g.cells();
    std::vector<std::vector<std::complex<double>>> rhat(
        static_cast<std::size_t>(g.nt));
    {
        Field resid(m);
        Field div(m);
        std::vector<Field> wk(static_cast<std::size_t>(g.d));
        for (int k = 0; k < g.nt; ++k) {
            for (int a = 0; a < g.d; ++a) wk[a] = out.w.axes[a][k];
            divergence_slice(wk, g, div);
            const Field& lo = out.rho[k];
            const Field& hi = out.rho[k + 1];
            for (std::size_t c = 0; c < m; ++c) resid[c] = (hi[c] - lo[c]) / g.dt + div[c];
            spec.forward(resid, rhat[k]);
        }
    }

    // Per-mode time solve of (lambda_q I - L_t) phat = rhat.
    std::vector<std::complex<double>> mode(static_cast<std::size_t>(g.nt));
    for (std::size_t q = 0; q < m; ++q) {
        for (int k = 0; k < g.nt; ++k) mode[k] = rhat[k][q];
        detail::time_solve_mode(spec.laplacian_symbol(q), g.dt, mode);
        for (int k = 0; k < g.nt; ++k) rhat[k][q] = mode[k];
    }

    // Back to physical space; apply the KKT updates.
    out.multiplier.assign(static_cast<std::size_t>(g.nt), Field(m, 0.0));
    for (int k = 0; k < g.nt; ++k) spec.backward(rhat[k], out.multiplier[k]);

    for (int j = 1; j < g.nt; ++j) {
        const Field& plo = out.multiplier[j - 1];
        const Field& phi = out.multiplier[j];
        Field& r = out.rho[j];
        for (std::size_t c = 0; c < m; ++c) r[c] += (phi[c] - plo[c]) / g.dt;
    }
    std::vector<Field> gradp;
    for (int k = 0; k < g.nt; ++k) {
        gradient_slice(out.multiplier[k], g, gradp);
        for (int a = 0; a < g.d; ++a) axpy(1.0, gradp[a], out.w.axes[a][k]);
    }
    return out;
}

}  // namespace pmot
