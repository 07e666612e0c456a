#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "pmot/core.hpp"
#include "pmot/energy.hpp"
#include "pmot/operators.hpp"
#include "pmot/projection.hpp"
#include "pmot/spectral.hpp"

namespace pmot {

struct SolveConfig {
    int max_iter = 5000;
    double tol_gap = 1e-6;   // relative duality-gap target
    double tau = 0.0;        // prox step; <= 0 selects the default 0.1*h
    double relax = 1.0;      // over-relaxation in (0,2)
    double rho_floor = 1e-6; // mask for residuals dividing by rho
    unsigned seed = 0;       // threaded through for stochastic callers
    int threads = 1;
    int check_every = 10;    // gap evaluation cadence

    void validate(const TorusGrid& g) const {
        (void)g;
        if (!(relax > 0.0 && relax < 2.0)) throw ConfigError("relax must lie in (0,2)");
        if (!(tol_gap > 0.0)) throw ConfigError("tol_gap must be positive");
        if (max_iter < 1) throw ConfigError("max_iter must be >= 1");
    }
};

struct SolveReport {
    double W2 = 0.0;          // squared distance, int int H
    double dual_value = 0.0;  // -J(phi)
    double gap = 0.0;         // (W2 + J(phi)) / W2, signed
    int iterations = 0;
    double residual_continuity = 0.0;
    double residual_flux = 0.0;  // ||w - (1/2) rho^alpha grad phi|| / ||w||
    double residual_HJ = 0.0;    // masked Hamilton-Jacobi residual
    std::vector<double> energy_per_time;
    bool converged = false;
    bool dual_valid = true;
    double phi_rescale = 1.0;           // least-squares factor applied to phi
    std::vector<double> energy_trace;   // energy at each gap evaluation
};

struct SolveResult {
    DensityPath rho;
    FluxField w;
    Potential phi;
    SolveReport report;
};

// ---------------------------------------------------------------------------
// Centered-field helpers shared with the certification module
// ---------------------------------------------------------------------------

// Co-location of the flux with cell centers. For alpha > 0 this is the
// orthogonal spectral half-shift; the alpha = 0 energy is density-free and
// uses the face values in place (identity), which keeps the quadratic
// endpoint problem exactly equal to its Fourier oracle.
inline void colocate_flux(const FluxField& w, const TorusGrid& g, const Spectral& spec,
                          Alpha alpha, CenteredVector& out) {
    for (int a = 0; a < g.d; ++a)
        for (int k = 0; k < g.nt; ++k) {
            if (alpha.zero_mode())
                out.axes[a][k] = w.axes[a][k];
            else
                spec.half_shift(w.axes[a][k], a, +1, out.axes[a][k]);
        }
}

// Dual gradient field paired with the co-located flux: grad of the
// time-averaged potential, shifted to centers for alpha > 0.
inline void dual_gradient(const Potential& phi, const TorusGrid& g, const Spectral& spec,
                          Alpha alpha, CenteredVector& out) {
    Field tphi(g.cells());
    std::vector<Field> gr;
    for (int k = 0; k < g.nt; ++k) {
        const Field& lo = phi[k];
        const Field& hi = phi[k + 1];
        for (std::size_t c = 0; c < tphi.size(); ++c) tphi[c] = 0.5 * (lo[c] + hi[c]);
        gradient_slice(tphi, g, gr);
        for (int a = 0; a < g.d; ++a) {
            if (alpha.zero_mode())
                out.axes[a][k] = gr[a];
            else
                spec.half_shift(gr[a], a, +1, out.axes[a][k]);
        }
    }
}

// Time-difference quotient of the potential, one slice per interval.
inline void dual_time_derivative(const Potential& phi, const TorusGrid& g, CenteredScalar& out) {
    for (int k = 0; k < g.nt; ++k) {
        const Field& lo = phi[k];
        const Field& hi = phi[k + 1];
        Field& dst = out[k];
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = (hi[c] - lo[c]) / g.dt;
    }
}

// int int H over the centered grid; +inf if the integrand is infinite anywhere.
inline double total_energy(const CenteredScalar& rho_c, const CenteredVector& w_c,
                           const TorusGrid& g, Alpha alpha,
                           std::vector<double>* per_time = nullptr) {
    const double wgt = g.dt * g.cell_volume();
    if (per_time) per_time->assign(static_cast<std::size_t>(g.nt), 0.0);
    double total = 0.0;
    std::array<double, 2> wv{0.0, 0.0};
    for (int k = 0; k < g.nt; ++k) {
        double ek = 0.0;
        for (std::size_t c = 0; c < rho_c[k].size(); ++c) {
            for (int a = 0; a < g.d; ++a) wv[a] = w_c.axes[a][k][c];
            double rho = rho_c[k][c];
            if (!alpha.zero_mode() && rho < 0.0) {
                if (rho > -1e-10) rho = 0.0;  // projection round-off
                else return kInf;
            }
            ek += eval_H(rho, std::span<const double>(wv.data(), g.d), alpha);
            if (!std::isfinite(ek)) return kInf;
        }
        if (per_time) (*per_time)[k] = ek * g.cell_volume();
        total += ek;
    }
    return total * wgt;
}

/**
 * Discrete dual value J(phi): quadrature of L on the discrete
 * (d_t phi, grad phi) plus the boundary pairings with the marginals.
 * For feasible (rho, w), int int H + J(phi) >= 0 holds exactly (up to
 * round-off) for any phi by pointwise conjugacy and the discrete
 * product-rule identity; see also certify::check_ibp.
 */
inline double dual_objective(const Potential& phi, const Field& rho0, const Field& rho1,
                             Alpha alpha, const TorusGrid& g, const Spectral& spec) {
    CenteredScalar a(g);
    dual_time_derivative(phi, g, a);
    CenteredVector b(g);
    dual_gradient(phi, g, spec, alpha, b);

    const double wgt = g.dt * g.cell_volume();
    double lterm = 0.0;
    std::array<double, 2> bv{0.0, 0.0};
    for (int k = 0; k < g.nt && std::isfinite(lterm); ++k)
        for (std::size_t c = 0; c < a[k].size(); ++c) {
            for (int ax = 0; ax < g.d; ++ax) bv[ax] = b.axes[ax][k][c];
            lterm += eval_L(a[k][c], std::span<const double>(bv.data(), g.d), alpha);
            if (!std::isfinite(lterm)) break;
        }
    if (!std::isfinite(lterm)) return kInf;
    const double bdry = dot(phi[0], rho0) - dot(phi[g.nt], rho1);
    return lterm * wgt + bdry * g.cell_volume();
}

// ---------------------------------------------------------------------------
// Douglas-Rachford solver
// ---------------------------------------------------------------------------

// Lower the potential's time slopes until a + |b|^2/4 <= 0 holds pointwise,
// so the alpha = 1 cone indicator stays finite under round-off.
inline void enforce_dual_cone(Potential& phi, const TorusGrid& g, const Spectral& spec,
                              Alpha alpha) {
    for (int pass = 0; pass < 2; ++pass) {
        CenteredVector b(g);
        dual_gradient(phi, g, spec, alpha, b);
        for (int k = 0; k < g.nt; ++k)
            for (std::size_t c = 0; c < g.cells(); ++c) {
                double b2 = 0.0;
                for (int ax = 0; ax < g.d; ++ax) b2 += b.axes[ax][k][c] * b.axes[ax][k][c];
                const double a = (phi[k + 1][c] - phi[k][c]) / g.dt;
                const double excess = a + 0.25 * b2;
                if (excess > 0.0) phi[k + 1][c] -= g.dt * excess * (1.0 + 1e-12);
            }
    }
}

class GeodesicSolver {
public:
    GeodesicSolver(const Field& rho0, const Field& rho1, Alpha alpha, const TorusGrid& g,
                   SolveConfig cfg)
        : g_(g), spec_(g), alpha_(alpha), cfg_(cfg), rho0_(rho0), rho1_(rho1),
          yu_rho_(g), yu_w_(g), yv_rho_(g), yv_w_(g),
          xu_rho_(g), xu_w_(g), xv_rho_(g), xv_w_(g),
          zu_rho_(g), zu_w_(g), zv_rho_(g), zv_w_(g),
          sub_a_(g), sub_b_(g) {
        alpha_.validate();
        cfg_.validate(g);
        gamma_ = cfg_.tau > 0.0 ? cfg_.tau : 0.1 * g.h;
        build_time_factorization();
    }

    SolveResult run();

private:
    void build_time_factorization() {
        const int nn = g_.nt + 1;
        tri_c_.assign(nn, 0.0);
        const double off = 0.25;
        tri_c_[0] = off / 1.25;
        for (int j = 1; j < nn; ++j) {
            const double diag = (j == nn - 1) ? 1.25 : 1.5;
            tri_c_[j] = off / (diag - off * tri_c_[j - 1]);
        }
    }

    // Solve (I + T^T T) x = rhs independently per cell; rhs overwritten.
    void time_tridiag_solve(std::vector<Field>& rhs) const {
        const int nn = g_.nt + 1;
        const double off = 0.25;
        const std::size_t m = g_.cells();
        // dp_j = (rhs_j + off dp_{j-1}) / (diag_j - off c_{j-1}); reuse rhs as dp.
        {
            Field& r0 = rhs[0];
            for (std::size_t c = 0; c < m; ++c) r0[c] /= 1.25;
        }
        for (int j = 1; j < nn; ++j) {
            const double diag = (j == nn - 1) ? 1.25 : 1.5;
            const double denom = diag - off * tri_c_[j - 1];
            Field& rj = rhs[j];
            const Field& rp = rhs[j - 1];
            for (std::size_t c = 0; c < m; ++c) rj[c] = (rj[c] + off * rp[c]) / denom;
        }
        for (int j = nn - 2; j >= 0; --j) {
            Field& rj = rhs[j];
            const Field& rn = rhs[j + 1];
            const double cj = tri_c_[j];
            for (std::size_t c = 0; c < m; ++c) rj[c] += cj * rn[c];
        }
    }

    // Graph projection: x = argmin ||xU-yU||^2 + ||xV-yV||^2 s.t. xV = I(xU).
    void graph_project() {
        const std::size_t m = g_.cells();
        // rho part: xu = (I + T^T T)^{-1} (yu + T^T yv)
        for (int j = 0; j <= g_.nt; ++j) xu_rho_[j] = yu_rho_[j];
        for (int k = 0; k < g_.nt; ++k) {
            const Field& src = yv_rho_[k];
            Field& lo = xu_rho_[k];
            Field& hi = xu_rho_[k + 1];
            for (std::size_t c = 0; c < m; ++c) {
                lo[c] += 0.5 * src[c];
                hi[c] += 0.5 * src[c];
            }
        }
        time_tridiag_solve(xu_rho_.slices);
        time_average(xu_rho_, g_, xv_rho_);

        // w part per axis/interval.
        if (alpha_.zero_mode()) {
            for (int a = 0; a < g_.d; ++a)
                for (int k = 0; k < g_.nt; ++k) {
                    const Field& u = yu_w_.axes[a][k];
                    const Field& v = yv_w_.axes[a][k];
                    Field& xu = xu_w_.axes[a][k];
                    Field& xv = xv_w_.axes[a][k];
                    for (std::size_t c = 0; c < m; ++c) xu[c] = 0.5 * (u[c] + v[c]);
                    xv = xu;
                }
            return;
        }
        std::vector<std::complex<double>> uh, vh, xh(m);
        for (int a = 0; a < g_.d; ++a)
            for (int k = 0; k < g_.nt; ++k) {
                spec_.forward(yu_w_.axes[a][k], uh);
                spec_.forward(yv_w_.axes[a][k], vh);
                for (std::size_t q = 0; q < m; ++q) {
                    const std::complex<double> ph = spec_.shift_phase(a, q);
                    xh[q] = (uh[q] + std::conj(ph) * vh[q]) / (1.0 + std::norm(ph));
                }
                spec_.backward(xh, xu_w_.axes[a][k]);
                for (std::size_t q = 0; q < m; ++q) xh[q] *= spec_.shift_phase(a, q);
                spec_.backward(xh, xv_w_.axes[a][k]);
            }
    }

    // Pointwise prox of H on the V block; records the subgradient fields.
    void prox_block(const CenteredScalar& rin, const CenteredVector& win) {
        const std::size_t m = g_.cells();
        std::array<double, 2> wv{0.0, 0.0};
        for (int k = 0; k < g_.nt; ++k) {
            const Field& rk = rin[k];
            Field& ro = zv_rho_[k];
            Field& ao = sub_a_[k];
            for (std::size_t c = 0; c < m; ++c) {
                for (int a = 0; a < g_.d; ++a) wv[a] = win.axes[a][k][c];
                const ProxResult pr =
                    prox_H(rk[c], std::span<const double>(wv.data(), g_.d), gamma_, alpha_);
                ro[c] = pr.rho;
                ao[c] = pr.a;
                for (int a = 0; a < g_.d; ++a) {
                    zv_w_.axes[a][k][c] = pr.w[a];
                    sub_b_.axes[a][k][c] = pr.b[a];
                }
            }
        }
    }

    Potential build_potential(const std::vector<Field>& multiplier) const {
        Potential phi(g_);
        const std::size_t m = g_.cells();
        // phi integrates the prox subgradient in time, anchored so that the
        // boundary pairing matches the multiplier extrapolation exactly.
        for (std::size_t c = 0; c < m; ++c)
            phi[0][c] = multiplier[0][c] / gamma_ - 0.5 * g_.dt * sub_a_[0][c];
        for (int k = 0; k < g_.nt; ++k) {
            const Field& ak = sub_a_[k];
            for (std::size_t c = 0; c < m; ++c)
                phi[k + 1][c] = phi[k][c] + g_.dt * ak[c];
        }
        return phi;
    }

    // Least-squares factor matching w = (1/2) rho^alpha grad phi over {rho > floor}.
    double flux_match_rescale(const CenteredScalar& rho_c, const CenteredVector& w_c,
                              const CenteredVector& b) const {
        double num = 0.0, den = 0.0;
        for (int k = 0; k < g_.nt; ++k)
            for (std::size_t c = 0; c < rho_c[k].size(); ++c) {
                const double r = rho_c[k][c];
                if (r <= cfg_.rho_floor) continue;
                const double ra = 0.5 * std::pow(r, alpha_.value);
                for (int a = 0; a < g_.d; ++a) {
                    const double pred = ra * b.axes[a][k][c];
                    num += pred * w_c.axes[a][k][c];
                    den += pred * pred;
                }
            }
        if (!(den > 0.0)) return 1.0;
        const double beta = num / den;
        return beta > 0.0 ? beta : 1.0;
    }

    TorusGrid g_;
    Spectral spec_;
    Alpha alpha_;
    SolveConfig cfg_;
    double gamma_ = 0.0;
    Field rho0_, rho1_;
    std::vector<double> tri_c_;

    DensityPath yu_rho_;
    FluxField yu_w_;
    CenteredScalar yv_rho_;
    CenteredVector yv_w_;
    DensityPath xu_rho_;
    FluxField xu_w_;
    CenteredScalar xv_rho_;
    CenteredVector xv_w_;
    DensityPath zu_rho_;
    FluxField zu_w_;
    CenteredScalar zv_rho_;
    CenteredVector zv_w_;
    CenteredScalar sub_a_;
    CenteredVector sub_b_;
};

inline SolveResult GeodesicSolver::run() {
    const std::size_t m = g_.cells();
    const double mass0 = slice_mass(rho0_, g_);
    const double mass1 = slice_mass(rho1_, g_);
    if (std::abs(mass0 - mass1) > 1e-9)
        throw InfeasibleMarginalsError("solve_geodesic: marginal masses differ");

    // Feasible start: linear interpolation projected onto the constraint.
    DensityPath r0(g_);
    FluxField w0(g_);
    for (int j = 0; j <= g_.nt; ++j) {
        const double t = static_cast<double>(j) / g_.nt;
        for (std::size_t c = 0; c < m; ++c)
            r0[j][c] = (1.0 - t) * rho0_[c] + t * rho1_[c];
    }
    ProjectionResult init = project_continuity(r0, w0, rho0_, rho1_, g_, spec_);
    yu_rho_ = init.rho;
    yu_w_ = init.w;
    time_average(yu_rho_, g_, yv_rho_);
    colocate_flux(yu_w_, g_, spec_, alpha_, yv_w_);

    const bool dual_valid = alpha_.supports_dual(g_.d);
    SolveReport rep;
    rep.dual_valid = dual_valid;

    std::vector<Field> last_multiplier;
    double prev_energy = kInf;
    int iters_done = 0;
    bool done = false;
    for (int it = 1; it <= cfg_.max_iter && !done; ++it) {
        iters_done = it;
        graph_project();

        // Reflected point 2x - y feeds the second prox.
        for (int j = 0; j <= g_.nt; ++j) {
            Field& dst = zu_rho_[j];
            const Field& x = xu_rho_[j];
            const Field& y = yu_rho_[j];
            for (std::size_t c = 0; c < m; ++c) dst[c] = 2.0 * x[c] - y[c];
        }
        for (int a = 0; a < g_.d; ++a)
            for (int k = 0; k < g_.nt; ++k) {
                Field& dst = zu_w_.axes[a][k];
                const Field& x = xu_w_.axes[a][k];
                const Field& y = yu_w_.axes[a][k];
                for (std::size_t c = 0; c < m; ++c) dst[c] = 2.0 * x[c] - y[c];
            }
        ProjectionResult proj = project_continuity(zu_rho_, zu_w_, rho0_, rho1_, g_, spec_);
        zu_rho_ = std::move(proj.rho);
        zu_w_ = std::move(proj.w);
        last_multiplier = std::move(proj.multiplier);

        {
            CenteredScalar refl_r(g_);
            CenteredVector refl_w(g_);
            for (int k = 0; k < g_.nt; ++k)
                for (std::size_t c = 0; c < m; ++c)
                    refl_r[k][c] = 2.0 * xv_rho_[k][c] - yv_rho_[k][c];
            for (int a = 0; a < g_.d; ++a)
                for (int k = 0; k < g_.nt; ++k)
                    for (std::size_t c = 0; c < m; ++c)
                        refl_w.axes[a][k][c] = 2.0 * xv_w_.axes[a][k][c] - yv_w_.axes[a][k][c];
            prox_block(refl_r, refl_w);
        }

        // y += relax (z - x)
        for (int j = 0; j <= g_.nt; ++j)
            for (std::size_t c = 0; c < m; ++c)
                yu_rho_[j][c] += cfg_.relax * (zu_rho_[j][c] - xu_rho_[j][c]);
        for (int a = 0; a < g_.d; ++a)
            for (int k = 0; k < g_.nt; ++k)
                for (std::size_t c = 0; c < m; ++c)
                    yu_w_.axes[a][k][c] += cfg_.relax * (zu_w_.axes[a][k][c] - xu_w_.axes[a][k][c]);
        for (int k = 0; k < g_.nt; ++k)
            for (std::size_t c = 0; c < m; ++c)
                yv_rho_[k][c] += cfg_.relax * (zv_rho_[k][c] - xv_rho_[k][c]);
        for (int a = 0; a < g_.d; ++a)
            for (int k = 0; k < g_.nt; ++k)
                for (std::size_t c = 0; c < m; ++c)
                    yv_w_.axes[a][k][c] += cfg_.relax * (zv_w_.axes[a][k][c] - xv_w_.axes[a][k][c]);

        if (it % cfg_.check_every != 0 && it != cfg_.max_iter) continue;

        // Evaluate the candidate (feasible) solution.
        CenteredScalar rho_c(g_);
        CenteredVector w_c(g_);
        time_average(zu_rho_, g_, rho_c);
        colocate_flux(zu_w_, g_, spec_, alpha_, w_c);
        const double energy = total_energy(rho_c, w_c, g_, alpha_);
        rep.energy_trace.push_back(energy);
        if (std::isfinite(energy) && energy > 1e12)
            throw ConvergenceError("solve_geodesic: iterates diverged (energy > 1e12)");

        if (dual_valid) {
            Potential phi = build_potential(last_multiplier);
            const double J = dual_objective(phi, rho0_, rho1_, alpha_, g_, spec_);
            const double denom = std::max(energy, 1e-14);
            const double gap = (energy + J) / denom;
            if (std::isfinite(energy) && std::abs(gap) <= cfg_.tol_gap) {
                rep.converged = true;
                done = true;
            }
        } else {
            if (std::isfinite(energy) && std::isfinite(prev_energy) &&
                std::abs(prev_energy - energy) <= cfg_.tol_gap * std::max(energy, 1e-14)) {
                rep.converged = true;
                done = true;
            }
            prev_energy = energy;
        }
    }
    rep.iterations = iters_done;

    // Final fields and certificates-grade diagnostics.
    SolveResult out{zu_rho_, zu_w_, Potential(g_), rep};
    for (int j = 0; j <= g_.nt; ++j)
        for (std::size_t c = 0; c < m; ++c)
            if (out.rho[j][c] < 0.0 && out.rho[j][c] > -1e-10) out.rho[j][c] = 0.0;

    CenteredScalar rho_c(g_);
    CenteredVector w_c(g_);
    time_average(out.rho, g_, rho_c);
    colocate_flux(out.w, g_, spec_, alpha_, w_c);
    out.report.W2 = total_energy(rho_c, w_c, g_, alpha_, &out.report.energy_per_time);
    out.report.residual_continuity = continuity_residual(out.rho, out.w, g_);

    if (dual_valid) {
        Potential phi = build_potential(last_multiplier);
        CenteredVector b(g_);
        dual_gradient(phi, g_, spec_, alpha_, b);
        const double beta = flux_match_rescale(rho_c, w_c, b);
        if (beta != 1.0) {
            for (int j = 0; j <= g_.nt; ++j)
                for (std::size_t c = 0; c < m; ++c) phi[j][c] *= beta;
        }
        out.report.phi_rescale = beta;

        if (alpha_.one_mode()) enforce_dual_cone(phi, g_, spec_, alpha_);

        // Normalization min_x phi(0,x) = 0.
        double mn = phi[0][0];
        for (std::size_t c = 0; c < m; ++c) mn = std::min(mn, phi[0][c]);
        for (int j = 0; j <= g_.nt; ++j)
            for (std::size_t c = 0; c < m; ++c) phi[j][c] -= mn;

        const double J = dual_objective(phi, rho0_, rho1_, alpha_, g_, spec_);
        out.report.dual_value = -J;
        out.report.gap = (out.report.W2 + J) / std::max(out.report.W2, 1e-14);

        dual_gradient(phi, g_, spec_, alpha_, b);
        CenteredScalar a(g_);
        dual_time_derivative(phi, g_, a);
        double num = 0.0, den = 0.0, hj_num = 0.0, hj_den = 0.0;
        for (int k = 0; k < g_.nt; ++k)
            for (std::size_t c = 0; c < m; ++c) {
                const double r = std::max(rho_c[k][c], 0.0);
                const double ra = alpha_.zero_mode() ? 1.0 : std::pow(r, alpha_.value);
                double b2 = 0.0;
                for (int ax = 0; ax < g_.d; ++ax) {
                    const double diff = w_c.axes[ax][k][c] - 0.5 * ra * b.axes[ax][k][c];
                    num += diff * diff;
                    den += w_c.axes[ax][k][c] * w_c.axes[ax][k][c];
                    b2 += b.axes[ax][k][c] * b.axes[ax][k][c];
                }
                hj_den += std::abs(a[k][c]);
                if (r > cfg_.rho_floor && alpha_.value > 0.0)
                    hj_num += std::abs(a[k][c] + 0.25 * alpha_.value *
                                                     std::pow(r, alpha_.value - 1.0) * b2);
            }
        out.report.residual_flux = den > 0.0 ? std::sqrt(num / den) : 0.0;
        out.report.residual_HJ = hj_den > 0.0 ? hj_num / hj_den : 0.0;
        out.phi = std::move(phi);
    } else {
        out.report.dual_value = std::numeric_limits<double>::quiet_NaN();
        out.report.gap = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

inline SolveResult solve_geodesic(const Field& rho0, const Field& rho1, Alpha alpha,
                                  const TorusGrid& g, const SolveConfig& cfg = {}) {
    GeodesicSolver solver(rho0, rho1, alpha, g, cfg);
    return solver.run();
}

struct SweepEntry {
    double alpha;
    double W2;
    bool converged;
    std::string error;
};

// Per-alpha solves for the interpolation table between the H^-1 and W_2 ends.
inline std::vector<SweepEntry> sweep_alpha(const Field& rho0, const Field& rho1,
                                           const TorusGrid& g, const std::vector<double>& alphas,
                                           const SolveConfig& cfg = {}) {
    std::vector<SweepEntry> out;
    for (double a : alphas) {
        SweepEntry e{a, 0.0, false, ""};
        try {
            SolveResult r = solve_geodesic(rho0, rho1, Alpha{a}, g, cfg);
            e.W2 = r.report.W2;
            e.converged = r.report.converged;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace pmot
