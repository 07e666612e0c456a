#pragma once

#include <complex>
#include <numeric>
#include <random>

#include "pmot/core.hpp"
#include "pmot/energy.hpp"

// Independent ground-truth computations for acceptance tests. These share no
// numerical kernels with the solver: transforms are naive DFT loops, the tiny
// solve is plain projected gradient on an explicit kernel basis (no prox, no
// FFT library).

namespace pmot {
namespace oracle {

namespace detail {

using cd = std::complex<double>;

// Naive separable DFT of one spatial slice, normalized by 1/n^d.
inline std::vector<cd> naive_dft(const Field& f, const TorusGrid& g) {
    const int n = g.n;
    std::vector<cd> out;
    if (g.d == 1) {
        out.assign(n, cd{0.0, 0.0});
        for (int q = 0; q < n; ++q) {
            cd s{0.0, 0.0};
            for (int j = 0; j < n; ++j) {
                const double arg = -2.0 * M_PI * q * j / n;
                s += f[j] * cd{std::cos(arg), std::sin(arg)};
            }
            out[q] = s / static_cast<double>(n);
        }
    } else {
        std::vector<cd> rows(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int q = 0; q < n; ++q) {
                cd s{0.0, 0.0};
                for (int j = 0; j < n; ++j) {
                    const double arg = -2.0 * M_PI * q * j / n;
                    s += f[static_cast<std::size_t>(i) * n + j] * cd{std::cos(arg), std::sin(arg)};
                }
                rows[static_cast<std::size_t>(i) * n + q] = s;
            }
        out.assign(static_cast<std::size_t>(n) * n, cd{0.0, 0.0});
        for (int q0 = 0; q0 < n; ++q0)
            for (int q1 = 0; q1 < n; ++q1) {
                cd s{0.0, 0.0};
                for (int i = 0; i < n; ++i) {
                    const double arg = -2.0 * M_PI * q0 * i / n;
                    s += rows[static_cast<std::size_t>(i) * n + q1] * cd{std::cos(arg), std::sin(arg)};
                }
                out[static_cast<std::size_t>(q0) * n + q1] = s / static_cast<double>(n * n);
            }
    }
    return out;
}

inline double laplacian_symbol(int q0, int q1, const TorusGrid& g) {
    auto one = [&](int q) {
        const double s = std::sin(M_PI * q / g.n);
        return 4.0 * s * s / (g.h * g.h);
    };
    return g.d == 1 ? one(q0) : one(q0) + one(q1);
}

}  // namespace detail

/**
 * Squared H^-1 distance on the discrete torus: the exact minimum of
 * int int |w|^2 over the discrete continuity equation (w constant in time),
 *   sum over modes q != 0 of |rho1^ - rho0^|^2 / lambda_q,
 * with lambda_q the discrete Laplacian symbol of the staggered stencil.
 */
inline double hminus1_distance(const Field& rho0, const Field& rho1, const TorusGrid& g) {
    if (std::abs(slice_mass(rho0, g) - slice_mass(rho1, g)) > 1e-9)
        throw InfeasibleMarginalsError("hminus1_distance: marginal masses differ");
    Field delta(rho0.size());
    for (std::size_t c = 0; c < delta.size(); ++c) delta[c] = rho1[c] - rho0[c];
    const auto dhat = detail::naive_dft(delta, g);
    double total = 0.0;
    const int n = g.n;
    if (g.d == 1) {
        for (int q = 1; q < n; ++q)
            total += std::norm(dhat[q]) / detail::laplacian_symbol(q, 0, g);
    } else {
        for (int q0 = 0; q0 < n; ++q0)
            for (int q1 = 0; q1 < n; ++q1) {
                if (q0 == 0 && q1 == 0) continue;
                total += std::norm(dhat[static_cast<std::size_t>(q0) * n + q1]) /
                         detail::laplacian_symbol(q0, q1, g);
            }
    }
    return total;
}

namespace detail {

// Quantile function of a piecewise-constant density on the 1-D torus,
// evaluated at sorted u values in (0,1).
struct QuantileTable {
    std::vector<double> cum;  // cumulative mass at cell boundaries, cum[0]=0, cum[n]=1
    const TorusGrid* g;

    explicit QuantileTable(const Field& rho, const TorusGrid& grid) : g(&grid) {
        const int n = grid.n;
        cum.assign(n + 1, 0.0);
        double mass = 0.0;
        for (int i = 0; i < n; ++i) mass += rho[i] * grid.h;
        for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + rho[i] * grid.h / mass;
        cum[n] = 1.0;
    }

    // u may be any real; lifted so Q(u+1) = Q(u)+1
    double operator()(double u) const {
        const double k = std::floor(u);
        const double uf = u - k;
        const int n = g->n;
        int lo = 0, hi = n;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            if (cum[mid] <= uf) lo = mid; else hi = mid;
        }
        const double cell_mass = cum[lo + 1] - cum[lo];
        const double frac = cell_mass > 0.0 ? (uf - cum[lo]) / cell_mass : 0.0;
        return -0.5 + (lo + frac) * g->h + k;
    }
};

// Exact integral of (Q1(u+theta) - Q0(u))^2 over u in (0,1): the integrand is
// piecewise linear between the merged quantile breakpoints, so each segment
// integrates in closed form (reconstructed from its two quarter points, which
// keeps one-sided values away from the jump locations).
inline double shifted_quantile_cost(const QuantileTable& q0, const QuantileTable& q1,
                                    double theta) {
    std::vector<double> cuts;
    cuts.reserve(q0.cum.size() + q1.cum.size() + 2);
    for (double u : q0.cum)
        if (u > 0.0 && u < 1.0) cuts.push_back(u);
    for (double u : q1.cum) {
        double v = u - theta;
        v -= std::floor(v);
        if (v > 0.0 && v < 1.0) cuts.push_back(v);
    }
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s], b = cuts[s + 1];
        const double len = b - a;
        if (len <= 1e-15) continue;
        const double u1 = a + 0.25 * len, u3 = a + 0.75 * len;
        const double d1 = q1(u1 + theta) - q0(u1);
        const double d3 = q1(u3 + theta) - q0(u3);
        const double da = (3.0 * d1 - d3) / 2.0;
        const double db = (3.0 * d3 - d1) / 2.0;
        total += len * (da * da + da * db + db * db) / 3.0;
    }
    return total;
}

inline double w2_directional(const Field& rho0, const Field& rho1, const TorusGrid& g) {
    QuantileTable q0(rho0, g), q1(rho1, g);
    // cost(theta) is convex; coarse scan then golden-section refinement.
    double best_theta = 0.0, best = kInf;
    const int coarse = 256;
    for (int i = -coarse; i <= coarse; ++i) {
        const double th = static_cast<double>(i) / coarse;
        const double c = shifted_quantile_cost(q0, q1, th);
        if (c < best) {
            best = c;
            best_theta = th;
        }
    }
    double a = best_theta - 1.0 / coarse, b = best_theta + 1.0 / coarse;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = shifted_quantile_cost(q0, q1, x1);
    double f2 = shifted_quantile_cost(q0, q1, x2);
    for (int it = 0; it < 120 && b - a > 1e-13; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = shifted_quantile_cost(q0, q1, x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = shifted_quantile_cost(q0, q1, x2);
        }
    }
    return std::min(f1, f2);
}

}  // namespace detail

/**
 * Squared 2-Wasserstein distance on the 1-D torus via the shifted-quantile
 * characterization: min over the cyclic mass shift theta of
 * int_0^1 |Q0(u) - Q1(u+theta)|^2 du with lifted quantiles.
 * Symmetrized so the result is bit-exact under argument swap.
 */
inline double w2_periodic_1d(const Field& rho0, const Field& rho1, const TorusGrid& g) {
    if (g.d != 1) throw DimensionError("w2_periodic_1d: requires d = 1");
    const double f = detail::w2_directional(rho0, rho1, g);
    const double r = detail::w2_directional(rho1, rho0, g);
    return 0.5 * (f + r);
}

// ---------------------------------------------------------------------------
// Tiny brute-force solve
// ---------------------------------------------------------------------------

namespace detail {

// Half-cell spectral shift of one 1-D slice by naive DFT (Nyquist killed);
// direction=+1 faces->centers, -1 is the adjoint.
inline Field naive_half_shift(const Field& f, int direction) {
    const int n = static_cast<int>(f.size());
    std::vector<cd> hat(n);
    for (int q = 0; q < n; ++q) {
        cd s{0.0, 0.0};
        for (int j = 0; j < n; ++j) {
            const double arg = -2.0 * M_PI * q * j / n;
            s += f[j] * cd{std::cos(arg), std::sin(arg)};
        }
        hat[q] = s;
    }
    Field out(n, 0.0);
    for (int j = 0; j < n; ++j) {
        cd s{0.0, 0.0};
        for (int q = 0; q < n; ++q) {
            if (2 * q == n) continue;
            const int qs = (2 * q > n) ? q - n : q;
            const double ph = -direction * M_PI * qs / n;  // face at center + h/2
            const double arg = 2.0 * M_PI * q * j / n;
            s += hat[q] * cd{std::cos(ph), std::sin(ph)} * cd{std::cos(arg), std::sin(arg)};
        }
        out[j] = s.real() / n;
    }
    return out;
}

struct TinyProblem {
    const TorusGrid* g;
    Alpha alpha;
    Field rho0, rho1;
    int m;          // cells
    int n_rho;      // interior density unknowns
    int n_w;        // flux unknowns
    std::vector<double> x0;              // feasible point
    std::vector<std::vector<double>> B;  // kernel basis vectors

    int dim() const { return n_rho + n_w; }

    // rho slice j (0..nt) from unknown vector x
    Field rho_slice(const std::vector<double>& x, int j) const {
        if (j == 0) return rho0;
        if (j == g->nt) return rho1;
        Field r(m);
        for (int c = 0; c < m; ++c) r[c] = x[static_cast<std::size_t>(j - 1) * m + c];
        return r;
    }
    Field w_slice(const std::vector<double>& x, int k) const {
        Field w(m);
        for (int c = 0; c < m; ++c) w[c] = x[static_cast<std::size_t>(n_rho) + static_cast<std::size_t>(k) * m + c];
        return w;
    }

    // The solver's discrete energy: time-averaged density, half-shifted flux
    // (identity placement at alpha = 0).
    double energy(const std::vector<double>& x) const {
        double total = 0.0;
        for (int k = 0; k < g->nt; ++k) {
            const Field lo = rho_slice(x, k), hi = rho_slice(x, k + 1);
            Field w = w_slice(x, k);
            if (!alpha.zero_mode()) w = naive_half_shift(w, +1);
            for (int c = 0; c < m; ++c) {
                const double rbar = 0.5 * (lo[c] + hi[c]);
                double hval;
                if (alpha.zero_mode()) {
                    hval = w[c] * w[c];
                } else if (rbar > 0.0) {
                    hval = w[c] * w[c] / std::pow(rbar, alpha.value);
                } else {
                    hval = (w[c] == 0.0) ? 0.0 : kInf;
                }
                total += hval;
                if (!std::isfinite(total)) return kInf;
            }
        }
        return total * g->dt * g->cell_volume();
    }

    std::vector<double> energy_gradient(const std::vector<double>& x) const {
        std::vector<double> grad(static_cast<std::size_t>(dim()), 0.0);
        const double wgt = g->dt * g->cell_volume();
        for (int k = 0; k < g->nt; ++k) {
            const Field lo = rho_slice(x, k), hi = rho_slice(x, k + 1);
            Field wbar = w_slice(x, k);
            if (!alpha.zero_mode()) wbar = naive_half_shift(wbar, +1);
            Field dW(m, 0.0);
            for (int c = 0; c < m; ++c) {
                const double rbar = 0.5 * (lo[c] + hi[c]);
                double dH_drho = 0.0, dH_dw = 0.0;
                if (alpha.zero_mode()) {
                    dH_dw = 2.0 * wbar[c];
                } else if (rbar > 0.0) {
                    const double ra = std::pow(rbar, alpha.value);
                    dH_dw = 2.0 * wbar[c] / ra;
                    dH_drho = -alpha.value * wbar[c] * wbar[c] / (ra * rbar);
                }
                dW[c] = wgt * dH_dw;
                const double drho = wgt * dH_drho * 0.5;  // time-average adjoint
                if (k >= 1) grad[static_cast<std::size_t>(k - 1) * m + c] += drho;
                if (k + 1 <= g->nt - 1) grad[static_cast<std::size_t>(k) * m + c] += drho;
            }
            if (!alpha.zero_mode()) dW = naive_half_shift(dW, -1);
            for (int c = 0; c < m; ++c)
                grad[static_cast<std::size_t>(n_rho) + static_cast<std::size_t>(k) * m + c] += dW[c];
        }
        return grad;
    }
};

// Dense RREF nullspace of the continuity constraint matrix; column order is
// permuted by `variant` to exercise basis independence.
inline std::vector<std::vector<double>> kernel_basis(const std::vector<std::vector<double>>& A,
                                                     int dim, int variant) {
    std::vector<int> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    if (variant != 0) std::reverse(perm.begin(), perm.end());

    std::vector<std::vector<double>> M;
    for (const auto& row : A) {
        std::vector<double> r(dim);
        for (int j = 0; j < dim; ++j) r[j] = row[perm[j]];
        M.push_back(r);
    }
    const int rows = static_cast<int>(M.size());
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < dim && r < rows; ++c) {
        int piv = -1;
        double best = 1e-10;
        for (int i = r; i < rows; ++i)
            if (std::abs(M[i][c]) > best) {
                best = std::abs(M[i][c]);
                piv = i;
            }
        if (piv < 0) continue;
        std::swap(M[r], M[piv]);
        const double d = M[r][c];
        for (int j = 0; j < dim; ++j) M[r][j] /= d;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double f = M[i][c];
            if (f != 0.0)
                for (int j = 0; j < dim; ++j) M[i][j] -= f * M[r][j];
        }
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<bool> is_pivot(dim, false);
    for (int c : pivot_col) is_pivot[c] = true;
    std::vector<std::vector<double>> basis;
    for (int c = 0; c < dim; ++c) {
        if (is_pivot[c]) continue;
        std::vector<double> v(dim, 0.0);
        v[c] = 1.0;
        for (int i = 0; i < static_cast<int>(pivot_col.size()); ++i)
            v[pivot_col[i]] = -M[i][c];
        // undo the permutation
        std::vector<double> u(dim, 0.0);
        for (int j = 0; j < dim; ++j) u[perm[j]] = v[j];
        basis.push_back(u);
    }
    return basis;
}

}  // namespace detail

struct BruteForceOptions {
    double tol = 1e-10;
    long max_iter = 1000000;
    int basis_variant = 0;
};

/**
 * Exhaustive-style oracle for tiny instances (d=1, n<=4, N_t<=2): minimize the
 * discrete energy over the affine feasible set parameterized by an explicit
 * kernel basis, by damped gradient descent. Independent of the main solver.
 */
inline double brute_force_tiny(const Field& rho0, const Field& rho1, Alpha alpha,
                               const TorusGrid& g, BruteForceOptions opt = {}) {
    if (g.d != 1) throw DimensionError("brute_force_tiny: requires d = 1");
    detail::TinyProblem P;
    P.g = &g;
    P.alpha = alpha;
    P.rho0 = rho0;
    P.rho1 = rho1;
    P.m = static_cast<int>(g.cells());
    P.n_rho = (g.nt - 1) * P.m;
    P.n_w = g.nt * P.m;
    if (P.dim() > 32) throw ConfigError("brute_force_tiny: instance too large");
    if (std::abs(slice_mass(rho0, g) - slice_mass(rho1, g)) > 1e-9)
        throw InfeasibleMarginalsError("brute_force_tiny: marginal masses differ");

    // Constraint rows: (rho_{k+1}-rho_k)/dt + div w_k = 0 per (k, cell).
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    const int m = P.m;
    for (int k = 0; k < g.nt; ++k)
        for (int c = 0; c < m; ++c) {
            std::vector<double> row(static_cast<std::size_t>(P.dim()), 0.0);
            double rhs = 0.0;
            if (k + 1 <= g.nt - 1)
                row[static_cast<std::size_t>(k) * m + c] += 1.0 / g.dt;
            else
                rhs -= rho1[c] / g.dt;
            if (k >= 1)
                row[static_cast<std::size_t>(k - 1) * m + c] -= 1.0 / g.dt;
            else
                rhs += rho0[c] / g.dt;
            // div w[c] = (w[c] - w[c-1])/h
            row[static_cast<std::size_t>(P.n_rho) + static_cast<std::size_t>(k) * m + c] += 1.0 / g.h;
            row[static_cast<std::size_t>(P.n_rho) + static_cast<std::size_t>(k) * m + (c + m - 1) % m] -= 1.0 / g.h;
            A.push_back(row);
            b.push_back(rhs);
        }

    // Feasible start: linear density interpolation, fluxes by cumulative sums.
    std::vector<double> x0(static_cast<std::size_t>(P.dim()), 0.0);
    for (int j = 1; j <= g.nt - 1; ++j) {
        const double t = static_cast<double>(j) / g.nt;
        for (int c = 0; c < m; ++c)
            x0[static_cast<std::size_t>(j - 1) * m + c] = (1.0 - t) * rho0[c] + t * rho1[c];
    }
    for (int k = 0; k < g.nt; ++k) {
        // div w_k[c] = (w[c]-w[c-1])/h = -(rho_{k+1}-rho_k)/dt; integrate from
        // w[0], the wrap equation closes because the slice masses agree.
        const Field lo = P.rho_slice(x0, k), hi = P.rho_slice(x0, k + 1);
        const std::size_t base = static_cast<std::size_t>(P.n_rho) + static_cast<std::size_t>(k) * m;
        x0[base] = 0.0;
        for (int c = 1; c < m; ++c)
            x0[base + c] = x0[base + c - 1] - (hi[c] - lo[c]) / g.dt * g.h;
        double mean = 0.0;
        for (int c = 0; c < m; ++c) mean += x0[base + c];
        mean /= m;
        for (int c = 0; c < m; ++c) x0[base + c] -= mean;
    }
    P.x0 = x0;
    P.B = detail::kernel_basis(A, P.dim(), opt.basis_variant);

    // Damped gradient descent in kernel coordinates.
    const int kdim = static_cast<int>(P.B.size());
    std::vector<double> z(static_cast<std::size_t>(kdim), 0.0);
    auto assemble = [&](const std::vector<double>& zz) {
        std::vector<double> x = P.x0;
        for (int i = 0; i < kdim; ++i)
            for (int j = 0; j < P.dim(); ++j) x[j] += zz[i] * P.B[i][j];
        return x;
    };
    double step = 0.1;
    std::vector<double> x = assemble(z);
    double e = P.energy(x);
    for (long it = 0; it < opt.max_iter; ++it) {
        const auto gx = P.energy_gradient(x);
        std::vector<double> gz(static_cast<std::size_t>(kdim), 0.0);
        double gnorm = 0.0;
        for (int i = 0; i < kdim; ++i) {
            for (int j = 0; j < P.dim(); ++j) gz[i] += P.B[i][j] * gx[j];
            gnorm += gz[i] * gz[i];
        }
        gnorm = std::sqrt(gnorm);
        if (gnorm < opt.tol) break;
        std::vector<double> zn(static_cast<std::size_t>(kdim));
        double en = kInf;
        for (int tries = 0; tries < 60; ++tries) {
            for (int i = 0; i < kdim; ++i) zn[i] = z[i] - step * gz[i];
            en = P.energy(assemble(zn));
            if (en < e) break;
            step *= 0.5;
        }
        if (!(en < e)) break;  // stalled at numerical floor
        z = zn;
        x = assemble(z);
        e = en;
        step *= 1.1;
    }
    return e;
}

}  // namespace oracle
}  // namespace pmot
