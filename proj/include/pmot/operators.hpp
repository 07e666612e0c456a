#pragma once

#include "pmot/core.hpp"

namespace pmot {

// Discrete differential operators on the staggered torus grid. Axis-a face j
// sits between cells j and j+1 (the right face of cell j, at center + h/2).
// The pair (gradient, divergence) is an exact negative-adjoint pair:
//   <grad phi, w>_faces = -<phi, div w>_cells   (unweighted sums).

// Forward difference across each face, divided by h; one face array per axis.
inline void gradient_slice(const Field& phi, const TorusGrid& g,
                           std::vector<Field>& out) {
    out.resize(static_cast<std::size_t>(g.d));
    for (auto& f : out) f.assign(g.cells(), 0.0);
    const int n = g.n;
    const double inv_h = 1.0 / g.h;
    if (g.d == 1) {
        for (int j = 0; j < n; ++j) {
            const int jp = (j + 1) % n;
            out[0][j] = (phi[jp] - phi[j]) * inv_h;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const int ip = (i + 1) % n;
            for (int j = 0; j < n; ++j) {
                const int jp = (j + 1) % n;
                const std::size_t c = static_cast<std::size_t>(i) * n + j;
                out[0][c] = (phi[static_cast<std::size_t>(ip) * n + j] - phi[c]) * inv_h;
                out[1][c] = (phi[static_cast<std::size_t>(i) * n + jp] - phi[c]) * inv_h;
            }
        }
    }
}

// Backward difference of face values, divided by h; exactly -gradient^T.
inline void divergence_slice(const std::vector<Field>& w, const TorusGrid& g,
                             Field& out) {
    out.assign(g.cells(), 0.0);
    if (static_cast<int>(w.size()) != g.d)
        throw ConfigError("divergence_slice: axis count does not match grid");
    const int n = g.n;
    const double inv_h = 1.0 / g.h;
    if (g.d == 1) {
        for (int j = 0; j < n; ++j) {
            const int jm = (j + n - 1) % n;
            out[j] = (w[0][j] - w[0][jm]) * inv_h;
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n;
            for (int j = 0; j < n; ++j) {
                const int jm = (j + n - 1) % n;
                const std::size_t c = static_cast<std::size_t>(i) * n + j;
                out[c] = (w[0][c] - w[0][static_cast<std::size_t>(im) * n + j]) * inv_h +
                         (w[1][c] - w[1][static_cast<std::size_t>(i) * n + jm]) * inv_h;
            }
        }
    }
}

// Two-point face average per axis: face field -> cell-centered value.
// Cell c along axis a sees faces c-1 and c.
inline void face_to_center_slice(const Field& w_axis, int axis, const TorusGrid& g,
                                 Field& out) {
    out.assign(g.cells(), 0.0);
    const int n = g.n;
    if (g.d == 1) {
        for (int j = 0; j < n; ++j) out[j] = 0.5 * (w_axis[(j + n - 1) % n] + w_axis[j]);
    } else if (axis == 0) {
        for (int i = 0; i < n; ++i) {
            const int im = (i + n - 1) % n;
            for (int j = 0; j < n; ++j)
                out[static_cast<std::size_t>(i) * n + j] =
                    0.5 * (w_axis[static_cast<std::size_t>(im) * n + j] +
                           w_axis[static_cast<std::size_t>(i) * n + j]);
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int jm = (j + n - 1) % n;
                out[static_cast<std::size_t>(i) * n + j] =
                    0.5 * (w_axis[static_cast<std::size_t>(i) * n + jm] +
                           w_axis[static_cast<std::size_t>(i) * n + j]);
            }
    }
}

// Adjoint of face_to_center_slice: scatter centered values back to faces.
inline void center_to_face_slice(const Field& v, int axis, const TorusGrid& g,
                                 Field& out) {
    out.assign(g.cells(), 0.0);
    const int n = g.n;
    if (g.d == 1) {
        for (int j = 0; j < n; ++j) out[j] = 0.5 * (v[j] + v[(j + 1) % n]);
    } else if (axis == 0) {
        for (int i = 0; i < n; ++i) {
            const int ip = (i + 1) % n;
            for (int j = 0; j < n; ++j)
                out[static_cast<std::size_t>(i) * n + j] =
                    0.5 * (v[static_cast<std::size_t>(i) * n + j] +
                           v[static_cast<std::size_t>(ip) * n + j]);
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int jp = (j + 1) % n;
                out[static_cast<std::size_t>(i) * n + j] =
                    0.5 * (v[static_cast<std::size_t>(i) * n + j] +
                           v[static_cast<std::size_t>(i) * n + jp]);
            }
    }
}

// Whole-path wrappers used by tests and the certification module.

inline std::vector<std::vector<Field>> gradient(const Potential& phi, const TorusGrid& g) {
    if (phi.num_slices() != g.nt + 1)
        throw ConfigError("gradient: potential shape does not match grid");
    std::vector<std::vector<Field>> out(static_cast<std::size_t>(phi.num_slices()));
    for (int k = 0; k < phi.num_slices(); ++k) gradient_slice(phi[k], g, out[k]);
    return out;
}

inline std::vector<Field> divergence(const FluxField& w, const TorusGrid& g) {
    if (w.num_axes() != g.d || w.num_intervals() != g.nt)
        throw ConfigError("divergence: flux shape does not match grid");
    std::vector<Field> out(static_cast<std::size_t>(g.nt));
    std::vector<Field> slice(static_cast<std::size_t>(g.d));
    for (int k = 0; k < g.nt; ++k) {
        for (int a = 0; a < g.d; ++a) slice[a] = w.axes[a][k];
        divergence_slice(slice, g, out[k]);
    }
    return out;
}

// Two-slice average of the density path onto half times.
inline void time_average(const DensityPath& rho, const TorusGrid& g, CenteredScalar& out) {
    for (int k = 0; k < g.nt; ++k) {
        const Field& lo = rho[k];
        const Field& hi = rho[k + 1];
        Field& dst = out[k];
        for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = 0.5 * (lo[c] + hi[c]);
    }
}

// Adjoint of time_average: centered half-time slices -> (N_t+1) slices.
inline void time_average_adjoint(const CenteredScalar& v, const TorusGrid& g,
                                 DensityPath& out) {
    for (int j = 0; j <= g.nt; ++j) std::fill(out[j].begin(), out[j].end(), 0.0);
    for (int k = 0; k < g.nt; ++k) {
        const Field& src = v[k];
        for (std::size_t c = 0; c < src.size(); ++c) {
            out[k][c] += 0.5 * src[c];
            out[k + 1][c] += 0.5 * src[c];
        }
    }
}

// Max-norm residual of the discrete continuity equation.
inline double continuity_residual(const DensityPath& rho, const FluxField& w,
                                  const TorusGrid& g) {
    double worst = 0.0;
    Field div(g.cells());
    std::vector<Field> slice(static_cast<std::size_t>(g.d));
    for (int k = 0; k < g.nt; ++k) {
        for (int a = 0; a < g.d; ++a) slice[a] = w.axes[a][k];
        divergence_slice(slice, g, div);
        const Field& lo = rho[k];
        const Field& hi = rho[k + 1];
        for (std::size_t c = 0; c < div.size(); ++c) {
            const double r = (hi[c] - lo[c]) / g.dt + div[c];
            worst = std::max(worst, std::abs(r));
        }
    }
    return worst;
}

}  // namespace pmot
