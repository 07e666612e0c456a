#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmot {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleMarginalsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// TorusGrid
// ---------------------------------------------------------------------------

/**
 * Uniform discretization of [0,1] x T^d, T^d = [-1/2,1/2)^d periodic.
 *
 * Cell centers sit at x_i = -1/2 + (i+1/2)h per axis; axis-a faces sit at
 * x = -1/2 + j*h, face j separating cells j-1 and j (periodic wrap).
 * Densities live on cell centers at integer times t_k = k*dt; fluxes live
 * on faces at half times t_{k+1/2}.
 */
class TorusGrid {
public:
    TorusGrid(int dim, int cells_per_axis, int time_steps)
        : d(dim), n(cells_per_axis), nt(time_steps),
          h(1.0 / cells_per_axis), dt(1.0 / time_steps) {
        if (d != 1 && d != 2) throw ConfigError("TorusGrid: d must be 1 or 2");
        if (n < 4) throw ConfigError("TorusGrid: n must be >= 4");
        if (nt < 2) throw ConfigError("TorusGrid: N_t must be >= 2");
    }

    int d;
    int n;
    int nt;
    double h;
    double dt;

    std::size_t cells() const {
        std::size_t c = 1;
        for (int a = 0; a < d; ++a) c *= static_cast<std::size_t>(n);
        return c;
    }
    double cell_volume() const { return std::pow(h, d); }

    // Row-major flat index; axis 0 is the slowest-varying coordinate.
    std::size_t index(const std::array<int, 2>& i) const {
        if (d == 1) return static_cast<std::size_t>(wrap(i[0]));
        return static_cast<std::size_t>(wrap(i[0])) * n + wrap(i[1]);
    }
    int wrap(int i) const {
        int r = i % n;
        return r < 0 ? r + n : r;
    }
    // Cell-center coordinate along one axis.
    double center(int i) const { return -0.5 + (i + 0.5) * h; }
    // Minimal-image displacement of b relative to a on the unit torus.
    static double torus_delta(double a, double b) {
        double r = b - a;
        r -= std::round(r);
        return r;
    }
};

inline bool same_layout(const TorusGrid& a, const TorusGrid& b) {
    return a.d == b.d && a.n == b.n && a.nt == b.nt;
}

// ---------------------------------------------------------------------------
// Field containers (value types, flat row-major storage)
// ---------------------------------------------------------------------------

using Field = std::vector<double>;  // one spatial slice, n^d values

/** Density path: (N_t+1) slices on cell centers, slices 0 and N_t are the
 *  prescribed marginals. */
struct DensityPath {
    explicit DensityPath(const TorusGrid& g)
        : slices(static_cast<std::size_t>(g.nt) + 1, Field(g.cells(), 0.0)) {}
    std::vector<Field> slices;

    Field& operator[](int k) { return slices[static_cast<std::size_t>(k)]; }
    const Field& operator[](int k) const { return slices[static_cast<std::size_t>(k)]; }
    int num_slices() const { return static_cast<int>(slices.size()); }
};

/** Momentum field: per axis, N_t time intervals of face values. */
struct FluxField {
    explicit FluxField(const TorusGrid& g)
        : axes(static_cast<std::size_t>(g.d),
               std::vector<Field>(static_cast<std::size_t>(g.nt), Field(g.cells(), 0.0))) {}
    // axes[a][k][face]
    std::vector<std::vector<Field>> axes;

    int num_axes() const { return static_cast<int>(axes.size()); }
    int num_intervals() const { return static_cast<int>(axes[0].size()); }
};

/** Dual potential: (N_t+1) slices on cell centers. Nonincreasing in time is a
 *  certified property, never a hard projection. */
struct Potential {
    explicit Potential(const TorusGrid& g)
        : slices(static_cast<std::size_t>(g.nt) + 1, Field(g.cells(), 0.0)) {}
    std::vector<Field> slices;

    Field& operator[](int k) { return slices[static_cast<std::size_t>(k)]; }
    const Field& operator[](int k) const { return slices[static_cast<std::size_t>(k)]; }
    int num_slices() const { return static_cast<int>(slices.size()); }
};

/** Scalar field on the centered space-time grid (N_t half-time slices). */
struct CenteredScalar {
    explicit CenteredScalar(const TorusGrid& g)
        : slices(static_cast<std::size_t>(g.nt), Field(g.cells(), 0.0)) {}
    std::vector<Field> slices;

    Field& operator[](int k) { return slices[static_cast<std::size_t>(k)]; }
    const Field& operator[](int k) const { return slices[static_cast<std::size_t>(k)]; }
};

/** Vector field on the centered space-time grid. */
struct CenteredVector {
    CenteredVector(const TorusGrid& g)
        : axes(static_cast<std::size_t>(g.d),
               std::vector<Field>(static_cast<std::size_t>(g.nt), Field(g.cells(), 0.0))) {}
    std::vector<std::vector<Field>> axes;
};

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

inline double field_sum(const Field& f) {
    double s = 0.0;
    for (double v : f) s += v;
    return s;
}

inline double field_max_abs(const Field& f) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
}

inline double dot(const Field& a, const Field& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline void axpy(double alpha, const Field& x, Field& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

// Total mass of one density slice, h^d weighted.
inline double slice_mass(const Field& f, const TorusGrid& g) {
    return field_sum(f) * g.cell_volume();
}

}  // namespace pmot
