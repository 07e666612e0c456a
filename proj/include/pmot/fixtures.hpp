#pragma once

#include <random>

#include "pmot/core.hpp"

namespace pmot {
namespace fixtures {

// Periodic Gaussian bump on a floor, normalized to unit mass.
inline Field gaussian_bump(const TorusGrid& g, double center0, double sigma,
                           double floor_level, double center1 = 0.0) {
    Field f(g.cells(), 0.0);
    const int n = g.n;
    auto bump1d = [&](double x, double c) {
        double s = 0.0;
        for (int k = -2; k <= 2; ++k) {
            const double d = x - c + k;
            s += std::exp(-0.5 * d * d / (sigma * sigma));
        }
        return s;
    };
    if (g.d == 1) {
        for (int i = 0; i < n; ++i) f[i] = floor_level + bump1d(g.center(i), center0);
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                f[static_cast<std::size_t>(i) * n + j] =
                    floor_level + bump1d(g.center(i), center0) * bump1d(g.center(j), center1);
    }
    const double mass = slice_mass(f, g);
    for (double& v : f) v /= mass;
    return f;
}

inline Field uniform_density(const TorusGrid& g) { return Field(g.cells(), 1.0); }

// Smooth strictly positive random density from a few low-frequency modes.
inline Field random_density(const TorusGrid& g, unsigned seed, double roughness = 0.4,
                            int max_mode = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Field f(g.cells(), 1.0);
    const int n = g.n;
    for (int m = 1; m <= max_mode; ++m) {
        const double ac = amp(rng) * roughness / m;
        const double as = amp(rng) * roughness / m;
        if (g.d == 1) {
            for (int i = 0; i < n; ++i) {
                const double x = g.center(i);
                f[i] += ac * std::cos(2.0 * M_PI * m * x) + as * std::sin(2.0 * M_PI * m * x);
            }
        } else {
            const double bc = amp(rng) * roughness / m;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const double x = g.center(i), y = g.center(j);
                    f[static_cast<std::size_t>(i) * n + j] +=
                        ac * std::cos(2.0 * M_PI * m * x) + as * std::sin(2.0 * M_PI * m * y) +
                        bc * std::cos(2.0 * M_PI * m * (x + y));
                }
        }
    }
    double mn = f[0];
    for (double v : f) mn = std::min(mn, v);
    if (mn < 0.1)
        for (double& v : f) v += 0.1 - mn;
    const double mass = slice_mass(f, g);
    for (double& v : f) v /= mass;
    return f;
}

struct BumpPair {
    Field rho0;
    Field rho1;
    std::string name;
};

// The three 1-D bump-pair fixtures used throughout the acceptance suite.
inline std::vector<BumpPair> bump_pairs_1d(const TorusGrid& g) {
    return {
        {gaussian_bump(g, -0.22, 0.09, 0.5), gaussian_bump(g, 0.22, 0.09, 0.5), "bump_a"},
        {gaussian_bump(g, -0.15, 0.12, 0.8), gaussian_bump(g, 0.15, 0.12, 0.8), "bump_b"},
        {gaussian_bump(g, -0.10, 0.08, 0.3), gaussian_bump(g, 0.15, 0.10, 0.3), "bump_c"},
    };
}

// Canonical converged-solve fixture (bump_a at alpha = 0.8).
inline BumpPair canonical_pair(const TorusGrid& g) { return bump_pairs_1d(g)[0]; }

}  // namespace fixtures
}  // namespace pmot
