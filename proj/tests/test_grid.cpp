#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pmot/operators.hpp"
#include "pmot/projection.hpp"
#include "pmot/fixtures.hpp"

using namespace pmot;

namespace {

Field random_field(std::size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Field f(m);
    for (auto& v : f) v = dist(rng);
    return f;
}

}  // namespace

TEST_CASE("grid invariants") {
    TorusGrid g(2, 8, 4);
    REQUIRE(g.cells() == 64);
    REQUIRE(g.cell_volume() * static_cast<double>(g.cells()) == Catch::Approx(1.0));
    REQUIRE_THROWS_AS(TorusGrid(3, 8, 4), ConfigError);
    REQUIRE_THROWS_AS(TorusGrid(1, 3, 4), ConfigError);
    REQUIRE_THROWS_AS(TorusGrid(1, 8, 1), ConfigError);
}

TEST_CASE("gradient of a constant field vanishes") {
    for (int d : {1, 2}) {
        TorusGrid g(d, 8, 4);
        Field phi(g.cells(), 3.7);
        std::vector<Field> grad;
        gradient_slice(phi, g, grad);
        for (int a = 0; a < d; ++a)
            for (double v : grad[a]) REQUIRE(v == 0.0);
    }
}

TEST_CASE("gradient matches hand-evaluated forward differences") {
    TorusGrid g(1, 4, 4);
    Field phi = {0.0, 1.0, 0.0, 1.0};
    std::vector<Field> grad;
    gradient_slice(phi, g, grad);
    REQUIRE(grad[0][0] == Catch::Approx(4.0));
    REQUIRE(grad[0][1] == Catch::Approx(-4.0));
    REQUIRE(grad[0][2] == Catch::Approx(4.0));
    REQUIRE(grad[0][3] == Catch::Approx(-4.0));
}

TEST_CASE("gradient/divergence adjointness on random fields") {
    std::mt19937_64 rng(7);
    for (int d : {1, 2}) {
        TorusGrid g(d, d == 1 ? 16 : 8, 4);
        for (int trial = 0; trial < 100; ++trial) {
            Field phi = random_field(g.cells(), rng);
            std::vector<Field> w(static_cast<std::size_t>(d));
            for (int a = 0; a < d; ++a) w[a] = random_field(g.cells(), rng);
            std::vector<Field> grad;
            gradient_slice(phi, g, grad);
            Field div;
            divergence_slice(w, g, div);
            double lhs = 0.0;
            for (int a = 0; a < d; ++a) lhs += dot(grad[a], w[a]);
            const double rhs = dot(phi, div);
            REQUIRE(std::abs(lhs + rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("divergence of constant flux vanishes and total divergence telescopes") {
    for (int d : {1, 2}) {
        TorusGrid g(d, 8, 4);
        std::vector<Field> w(static_cast<std::size_t>(d), Field(g.cells(), 2.5));
        Field div;
        divergence_slice(w, g, div);
        for (double v : div) REQUIRE(v == 0.0);

        std::mt19937_64 rng(3);
        for (int a = 0; a < d; ++a) w[a] = random_field(g.cells(), rng);
        divergence_slice(w, g, div);
        REQUIRE(std::abs(field_sum(div)) <= 1e-10);
    }
}

TEST_CASE("divergence of gradient equals the periodic Laplacian stencil") {
    for (int d : {1, 2}) {
        TorusGrid g(d, 4, 4);
        std::mt19937_64 rng(11);
        Field phi = random_field(g.cells(), rng);
        std::vector<Field> grad;
        gradient_slice(phi, g, grad);
        Field div;
        divergence_slice(grad, g, div);
        const int n = g.n;
        const double ih2 = 1.0 / (g.h * g.h);
        for (std::size_t c = 0; c < g.cells(); ++c) {
            double expect = 0.0;
            if (d == 1) {
                const int j = static_cast<int>(c);
                expect = (phi[(j + 1) % n] - 2.0 * phi[j] + phi[(j + n - 1) % n]) * ih2;
            } else {
                const int i = static_cast<int>(c) / n, j = static_cast<int>(c) % n;
                expect = (phi[static_cast<std::size_t>((i + 1) % n) * n + j] +
                          phi[static_cast<std::size_t>((i + n - 1) % n) * n + j] +
                          phi[static_cast<std::size_t>(i) * n + (j + 1) % n] +
                          phi[static_cast<std::size_t>(i) * n + (j + n - 1) % n] -
                          4.0 * phi[c]) * ih2;
            }
            REQUIRE(div[c] == Catch::Approx(expect).margin(1e-9));
        }
    }
}

TEST_CASE("face average: constant preserved, linear field exact away from the wrap") {
    TorusGrid g(1, 8, 4);
    Field w(g.cells(), 1.25);
    Field out;
    face_to_center_slice(w, 0, g, out);
    for (double v : out) REQUIRE(v == Catch::Approx(1.25));

    // linear-in-index field: midpoint average is exact except across the seam
    for (int j = 0; j < 8; ++j) w[j] = j;
    face_to_center_slice(w, 0, g, out);
    for (int j = 1; j < 8; ++j) REQUIRE(out[j] == Catch::Approx(j - 0.5));
}

TEST_CASE("face average then adjoint is a symmetric smoothing with unit row sums") {
    TorusGrid g(1, 4, 4);
    // Build the dense matrix of center_to_face . face_to_center.
    std::vector<std::vector<double>> M(4, std::vector<double>(4, 0.0));
    for (int e = 0; e < 4; ++e) {
        Field unit(4, 0.0);
        unit[e] = 1.0;
        Field mid, out;
        face_to_center_slice(unit, 0, g, mid);
        center_to_face_slice(mid, 0, g, out);
        for (int r = 0; r < 4; ++r) M[r][e] = out[r];
    }
    for (int r = 0; r < 4; ++r) {
        double row = 0.0;
        for (int c = 0; c < 4; ++c) {
            row += M[r][c];
            REQUIRE(M[r][c] == Catch::Approx(M[c][r]));
        }
        REQUIRE(row == Catch::Approx(1.0));
    }
    // adjointness of the pair itself
    std::mt19937_64 rng(5);
    Field a = random_field(4, rng), b = random_field(4, rng);
    Field Sa, Stb;
    face_to_center_slice(a, 0, g, Sa);
    center_to_face_slice(b, 0, g, Stb);
    REQUIRE(dot(Sa, b) == Catch::Approx(dot(a, Stb)).epsilon(1e-13));
}

TEST_CASE("spectral half-shift: orthogonal pairing away from Nyquist") {
    TorusGrid g(1, 16, 4);
    Spectral spec(g);
    std::mt19937_64 rng(23);
    // Nyquist-free fields: pairing is exactly preserved.
    Field u(g.cells()), v(g.cells());
    for (int j = 0; j < g.n; ++j) {
        const double x = g.center(j);
        u[j] = std::cos(2.0 * M_PI * x) + 0.3 * std::sin(2.0 * M_PI * 3.0 * x);
        v[j] = 0.7 * std::sin(2.0 * M_PI * 2.0 * x) + 0.1;
    }
    Field su, sv;
    spec.half_shift(u, 0, +1, su);
    spec.half_shift(v, 0, +1, sv);
    REQUIRE(dot(su, sv) == Catch::Approx(dot(u, v)).margin(1e-12));

    // constant fields are fixed points
    Field c(g.cells(), 2.0), sc;
    spec.half_shift(c, 0, +1, sc);
    for (double x : sc) REQUIRE(x == Catch::Approx(2.0));

    // adjoint identity <S u, w> = <u, S^T w> for arbitrary fields
    Field r1 = random_field(g.cells(), rng), r2 = random_field(g.cells(), rng);
    Field sr1, str2;
    spec.half_shift(r1, 0, +1, sr1);
    spec.half_shift(r2, 0, -1, str2);
    REQUIRE(dot(sr1, r2) == Catch::Approx(dot(r1, str2)).margin(1e-12));

    // smooth single mode shifts exactly onto the sampled cosine
    Field mode(g.cells()), smode;
    for (int j = 0; j < g.n; ++j) mode[j] = std::cos(2.0 * M_PI * (g.center(j) + 0.5 * g.h));
    spec.half_shift(mode, 0, +1, smode);
    for (int j = 0; j < g.n; ++j)
        REQUIRE(smode[j] == Catch::Approx(std::cos(2.0 * M_PI * g.center(j))).margin(1e-12));
}

TEST_CASE("continuity projection: residual, idempotence, fixed points") {
    for (int d : {1, 2}) {
        TorusGrid g(d, d == 1 ? 16 : 8, 6);
        Spectral spec(g);
        std::mt19937_64 rng(101);

        Field rho0 = fixtures::uniform_density(g);
        Field rho1 = fixtures::uniform_density(g);

        DensityPath rho(g);
        for (int j = 0; j <= g.nt; ++j) rho[j] = Field(g.cells(), 1.0);
        FluxField w(g);
        for (int a = 0; a < d; ++a)
            for (int k = 0; k < g.nt; ++k) w.axes[a][k] = random_field(g.cells(), rng);

        ProjectionResult pr = project_continuity(rho, w, rho0, rho1, g, spec);
        REQUIRE(continuity_residual(pr.rho, pr.w, g) <= 1e-10);

        // idempotence
        ProjectionResult pr2 = project_continuity(pr.rho, pr.w, rho0, rho1, g, spec);
        for (int j = 0; j <= g.nt; ++j)
            for (std::size_t c = 0; c < g.cells(); ++c)
                REQUIRE(std::abs(pr2.rho[j][c] - pr.rho[j][c]) <= 1e-12);
        for (int a = 0; a < d; ++a)
            for (int k = 0; k < g.nt; ++k)
                for (std::size_t c = 0; c < g.cells(); ++c)
                    REQUIRE(std::abs(pr2.w.axes[a][k][c] - pr.w.axes[a][k][c]) <= 1e-12);
    }
}

TEST_CASE("continuity projection leaves feasible inputs unchanged") {
    TorusGrid g(1, 16, 4);
    Spectral spec(g);
    Field rho0 = fixtures::gaussian_bump(g, -0.2, 0.1, 0.5);
    Field rho1 = fixtures::gaussian_bump(g, 0.2, 0.1, 0.5);

    // any projected pair is feasible; re-project and compare
    DensityPath rho(g);
    for (int j = 0; j <= g.nt; ++j) {
        const double t = static_cast<double>(j) / g.nt;
        for (std::size_t c = 0; c < g.cells(); ++c)
            rho[j][c] = (1.0 - t) * rho0[c] + t * rho1[c];
    }
    FluxField w(g);
    ProjectionResult feas = project_continuity(rho, w, rho0, rho1, g, spec);
    ProjectionResult again = project_continuity(feas.rho, feas.w, rho0, rho1, g, spec);
    for (int j = 0; j <= g.nt; ++j)
        for (std::size_t c = 0; c < g.cells(); ++c)
            REQUIRE(std::abs(again.rho[j][c] - feas.rho[j][c]) <= 1e-12);
    for (int k = 0; k < g.nt; ++k)
        for (std::size_t c = 0; c < g.cells(); ++c)
            REQUIRE(std::abs(again.w.axes[0][k][c] - feas.w.axes[0][k][c]) <= 1e-12);
    // multiplier of an exact fixed point is zero
    for (int k = 0; k < g.nt; ++k)
        REQUIRE(field_max_abs(again.multiplier[k]) <= 1e-12);
}

TEST_CASE("projection rejects mismatched marginal masses") {
    TorusGrid g(1, 8, 4);
    Spectral spec(g);
    Field rho0(g.cells(), 1.0);
    Field rho1(g.cells(), 1.5);
    DensityPath rho(g);
    FluxField w(g);
    REQUIRE_THROWS_AS(project_continuity(rho, w, rho0, rho1, g, spec),
                      InfeasibleMarginalsError);
}

TEST_CASE("projection fixes per-slice masses to the shared total") {
    TorusGrid g(1, 16, 8);
    Spectral spec(g);
    std::mt19937_64 rng(19);
    Field rho0 = fixtures::random_density(g, 1);
    Field rho1 = fixtures::random_density(g, 2);
    DensityPath rho(g);
    for (int j = 0; j <= g.nt; ++j) rho[j] = random_field(g.cells(), rng);
    FluxField w(g);
    for (int k = 0; k < g.nt; ++k) w.axes[0][k] = random_field(g.cells(), rng);
    ProjectionResult pr = project_continuity(rho, w, rho0, rho1, g, spec);
    for (int j = 0; j <= g.nt; ++j)
        REQUIRE(slice_mass(pr.rho[j], g) == Catch::Approx(1.0).margin(1e-9));
}
