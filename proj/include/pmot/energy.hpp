#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <sstream>

#include "pmot/core.hpp"

namespace pmot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/** Mobility exponent. value in [0,1]; 0 selects the quadratic (H^-1) mode. */
struct Alpha {
    double value = 0.8;

    bool zero_mode() const { return value == 0.0; }
    bool one_mode() const { return value == 1.0; }
    // Dual-potential features need alpha > 1 - 2/d.
    bool supports_dual(int d) const { return value > 1.0 - 2.0 / d; }

    void validate() const {
        if (!(value >= 0.0 && value <= 1.0))
            throw ConfigError("alpha must lie in [0,1]");
    }
};

// kappa_alpha = (1-alpha) alpha^{alpha/(1-alpha)} / 4^{1/(1-alpha)}.
// Continuous limits: 1/4 at alpha=0, 0 at alpha=1.
inline double dual_constant(double alpha) {
    if (alpha <= 0.0) return 0.25;
    if (alpha >= 1.0) return 0.0;
    return (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha)) /
           std::pow(4.0, 1.0 / (1.0 - alpha));
}

// d_alpha = (2-alpha) alpha^{alpha/(2-alpha)} / 2^{2/(2-alpha)}.
inline double descent_constant(double alpha) {
    if (alpha <= 0.0) return 0.5;
    return (2.0 - alpha) * std::pow(alpha, alpha / (2.0 - alpha)) /
           std::pow(2.0, 2.0 / (2.0 - alpha));
}

inline double sq_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

/**
 * Pointwise primal integrand:
 *   H(rho, w) = |w|^2 / rho^alpha  for rho > 0,
 *               0                  at (0,0),
 *               +inf               otherwise.
 * alpha = 0 degenerates to |w|^2 with rho unconstrained.
 */
inline double eval_H(double rho, std::span<const double> w, Alpha alpha) {
    if (alpha.zero_mode()) return sq_norm(w);
    if (rho < 0.0) throw std::domain_error("eval_H: negative density");
    const double w2 = sq_norm(w);
    if (rho > 0.0) return w2 / std::pow(rho, alpha.value);
    return w2 == 0.0 ? 0.0 : kInf;
}

/**
 * Pointwise dual integrand, the convex conjugate of H:
 *   L(a, b) = kappa_alpha |b|^{2/(1-alpha)} / (-a)^{alpha/(1-alpha)}  for a < 0,
 *             0     at (0,0),
 *             +inf  otherwise.
 * alpha = 0: |b|^2/4 on {a <= 0}; alpha = 1: indicator of {a + |b|^2/4 <= 0}.
 */
inline double eval_L(double a, std::span<const double> b, Alpha alpha) {
    const double b2 = sq_norm(b);
    if (alpha.zero_mode()) return a <= 0.0 ? 0.25 * b2 : kInf;
    if (alpha.one_mode()) return (a + 0.25 * b2 <= 0.0) ? 0.0 : kInf;
    const double al = alpha.value;
    if (a < 0.0) {
        if (b2 == 0.0) return 0.0;
        // log-space form; the three power factors separately under/overflow
        // for alpha near 1 even when the product is moderate
        const double inv1m = 1.0 / (1.0 - al);
        const double logL = std::log1p(-al) + al * inv1m * std::log(al) -
                            inv1m * std::log(4.0) + inv1m * std::log(b2) -
                            al * inv1m * std::log(-a);
        return std::exp(logL);
    }
    if (a == 0.0 && b2 == 0.0) return 0.0;
    return kInf;
}

struct ProxResult {
    double rho = 0.0;
    std::array<double, 2> w{0.0, 0.0};
    // Subgradient of H at the output, from the prox residual:
    //   a = (rho_in - rho)/tau,  b = (w_in - w)/tau.
    double a = 0.0;
    std::array<double, 2> b{0.0, 0.0};
};

namespace detail {

// g(rho) = |w~|^2/(rho^alpha + 2 tau) + (rho - rho~)^2/(2 tau), the objective
// after the exact inner minimization over w.
inline double prox_reduced_objective(double rho, double rho_in, double w2, double tau,
                                     double alpha) {
    return w2 / (std::pow(rho, alpha) + 2.0 * tau) +
           (rho - rho_in) * (rho - rho_in) / (2.0 * tau);
}

// F(rho) = rho - rho~ - tau alpha |w~|^2 rho^{alpha-1} / (rho^alpha + 2 tau)^2.
inline double prox_stationarity(double rho, double rho_in, double w2, double tau,
                                double alpha) {
    const double ra = std::pow(rho, alpha);
    const double t = std::pow(rho, alpha - 1.0);
    const double den = (ra + 2.0 * tau) * (ra + 2.0 * tau);
    const double val = rho - rho_in - tau * alpha * w2 * t / den;
    if (!std::isfinite(val)) return -kInf;  // rho -> 0 side for alpha < 1
    return val;
}

}  // namespace detail

/**
 * Proximal map of H: argmin over rho >= 0, w of
 *   H(rho, w) + (1/2tau)(|rho - rho_in|^2 + |w - w_in|^2).
 *
 * The inner w-minimization is exact (w = w_in rho^alpha/(rho^alpha + 2 tau));
 * the remaining scalar problem is convex and solved by safeguarded
 * Newton/bisection. The boundary candidate (0,0) is always compared.
 */
inline ProxResult prox_H(double rho_in, std::span<const double> w_in, double tau,
                         Alpha alpha) {
    if (!(tau > 0.0)) throw ConfigError("prox_H: tau must be positive");
    const int dim = static_cast<int>(w_in.size());
    ProxResult res;

    if (alpha.zero_mode()) {
        res.rho = rho_in;
        for (int a = 0; a < dim; ++a) res.w[a] = w_in[a] / (1.0 + 2.0 * tau);
        res.a = 0.0;
        for (int a = 0; a < dim; ++a) res.b[a] = (w_in[a] - res.w[a]) / tau;
        return res;
    }

    const double al = alpha.value;
    const double w2 = sq_norm(w_in);

    double rho = 0.0;
    if (w2 == 0.0) {
        rho = std::max(rho_in, 0.0);
    } else {
        const double hi0 = rho_in + tau * al * w2 / (4.0 * tau * tau) + 1.0;
        const double hi = std::max(1.0, hi0);
        double lo = std::min(1e-14, 1e-9 * hi);
        double flo = detail::prox_stationarity(lo, rho_in, w2, tau, al);
        double fhi = detail::prox_stationarity(hi, rho_in, w2, tau, al);
        if (flo >= 0.0) {
            // alpha = 1 with strongly negative rho_in: no interior root.
            rho = 0.0;
        } else {
            if (fhi <= 0.0)
                throw ConvergenceError("prox_H: bracket failure at hi=" + std::to_string(hi));
            double a_br = lo, b_br = hi;
            double x = std::min(std::max(rho_in, 0.5 * (a_br + b_br)), b_br);
            bool converged = false;
            for (int it = 0; it < 200; ++it) {
                const double f = detail::prox_stationarity(x, rho_in, w2, tau, al);
                if (f < 0.0) a_br = x; else b_br = x;
                if (b_br - a_br < 1e-12) {
                    converged = true;
                    break;
                }
                // Newton step on F, bisection fallback.
                const double ra = std::pow(x, al);
                const double den = ra + 2.0 * tau;
                const double t1 = (al - 1.0) * std::pow(x, al - 2.0) * den;
                const double t2 = 2.0 * al * std::pow(x, 2.0 * al - 2.0);
                const double fp = 1.0 - tau * al * w2 * (t1 - t2) / (den * den * den);
                double xn = (std::isfinite(fp) && fp > 0.0) ? x - f / fp : 0.5 * (a_br + b_br);
                if (!(xn > a_br && xn < b_br)) xn = 0.5 * (a_br + b_br);
                x = xn;
            }
            if (!converged) {
                std::ostringstream os;
                os << "prox_H: root solve failed (rho_in=" << rho_in << ", |w|^2=" << w2
                   << ", tau=" << tau << ", alpha=" << al << ", bracket=[" << a_br << ","
                   << b_br << "])";
                throw ConvergenceError(os.str());
            }
            rho = 0.5 * (a_br + b_br);
        }
        // Boundary comparison.
        const double interior = rho > 0.0
            ? detail::prox_reduced_objective(rho, rho_in, w2, tau, al)
            : kInf;
        const double boundary = (w2 + rho_in * rho_in) / (2.0 * tau);
        if (boundary < interior) rho = 0.0;
    }

    res.rho = rho;
    const double shrink = rho > 0.0 ? std::pow(rho, al) / (std::pow(rho, al) + 2.0 * tau) : 0.0;
    for (int a = 0; a < dim; ++a) res.w[a] = w_in[a] * shrink;
    res.a = (rho_in - res.rho) / tau;
    for (int a = 0; a < dim; ++a) res.b[a] = (w_in[a] - res.w[a]) / tau;
    return res;
}

/**
 * Brute-force conjugacy probe: for sampled (a,b) with a < 0, compare eval_L
 * against the sup of a rho + b.w - H(rho,w) over a fine lattice centered on
 * the analytic maximizer. Returns the max relative discrepancy.
 */
inline double check_conjugacy(Alpha alpha, int sample_count, unsigned seed = 0,
                              int lattice = 400) {
    alpha.validate();
    const double al = alpha.value;
    if (!(al > 0.0 && al < 1.0))
        throw ConfigError("check_conjugacy: alpha must lie in (0,1)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ua(-2.0, 2.0), ub(-1.5, 1.5);
    double worst = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        const double a = -std::exp(ua(rng));
        const double bmag = std::exp(ub(rng));
        const double bvec[1] = {bmag};
        const double L = eval_L(a, std::span<const double>(bvec, 1), alpha);

        // Analytic candidate: rho* = (alpha b^2 / (-4a))^{1/(1-alpha)}, w* = b rho*^alpha / 2.
        const double rho_star = std::pow(al * bmag * bmag / (-4.0 * a), 1.0 / (1.0 - al));
        const double w_star = bmag * std::pow(rho_star, al) / 2.0;
        double sup = 0.0;  // (rho,w) = (0,0) is always admissible
        for (int i = 1; i <= lattice; ++i) {
            const double rho = rho_star * 2.0 * i / lattice;
            const double ra = std::pow(rho, al);
            for (int j = 0; j <= lattice; ++j) {
                const double w = 2.0 * w_star * j / lattice;
                sup = std::max(sup, a * rho + bmag * w - w * w / ra);
            }
        }
        worst = std::max(worst, std::abs(sup - L) / std::max(std::abs(L), 1e-12));
    }
    return worst;
}

// Lattice sup of a rho + b.w - H over rho, w in [0, radius]; diverges with the
// radius whenever a >= 0 and b != 0 (the recession function of H vanishes only
// on w = 0).
inline double conjugacy_window_sup(double a, double bmag, Alpha alpha, double radius,
                                   int lattice = 200) {
    double sup = 0.0;
    for (int i = 1; i <= lattice; ++i) {
        const double rho = radius * i / lattice;
        const double ra = std::pow(rho, alpha.value);
        for (int j = 0; j <= lattice; ++j) {
            const double w = radius * j / lattice;
            sup = std::max(sup, a * rho + bmag * w - w * w / ra);
        }
    }
    return sup;
}

}  // namespace pmot
