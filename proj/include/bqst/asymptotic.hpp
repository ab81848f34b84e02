#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "bqst/parallel.hpp"
#include "bqst/simplex.hpp"

namespace bqst {

/// Rescaled arrival parameters of the N -> infinity amplitude:
/// tau = (1/6)(x/2)^3 t and sigma = (x/2) s with s the arrival delay.
struct AsymptoticParams {
    double tau = 0.0;
    double sigma = 0.0;
};

struct AsymptoticOptimum {
    AsymptoticParams params;
    double value = 0.0;
};

struct ScalingConstants {
    double x_coefficient;      // x_opt ~ 2 (6 tau*)^{1/3} N^{-1/3}
    double y_coefficient;      // y_opt ~ 2^{1/4} sqrt(x-coefficient) N^{-1/6}
    double delay_coefficient;  // s ~ (2 sigma* / x-coefficient) N^{1/3}
    AsymptoticOptimum optimum;
};

namespace detail {

// 15-point Kronrod nodes/weights with the embedded 7-point Gauss rule
// (nonnegative half; node 7 is the midpoint).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct OscIntegrand {
    double tau, sigma;
    // weight (1+tan^2 z)/(1+tan^4 z)
    static double weight(double z) {
        const double t = std::tan(z);
        const double t2 = t * t;
        return (1.0 + t2) / (1.0 + t2 * t2);
    }
    // phase tau tan^3 z - sigma tan z + 2 atan(tan 2z / sqrt2); the principal
    // atan is continuous away from z = pi/4, and the 2 pi jump across pi/4 is
    // invisible to the cosine (panels never straddle pi/4).
    double phase(double z) const {
        const double t = std::tan(z);
        return tau * t * t * t - sigma * t + 2.0 * std::atan(std::tan(2.0 * z) / std::numbers::sqrt2);
    }
    double operator()(double z) const { return weight(z) * std::cos(phase(z)); }
};

struct PanelEstimate {
    double integral;
    double error;
    double phase_span;
    double weight_max;
};

inline PanelEstimate gk15(const OscIntegrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double kron = 0.0, gauss = 0.0, wmax = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        const double off = h * kKronrodNodes[i];
        const double zl = c - off, zr = c + off;
        const double wl = OscIntegrand::weight(zl);
        const double wr = OscIntegrand::weight(zr);
        const double fl = wl * std::cos(f.phase(zl));
        const double fr = wr * std::cos(f.phase(zr));
        wmax = std::max({wmax, wl, wr});
        // i == 7 is the midpoint, counted once; odd i are the embedded Gauss nodes
        const double pair = (i == 7) ? fl : fl + fr;
        kron += kKronrodWeights[i] * pair;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
    }
    const double span = std::abs(f.phase(b) - f.phase(c)) + std::abs(f.phase(c) - f.phase(a));
    return PanelEstimate{kron * h, std::abs(kron - gauss) * h, span, wmax};
}

/// Globally adaptive bisection. A panel is accepted when the Kronrod-Gauss
/// error estimate meets its share of the tolerance and the estimate can be
/// trusted: either the panel spans less than ~one oscillation or its
/// amplitude bound is itself below tolerance.
inline double adaptive_osc(const OscIntegrand& f, double a, double b, double tol, int depth = 0) {
    const PanelEstimate est = gk15(f, a, b);
    const bool trustworthy = est.phase_span < 2.0 * std::numbers::pi ||
                             est.weight_max * (b - a) < tol;
    if ((est.error < tol && trustworthy) || depth >= 52 || b - a < 1e-15)
        return est.integral;
    const double c = 0.5 * (a + b);
    return adaptive_osc(f, a, c, 0.5 * tol, depth + 1) + adaptive_osc(f, c, b, 0.5 * tol, depth + 1);
}

/// Upper integration cut. Beyond the stationary point the phase derivative
/// grows like 3 tau tan^4 z while the weight decays like cot^2 z, so the
/// dropped tail is bounded by ~4 weight/|phase'| (van der Corput); with no
/// usable oscillation the plain weight bound integral cot^2 ~ d^3/3 applies
/// at tan z = 1e4. Either way the tail stays below ~1e-12.
inline double upper_cut(double tau, double sigma) {
    constexpr double tan_cap = 1e4;
    double tan_cut = tan_cap;
    if (tau > 1e-9) {
        double tc = std::max(10.0, std::sqrt((2.0 * sigma + 10.0) / (3.0 * tau)));
        while (tc < tan_cap) {
            const double dphase = (3.0 * tau * tc * tc - sigma) * (1.0 + tc * tc);
            if (dphase > 0.0 && 4.0 / (tc * tc) / dphase < 1e-9) {
                tan_cut = tc;
                break;
            }
            tc *= 1.5;
        }
    }
    return std::atan(tan_cut);
}

}  // namespace detail

/// Asymptotic amplitude u_inf(tau, sigma) as the oscillatory integral
/// (2 sqrt2/pi) int_0^{pi/2} (1+tan^2 z)/(1+tan^4 z) cos Phi(z) dz.
/// Absolute quadrature error <= ~1e-8 (default tol 1e-9 plus the tail cut).
inline double u_infinity(const AsymptoticParams& p, double tol = 1e-9) {
    const detail::OscIntegrand f{p.tau, p.sigma};
    constexpr double quarter = 0.25 * std::numbers::pi;
    const double z_cut = detail::upper_cut(p.tau, p.sigma);
    const double head = detail::adaptive_osc(f, 0.0, quarter, 0.5 * tol);
    const double tail = detail::adaptive_osc(f, quarter, z_cut, 0.5 * tol);
    return 2.0 * std::numbers::sqrt2 / std::numbers::pi * (head + tail);
}

/// Locates the overall maximum of u_inf over tau in [0.01, 1], sigma in
/// [0, 10]: 50x50 grid scan, then simplex refinement. Deterministic; grid
/// ties resolve to the smaller tau, then smaller sigma.
inline AsymptoticOptimum maximize_u_infinity() {
    constexpr int grid = 50;
    std::vector<double> vals(grid * grid);
    auto tau_at = [](int i) { return 0.01 + 0.99 * i / double(grid - 1); };
    auto sigma_at = [](int j) { return 10.0 * j / double(grid - 1); };
    parallel_for(static_cast<std::size_t>(grid * grid), [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / grid, j = static_cast<int>(idx) % grid;
        vals[idx] = u_infinity(AsymptoticParams{tau_at(i), sigma_at(j)});
    });
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < vals.size(); ++idx)
        if (vals[idx] > vals[best]) best = idx;

    const double tau0 = tau_at(static_cast<int>(best) / grid);
    const double sigma0 = sigma_at(static_cast<int>(best) % grid);
    auto negated = [](const std::vector<double>& v) {
        return -u_infinity(AsymptoticParams{v[0], v[1]});
    };
    // anisotropic start matching the ridge scale (the sigma direction is soft)
    SimplexResult r1 = nelder_mead(negated, {tau0, sigma0}, 0.02, 1e-6);
    SimplexResult r2 = nelder_mead(negated, r1.x, 2e-4, 1e-7);
    return AsymptoticOptimum{AsymptoticParams{r2.x[0], r2.x[1]}, -r2.f};
}

/// Asymptotic optimum cached for reuse (coupling seeds, scaling constants).
inline const AsymptoticOptimum& asymptotic_optimum() {
    static const AsymptoticOptimum opt = maximize_u_infinity();
    return opt;
}

/// Coupling and delay scaling coefficients derived from the located
/// (tau*, sigma*), not hard-coded.
inline ScalingConstants scaling_constants() {
    const AsymptoticOptimum& opt = asymptotic_optimum();
    const double xc = 2.0 * std::cbrt(6.0 * opt.params.tau);
    return ScalingConstants{xc, std::pow(2.0, 0.25) * std::sqrt(xc), 2.0 * opt.params.sigma / xc,
                            opt};
}

}  // namespace bqst
