#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqst/chain.hpp"
#include "bqst/parallel.hpp"

namespace bqst {

/// Phase shift phi_q displacing the allowed momenta from the uniform-chain
/// lattice, continuous on (-pi/2, pi/2) with phi_0 = 0, odd in q.
///
/// Computed as the negative argument of u_k = 1 + (2-x^2-y^2)e^{-2ik}
/// + (1-y^2)e^{-4ik} at k = pi/2 - q. For 0 < q < pi/2 the imaginary part of
/// u_k keeps one sign, so the principal argument already is the continuous
/// branch anchored at phi(0)=0; negative q is handled by odd reflection.
/// Real and imaginary parts are rearranged so the x^2 scale survives at
/// small q instead of emerging from cancellation of O(1) terms.
inline double phase_shift(double x, double y, double q) {
    if (q == 0.0) return 0.0;
    const double sign = q > 0.0 ? 1.0 : -1.0;
    const double qa = std::abs(q);
    const double s = std::sin(qa);
    const double s2 = std::sin(2.0 * qa);
    const double c2 = std::cos(2.0 * qa);
    const double a = 2.0 - x * x - y * y;
    const double b = 1.0 - y * y;
    const double re = x * x + 2.0 * a * s * s - 2.0 * b * s2 * s2;
    const double im = -s2 * (a - 2.0 * b * c2);
    return sign * (-std::atan2(im, re));
}

/// Same phase shift through the direct arctangent form, with the branch
/// extended past pi/2 (atan2 on the numerator/denominator pair). Kept as an
/// independent evaluation route; both must agree to machine precision.
inline double phase_shift_arctan(double x, double y, double q) {
    if (q == 0.0) return 0.0;
    const double sign = q > 0.0 ? 1.0 : -1.0;
    const double qa = std::abs(q);
    const double sq = std::sin(qa);
    const double num = y * y * std::sin(2.0 * qa);
    const double den = x * x - (2.0 - y * y) * 2.0 * sq * sq;
    return sign * (std::atan2(num, den) - 2.0 * qa);
}

/// Closed form of d(phi_q)/dq; the denominator equals |u_k|^2 > 0 for any
/// connected chain (x, y > 0).
inline double phase_shift_derivative(double x, double y, double q) {
    const double s2 = std::sin(q) * std::sin(q);
    const double x2 = x * x, y2 = y * y;
    const double num = 2.0 * y2 * (x2 + 2.0 * (2.0 - x2 - y2) * s2);
    const double den = x2 * x2 + 4.0 * (y2 * y2 - x2 * (2.0 - y2)) * s2 + 16.0 * (1.0 - y2) * s2 * s2;
    return -2.0 + num / den;
}

/// Boundary-coupling threshold Y(x) below which the mode density turns
/// bimodal; the optimal pairs track this curve.
inline double bimodal_threshold(double x) {
    return std::sqrt(std::numbers::sqrt2 * x - 0.5 * x * x);
}

/// Mode density P_q, the squared first-site eigenvector component at
/// momentum q; the finite-N factor carries phi'_q and makes sum_m P = 1.
inline double mode_density(double x, double y, double q, int N) {
    const double dphi = phase_shift_derivative(x, y, q);
    const double tq = std::tan(q);
    const double sq = std::sin(q);
    const double c = 4.0 - x * x - 2.0 * y * y;
    const double den = x * x * x * x + c * c * tq * tq - 16.0 * (1.0 - y * y) * sq * sq;
    return 2.0 / (N + 1.0 + 2.0 * dphi) * (x * x * y * y) / den;
}

struct Mode {
    double m;         // integer for odd N, half-integer for even N
    double q;         // momentum in (-pi/2, pi/2)
    double omega;     // sin q
    double density;   // P_q
    double velocity;  // v_q
};

struct ModeSolution {
    ChainSpec spec;
    std::vector<Mode> modes;  // ordered by increasing m (and q)
};

namespace detail {

/// Root of g(q) = (N+1)q + 2 phi_q - pi m in its analytic bracket
/// (|phi| < pi gives |q - pi m/(N+1)| < 2 pi/(N+1)). The pi*m cancellation is
/// absorbed into a single fma so the residual stays meaningful at large N.
inline double solve_secular_root(double x, double y, int N, double m) {
    constexpr double pi = std::numbers::pi;
    const double np1 = N + 1.0;
    const double pm = pi * m;
    const double qmax = 0.5 * pi - 1e-12;
    auto g = [&](double q) { return std::fma(np1, q, -pm) + 2.0 * phase_shift(x, y, q); };

    double pad = 2.0 * pi;
    double lo = std::max(0.0, (pm - pad) / np1);
    double hi = std::min(qmax, (pm + pad) / np1);
    double glo = g(lo), ghi = g(hi);
    for (int e = 0; (glo > 0.0 || ghi < 0.0) && e < 3; ++e) {
        pad *= 2.0;
        lo = std::max(0.0, (pm - pad) / np1);
        hi = std::min(qmax, (pm + pad) / np1);
        glo = g(lo);
        ghi = g(hi);
    }
    if (glo > 0.0 || ghi < 0.0)
        throw std::logic_error("solve_modes: secular root for m=" + std::to_string(m) +
                               " not bracketed; sign convention broken");

    double q = 0.5 * (lo + hi);
    double gq = g(q);
    for (int it = 0; it < 200; ++it) {
        if (std::abs(gq) < 1e-13) break;
        if (gq > 0.0)
            hi = q;
        else
            lo = q;
        if (hi - lo < 4e-16 * std::max(1.0, std::abs(q))) break;
        // safeguarded Newton; g' = N+1+2 phi' > 0
        double qn = q - gq / (np1 + 2.0 * phase_shift_derivative(x, y, q));
        if (!(qn > lo && qn < hi)) qn = 0.5 * (lo + hi);
        q = qn;
        gq = g(q);
    }
    return q;
}

}  // namespace detail

/// Solves the full spectral problem in O(N): allowed momenta q_m with
/// eigenfrequencies sin q_m, mode densities and group velocities. Only the
/// m > 0 half is solved; the m < 0 modes are exact mirror images, which keeps
/// the spectrum symmetric under m -> -m by construction.
inline ModeSolution solve_modes(const ChainSpec& spec) {
    spec.validate();
    if (spec.profile == Profile::PerfectTransfer)
        throw std::invalid_argument(
            "solve_modes: analytic solution covers quasi-uniform and uniform profiles only");
    const double x = spec.profile == Profile::Uniform ? 1.0 : spec.x;
    const double y = spec.profile == Profile::Uniform ? 1.0 : spec.y;
    const int N = spec.N;
    const double np1 = N + 1.0;

    const bool odd = (N % 2) != 0;
    const std::size_t npos = static_cast<std::size_t>(N / 2);  // count of m > 0 modes
    std::vector<Mode> upper(npos);
    parallel_for(npos, [&](std::size_t i) {
        const double m = odd ? double(i + 1) : double(i) + 0.5;
        const double q = detail::solve_secular_root(x, y, N, m);
        const double dphi = phase_shift_derivative(x, y, q);
        upper[i] = Mode{m, q, std::sin(q), mode_density(x, y, q, N),
                        np1 * std::cos(q) / (np1 + 2.0 * dphi)};
    });

    ModeSolution out;
    out.spec = spec;
    out.modes.reserve(static_cast<std::size_t>(N));
    for (std::size_t i = npos; i-- > 0;) {
        const Mode& u = upper[i];
        out.modes.push_back(Mode{-u.m, -u.q, -u.omega, u.density, u.velocity});
    }
    if (odd) {
        const double dphi0 = phase_shift_derivative(x, y, 0.0);
        out.modes.push_back(Mode{0.0, 0.0, 0.0, mode_density(x, y, 0.0, N), np1 / (np1 + 2.0 * dphi0)});
    }
    out.modes.insert(out.modes.end(), upper.begin(), upper.end());
    return out;
}

}  // namespace bqst
