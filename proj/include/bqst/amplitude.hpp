#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bqst/parallel.hpp"
#include "bqst/spectral.hpp"

namespace bqst {

struct AmplitudeResult {
    ChainSpec spec;
    std::vector<double> t_grid;
    std::vector<double> u_values;
    double arrival_time = 0.0;    // refined t* of the window maximum
    double peak_amplitude = 0.0;  // |u(t*)|
    double delay = 0.0;           // t* - (N+1)
};

struct FidelityPair {
    double average;       // F = 1/3 + (1+u)^2/6
    double entanglement;  // F_E = (1+u)^2/4
};

/// End-to-end amplitude |u(t)| = |sum_m P_m exp(i(pi m - t sin q_m))|.
/// The solved spectrum is mirror symmetric by construction, so the +-m pairs
/// combine into cosines and the sum is real; e^{i pi m} at half-integer m
/// (even N) is absorbed by the same pairing. O(N) per call.
inline double evaluate(const ModeSolution& ms, double t) {
    const auto& modes = ms.modes;
    const std::size_t n = modes.size();
    const std::size_t mid = n / 2;
    const bool odd = (n % 2) != 0;
    double acc = odd ? modes[mid].density : 0.0;
    for (std::size_t i = odd ? mid + 1 : mid; i < n; ++i) {
        const Mode& md = modes[i];
        acc += 2.0 * md.density * std::cos(std::numbers::pi * md.m - t * md.omega);
    }
    return std::abs(acc);
}

namespace detail {

template <typename F>
double golden_section_max(F&& f, double a, double b, double tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Scans the arrival window (default [N, N + 10 N^{1/3} + 50]) on a 0.2 grid,
/// then refines the best maximum by golden section to |dt| < 1e-6.
inline AmplitudeResult find_arrival(const ModeSolution& ms,
                                    std::optional<std::pair<double, double>> window = {}) {
    const int N = ms.spec.N;
    double t0 = N;
    double t1 = N + 10.0 * std::cbrt(double(N)) + 50.0;
    if (window) {
        t0 = window->first;
        t1 = window->second;
    }
    if (!(t1 > t0)) throw std::invalid_argument("find_arrival: window must satisfy begin < end");

    constexpr double dt = 0.2;
    const std::size_t npts = static_cast<std::size_t>(std::floor((t1 - t0) / dt)) + 1;
    AmplitudeResult res;
    res.spec = ms.spec;
    res.t_grid.resize(npts);
    res.u_values.resize(npts);
    parallel_for(npts, [&](std::size_t i) {
        const double t = t0 + dt * static_cast<double>(i);
        res.t_grid[i] = t;
        res.u_values[i] = evaluate(ms, t);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < npts; ++i)
        if (res.u_values[i] > res.u_values[best]) best = i;  // ties keep the smaller t

    const double a = std::max(t0, res.t_grid[best] - dt);
    const double b = std::min(t1, res.t_grid[best] + dt);
    const double tstar =
        detail::golden_section_max([&](double t) { return evaluate(ms, t); }, a, b, 1e-6);
    const double ustar = evaluate(ms, tstar);
    if (ustar >= res.u_values[best]) {
        res.arrival_time = tstar;
        res.peak_amplitude = ustar;
    } else {
        res.arrival_time = res.t_grid[best];
        res.peak_amplitude = res.u_values[best];
    }
    res.delay = res.arrival_time - (N + 1.0);
    return res;
}

/// Maps an amplitude to the Bloch-averaged and entanglement fidelities.
inline FidelityPair fidelities(double u) {
    if (!(u >= -1e-12) || !(u <= 1.0 + 1e-9))
        throw std::domain_error("fidelities: amplitude must lie in [0,1], got " + std::to_string(u));
    u = std::clamp(u, 0.0, 1.0);
    const double w = (1.0 + u) * (1.0 + u);
    return FidelityPair{1.0 / 3.0 + w / 6.0, 0.25 * w};
}

}  // namespace bqst
