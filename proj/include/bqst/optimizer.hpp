#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqst/amplitude.hpp"
#include "bqst/asymptotic.hpp"
#include "bqst/parallel.hpp"
#include "bqst/simplex.hpp"
#include "bqst/spectral.hpp"

namespace bqst {

/// Search space for the boundary couplings: the full (x, y) plane, x alone at
/// a pinned y, or x alone with y tied to the bimodal threshold Y(x).
struct SearchMode {
    enum class Kind { TwoParam, FixedY, ConstrainedY } kind = Kind::TwoParam;
    double fixed_y = 1.0;

    static SearchMode two_param() { return {Kind::TwoParam, 1.0}; }
    static SearchMode fixed(double y) { return {Kind::FixedY, y}; }
    static SearchMode constrained() { return {Kind::ConstrainedY, 1.0}; }

    std::string name() const {
        switch (kind) {
            case Kind::TwoParam: return "two_param";
            case Kind::FixedY: return "fixed_y";
            case Kind::ConstrainedY: return "constrained_Y";
        }
        return "?";
    }
};

struct OptimumReport {
    int N = 0;
    SearchMode mode;
    double x_opt = 0.0, y_opt = 0.0;
    double u_opt = 0.0;
    double F_opt = 0.0, F_E_opt = 0.0;
    double arrival_time = 0.0;
    long evaluations = 0;
    bool boundary = false;  // optimum pinned to the search-domain edge
    std::vector<std::array<double, 3>> trace;  // optional (x, y, u) iterates
};

struct Range {
    double lo = 0.0, hi = 0.0;
    int steps = 0;
};

struct FidelityMap {
    std::vector<double> x_grid, y_grid;
    std::vector<double> F;  // row-major, F[ix * y_grid.size() + iy]
};

namespace detail {

constexpr double kCouplingFloor = 1e-3;
// seed the simplex from the asymptotic scaling laws instead of a grid scan
constexpr int kScalingSeedThreshold = 25001;

/// Peak arrival amplitude at clamped couplings plus a quadratic penalty for
/// the clamp, which steers the simplex back inside (0, 1]^2.
inline double penalized_peak(int N, double x, double y, long& evals, double& u_out) {
    double penalty = 0.0;
    auto clamp_in = [&penalty](double v) {
        const double c = std::clamp(v, kCouplingFloor, 1.0);
        penalty += 10.0 * (v - c) * (v - c);
        return c;
    };
    const double cx = clamp_in(x), cy = clamp_in(y);
    const ModeSolution ms = solve_modes(ChainSpec::quasi_uniform(N, cx, cy));
    u_out = find_arrival(ms).peak_amplitude;
    ++evals;
    return -u_out + penalty;
}

}  // namespace detail

/// Maximizes the arrival-peak amplitude over the boundary couplings:
/// coarse grid seed (21x21 two-parameter, 41 points in one dimension)
/// followed by simplex descent converging at diameter 1e-4; equal grid
/// objectives break toward smaller x, then smaller y. For N >= 25001 the
/// simplex is seeded from the asymptotic scaling laws instead of a grid.
inline OptimumReport optimize(int N, SearchMode mode = SearchMode::two_param(),
                              bool keep_trace = false) {
    if (N < 5) throw std::invalid_argument("optimize: N must be at least 5, got " + std::to_string(N));
    if (mode.kind == SearchMode::Kind::FixedY && (!(mode.fixed_y > 0.0) || !(mode.fixed_y <= 1.0)))
        throw std::invalid_argument("optimize: fixed y must lie in (0,1], got " +
                                    std::to_string(mode.fixed_y));

    OptimumReport rep;
    rep.N = N;
    rep.mode = mode;
    long evals = 0;

    auto y_of = [&mode](const std::vector<double>& p) {
        switch (mode.kind) {
            case SearchMode::Kind::TwoParam: return p[1];
            case SearchMode::Kind::FixedY: return mode.fixed_y;
            case SearchMode::Kind::ConstrainedY:
                return std::min(1.0, bimodal_threshold(std::clamp(p[0], detail::kCouplingFloor, 1.0)));
        }
        return 1.0;
    };
    auto objective = [&](const std::vector<double>& p) {
        double u = 0.0;
        const double val = detail::penalized_peak(N, p[0], y_of(p), evals, u);
        if (keep_trace) rep.trace.push_back({std::clamp(p[0], detail::kCouplingFloor, 1.0), y_of(p), u});
        return val;
    };

    const bool two = mode.kind == SearchMode::Kind::TwoParam;
    const bool scaling_seed =
        N >= detail::kScalingSeedThreshold && mode.kind != SearchMode::Kind::FixedY;
    std::vector<double> seed;
    if (scaling_seed) {
        const ScalingConstants sc = scaling_constants();
        const double xs = sc.x_coefficient * std::cbrt(1.0 / double(N));
        if (two)
            seed = {xs, sc.y_coefficient * std::pow(double(N), -1.0 / 6.0)};
        else
            seed = {xs};
    } else if (two) {
        constexpr int g = 21;
        std::vector<double> vals(g * g);
        parallel_for(static_cast<std::size_t>(g * g), [&](std::size_t idx) {
            long local = 0;
            double u = 0.0;
            const int i = static_cast<int>(idx) / g, j = static_cast<int>(idx) % g;
            detail::penalized_peak(N, (i + 1) / double(g), (j + 1) / double(g), local, u);
            vals[idx] = u;
        });
        evals += g * g;
        std::size_t best = 0;
        for (std::size_t idx = 1; idx < vals.size(); ++idx)
            if (vals[idx] > vals[best]) best = idx;  // row-major scan ties to smaller x, then y
        seed = {(static_cast<int>(best) / g + 1) / double(g), (static_cast<int>(best) % g + 1) / double(g)};
    } else {
        constexpr int g = 41;
        std::vector<double> vals(g);
        parallel_for(static_cast<std::size_t>(g), [&](std::size_t i) {
            long local = 0;
            double u = 0.0;
            std::vector<double> p{(static_cast<int>(i) + 1) / double(g)};
            detail::penalized_peak(N, p[0], y_of(p), local, u);
            vals[i] = u;
        }, 4);
        evals += g;
        std::size_t best = 0;
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] > vals[best]) best = i;
        seed = {(static_cast<int>(best) + 1) / double(g)};
    }

    const SimplexResult sr = nelder_mead(objective, seed, -0.02, 1e-4);

    rep.x_opt = std::clamp(sr.x[0], detail::kCouplingFloor, 1.0);
    rep.y_opt = mode.kind == SearchMode::Kind::ConstrainedY
                    ? std::min(1.0, bimodal_threshold(rep.x_opt))
                    : (two ? std::clamp(sr.x[1], detail::kCouplingFloor, 1.0) : mode.fixed_y);
    const ModeSolution ms = solve_modes(ChainSpec::quasi_uniform(N, rep.x_opt, rep.y_opt));
    const AmplitudeResult arr = find_arrival(ms);
    ++evals;
    rep.u_opt = arr.peak_amplitude;
    rep.arrival_time = arr.arrival_time;
    const FidelityPair fid = fidelities(rep.u_opt);
    rep.F_opt = fid.average;
    rep.F_E_opt = fid.entanglement;
    rep.evaluations = evals;
    const double edge = 1e-6;
    rep.boundary = rep.x_opt >= 1.0 - edge || rep.x_opt <= detail::kCouplingFloor + edge ||
                   (two && (rep.y_opt >= 1.0 - edge || rep.y_opt <= detail::kCouplingFloor + edge));
    return rep;
}

/// Average fidelity at arrival over an (x, y) grid, row-major with x outer.
inline FidelityMap fidelity_map(int N, Range x_range, Range y_range) {
    auto check = [](const Range& r, const char* which) {
        if (!(r.lo > 0.0) || !(r.hi <= 1.0) || !(r.lo <= r.hi))
            throw std::invalid_argument(std::string("fidelity_map: ") + which +
                                        " range must satisfy 0 < lo <= hi <= 1");
        if (r.steps < 2)
            throw std::invalid_argument(std::string("fidelity_map: ") + which +
                                        " needs at least 2 steps");
    };
    check(x_range, "x");
    check(y_range, "y");

    FidelityMap map;
    map.x_grid.resize(static_cast<std::size_t>(x_range.steps));
    map.y_grid.resize(static_cast<std::size_t>(y_range.steps));
    auto node = [](const Range& r, int i) {
        return i == r.steps - 1 ? r.hi : r.lo + (r.hi - r.lo) * i / double(r.steps - 1);
    };
    for (int i = 0; i < x_range.steps; ++i) map.x_grid[static_cast<std::size_t>(i)] = node(x_range, i);
    for (int j = 0; j < y_range.steps; ++j) map.y_grid[static_cast<std::size_t>(j)] = node(y_range, j);

    map.F.resize(map.x_grid.size() * map.y_grid.size());
    parallel_for(map.F.size(), [&](std::size_t idx) {
        const std::size_t ix = idx / map.y_grid.size(), iy = idx % map.y_grid.size();
        const ModeSolution ms =
            solve_modes(ChainSpec::quasi_uniform(N, map.x_grid[ix], map.y_grid[iy]));
        map.F[idx] = fidelities(find_arrival(ms).peak_amplitude).average;
    }, 1);
    return map;
}

}  // namespace bqst
