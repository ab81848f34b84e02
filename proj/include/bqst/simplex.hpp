#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace bqst {

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    long evaluations = 0;
    int iterations = 0;
};

/// Derivative-free Nelder-Mead minimizer (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Fully deterministic; stops when the simplex
/// diameter drops below diameter_tol or after max_iter sweeps.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> start, double step, double diameter_tol,
                                 int max_iter = 500) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> xs(dim + 1, start);
    for (std::size_t j = 0; j < dim; ++j) xs[j + 1][j] += step;

    SimplexResult res;
    std::vector<double> fs(dim + 1);
    for (std::size_t v = 0; v <= dim; ++v) {
        fs[v] = f(xs[v]);
        ++res.evaluations;
    }

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t v = 0; v <= dim; ++v) order[v] = v;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];

        double diameter = 0.0;
        for (std::size_t v = 1; v <= dim; ++v)
            for (std::size_t j = 0; j < dim; ++j)
                diameter = std::max(diameter, std::abs(xs[order[v]][j] - xs[best][j]));
        res.iterations = it;
        if (diameter < diameter_tol) break;

        for (std::size_t j = 0; j < dim; ++j) {
            double c = 0.0;
            for (std::size_t v = 0; v <= dim; ++v)
                if (v != worst) c += xs[v][j];
            centroid[j] = c / static_cast<double>(dim);
        }

        for (std::size_t j = 0; j < dim; ++j) xr[j] = centroid[j] + (centroid[j] - xs[worst][j]);
        const double fr = f(xr);
        ++res.evaluations;
        if (fr < fs[best]) {
            for (std::size_t j = 0; j < dim; ++j) xe[j] = centroid[j] + 2.0 * (xr[j] - centroid[j]);
            const double fe = f(xe);
            ++res.evaluations;
            if (fe < fr) {
                xs[worst] = xe;
                fs[worst] = fe;
            } else {
                xs[worst] = xr;
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = xr;
            fs[worst] = fr;
        } else {
            const bool outside = fr < fs[worst];
            const auto& base = outside ? xr : xs[worst];
            for (std::size_t j = 0; j < dim; ++j) xc[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
            const double fc = f(xc);
            ++res.evaluations;
            if (fc < (outside ? fr : fs[worst])) {
                xs[worst] = xc;
                fs[worst] = fc;
            } else {
                for (std::size_t v = 0; v <= dim; ++v) {
                    if (v == best) continue;
                    for (std::size_t j = 0; j < dim; ++j)
                        xs[v][j] = xs[best][j] + 0.5 * (xs[v][j] - xs[best][j]);
                    fs[v] = f(xs[v]);
                    ++res.evaluations;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t v = 1; v <= dim; ++v)
        if (fs[v] < fs[best]) best = v;
    res.x = xs[best];
    res.f = fs[best];
    return res;
}

}  // namespace bqst
