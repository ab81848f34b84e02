#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bqst/oracle.hpp"
#include "bqst/parallel.hpp"

namespace bqst {

struct WavepacketFrame {
    double t;
    std::vector<double> amplitudes;  // |u_i(t)| for i = 1..N
};

struct WavepacketField {
    ChainSpec spec;
    std::vector<WavepacketFrame> frames;
};

/// Full wavepacket |u_i(t)| on a uniform time grid [0, t_max], one dense
/// diagonalization up front and O(N^2) per frame. Chains above the dense
/// guard must use the spectral end-to-end path instead.
inline WavepacketField propagate(const ChainSpec& spec, double t_max, double dt = 1.0,
                                 int dense_guard = 2000) {
    spec.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
    if (!(t_max >= 0.0)) throw std::invalid_argument("propagate: t_max must be nonnegative");
    if (spec.N > dense_guard)
        throw std::invalid_argument(
            "propagate: N=" + std::to_string(spec.N) + " exceeds the dense-path guard " +
            std::to_string(dense_guard) +
            "; use the end-to-end spectral amplitude for chains this long");

    const EigenSystem eig = diagonalize(spec, dense_guard);
    const int n = spec.N;
    const Eigen::VectorXd first = eig.vectors.col(0);  // U_{n1}

    const std::size_t nframes = static_cast<std::size_t>(std::floor(t_max / dt)) + 1;
    WavepacketField field;
    field.spec = spec;
    field.frames.resize(nframes);
    parallel_for(nframes, [&](std::size_t k) {
        const double t = dt * static_cast<double>(k);
        Eigen::VectorXd wc(n), ws(n);
        for (int r = 0; r < n; ++r) {
            const double ph = eig.frequencies[r] * t;
            wc[r] = first[r] * std::cos(ph);
            ws[r] = first[r] * std::sin(ph);
        }
        const Eigen::VectorXd re = eig.vectors.transpose() * wc;
        const Eigen::VectorXd im = eig.vectors.transpose() * ws;
        auto& frame = field.frames[k];
        frame.t = t;
        frame.amplitudes.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            frame.amplitudes[static_cast<std::size_t>(i)] = std::hypot(re[i], im[i]);
    }, 1);
    return field;
}

/// Site of maximum amplitude per frame (1-based; ties to the smaller site),
/// the raw material for front-speed fits.
inline std::vector<std::pair<double, int>> front_trajectory(const WavepacketField& field) {
    if (field.frames.empty())
        throw std::invalid_argument("front_trajectory: field has no frames");
    std::vector<std::pair<double, int>> out;
    out.reserve(field.frames.size());
    for (const auto& frame : field.frames) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < frame.amplitudes.size(); ++i)
            if (frame.amplitudes[i] > frame.amplitudes[best]) best = i;
        out.emplace_back(frame.t, static_cast<int>(best) + 1);
    }
    return out;
}

}  // namespace bqst
