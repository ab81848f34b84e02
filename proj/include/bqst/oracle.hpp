#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "bqst/chain.hpp"

namespace bqst {

/// Dense eigendecomposition of the coupling matrix A. Eigenvalues are sorted
/// decreasing so the mirror parity of row n is (-1)^{n+1} (1-based), and each
/// eigenvector sign is fixed by U_{n1} > 0.
struct EigenSystem {
    ChainSpec spec;
    Eigen::VectorXd eigenvalues;  // lambda_n, decreasing
    Eigen::VectorXd frequencies;  // omega_n = lambda_n / 2
    Eigen::MatrixXd vectors;      // row n = eigenvector U_n
};

inline EigenSystem diagonalize(const ChainSpec& spec, int dense_guard = 5000) {
    spec.validate();
    if (spec.N > dense_guard)
        throw std::invalid_argument("diagonalize: N=" + std::to_string(spec.N) +
                                    " exceeds the dense-path guard " + std::to_string(dense_guard));
    const auto bonds = couplings(spec);
    const int n = spec.N;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n - 1);
    for (int i = 0; i < n - 1; ++i) sub[i] = bonds[static_cast<std::size_t>(i)];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("diagonalize: tridiagonal eigensolver failed for N=" +
                                 std::to_string(spec.N));

    EigenSystem sys;
    sys.spec = spec;
    sys.eigenvalues.resize(n);
    sys.frequencies.resize(n);
    sys.vectors.resize(n, n);
    for (int r = 0; r < n; ++r) {
        const int src = n - 1 - r;  // ascending -> descending
        const double s = es.eigenvectors()(0, src) < 0.0 ? -1.0 : 1.0;
        sys.eigenvalues[r] = es.eigenvalues()[src];
        sys.frequencies[r] = 0.5 * es.eigenvalues()[src];
        sys.vectors.row(r) = s * es.eigenvectors().col(src).transpose();
    }
    return sys;
}

/// Transition amplitude u_i(t) = sum_n U_{ni} U_{n1} e^{-i omega_n t}
/// from site 1 to site i (1-based).
inline std::complex<double> amplitude_direct(const EigenSystem& eig, int site, double t) {
    const int n = static_cast<int>(eig.eigenvalues.size());
    if (site < 1 || site > n)
        throw std::invalid_argument("amplitude_direct: site must lie in [1, N], got " +
                                    std::to_string(site));
    std::complex<double> acc = 0.0;
    for (int r = 0; r < n; ++r) {
        const double w = eig.vectors(r, site - 1) * eig.vectors(r, 0);
        const double ph = eig.frequencies[r] * t;
        acc += std::complex<double>(w * std::cos(ph), -w * std::sin(ph));
    }
    return acc;
}

/// Characteristic-polynomial residual of the quasi-uniform chain at lambda,
/// from the Chebyshev-type recursion
///   eta_M = lambda eta_{M-1} - eta_{M-2},  eta_0 = 1, eta_1 = lambda,
///   chi_N = A^2 eta_{N-4} - 2AB eta_{N-5} + B^2 eta_{N-6},
/// with A = lambda^2 - x^2 and B = lambda y^2. The recursion is rescaled
/// periodically (|lambda| > 2 grows exponentially) and the result is the
/// scale-free ratio chi / max-term, ~0 exactly at eigenvalues.
inline double char_poly_residual(const ChainSpec& spec, double lambda) {
    spec.validate();
    if (spec.profile != Profile::QuasiUniform)
        throw std::invalid_argument("char_poly_residual: quasi-uniform profile required");
    const int n = spec.N;

    // eta_{M-2}, eta_{M-1}, eta_M rolling window, starting at M = 1; hmax
    // tracks the largest |eta| seen, rescaled together with the window
    double e2 = 0.0;  // eta_{-1}
    double e1 = 1.0;  // eta_0
    double e0 = lambda;
    double hmax = std::max(1.0, std::abs(lambda));
    for (int m = 2; m <= n - 4; ++m) {
        e2 = e1;
        e1 = e0;
        e0 = lambda * e1 - e2;
        hmax = std::max(hmax, std::abs(e0));
        if ((m & 63) == 0 && hmax > 1e120) {
            e0 /= hmax;
            e1 /= hmax;
            e2 /= hmax;
            hmax = 1.0;  // the historical maximum, in the rescaled units
        }
    }
    // window now holds eta_{N-6}, eta_{N-5}, eta_{N-4}
    const double a = lambda * lambda - spec.x * spec.x;
    const double b = lambda * spec.y * spec.y;
    const double cmax = std::max({a * a, std::abs(2.0 * a * b), b * b});
    return (a * a * e0 - 2.0 * a * b * e1 + b * b * e2) / (cmax * hmax);
}

}  // namespace bqst
