#include <catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bqst/oracle.hpp"
#include "bqst/spectral.hpp"

using namespace bqst;
using Catch::Matchers::WithinAbs;

namespace {
double rand01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
}

TEST_CASE("small uniform spectra", "[oracle]") {
    const EigenSystem two = diagonalize(ChainSpec::uniform(2));
    REQUIRE_THAT(two.eigenvalues[0], WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(two.eigenvalues[1], WithinAbs(-1.0, 1e-14));
    REQUIRE_THAT(two.frequencies[0], WithinAbs(0.5, 1e-14));

    const EigenSystem three = diagonalize(ChainSpec::uniform(3));
    REQUIRE_THAT(three.eigenvalues[0], WithinAbs(std::numbers::sqrt2, 1e-14));
    REQUIRE_THAT(three.eigenvalues[1], WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(three.eigenvalues[2], WithinAbs(-std::numbers::sqrt2, 1e-14));
}

TEST_CASE("eigenvectors are orthonormal with positive first components", "[oracle]") {
    for (const ChainSpec& spec : {ChainSpec::quasi_uniform(9, 0.5, 0.8),
                                  ChainSpec::perfect_transfer(12), ChainSpec::uniform(7)}) {
        const EigenSystem eig = diagonalize(spec);
        const int n = spec.N;
        for (int r = 0; r < n; ++r) {
            REQUIRE(eig.vectors(r, 0) > 0.0);
            for (int s = 0; s < n; ++s) {
                const double dot = eig.vectors.row(r).dot(eig.vectors.row(s));
                REQUIRE_THAT(dot, WithinAbs(r == s ? 1.0 : 0.0, 1e-12));
            }
        }
        for (int r = 1; r < n; ++r) REQUIRE(eig.eigenvalues[r] < eig.eigenvalues[r - 1]);
    }
}

TEST_CASE("mirror parity alternates with the eigenvalue index", "[oracle]") {
    for (const ChainSpec& spec :
         {ChainSpec::quasi_uniform(9, 0.5, 0.8), ChainSpec::quasi_uniform(10, 0.35, 0.9)}) {
        const EigenSystem eig = diagonalize(spec);
        const int n = spec.N;
        for (int r = 0; r < n; ++r) {
            const double parity = (r % 2 == 0) ? 1.0 : -1.0;  // (-1)^{n+1}, n = r+1
            for (int i = 0; i < n; ++i)
                REQUIRE_THAT(eig.vectors(r, n - 1 - i), WithinAbs(parity * eig.vectors(r, i), 1e-8));
        }
    }
}

TEST_CASE("direct amplitude at t = 0 is a delta at site 1", "[oracle]") {
    const EigenSystem eig = diagonalize(ChainSpec::quasi_uniform(17, 0.6, 0.4));
    REQUIRE_THAT(std::abs(amplitude_direct(eig, 1, 0.0)), WithinAbs(1.0, 1e-13));
    for (int i = 2; i <= 17; ++i)
        REQUIRE_THAT(std::abs(amplitude_direct(eig, i, 0.0)), WithinAbs(0.0, 1e-13));
    REQUIRE_THROWS_AS(amplitude_direct(eig, 0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(amplitude_direct(eig, 18, 1.0), std::invalid_argument);
}

TEST_CASE("perfect transfer arrives with unit amplitude at t = N + 1", "[oracle]") {
    const int n = 251;
    const EigenSystem eig = diagonalize(ChainSpec::perfect_transfer(n));
    REQUIRE(std::abs(amplitude_direct(eig, n, n + 1.0)) >= 1.0 - 1e-8);
}

TEST_CASE("evolution is unitary", "[oracle]") {
    const EigenSystem eig = diagonalize(ChainSpec::quasi_uniform(40, 0.55, 0.85));
    std::mt19937_64 gen(3);
    for (int k = 0; k < 5; ++k) {
        const double t = 200.0 * rand01(gen);
        double total = 0.0;
        for (int i = 1; i <= 40; ++i) total += std::norm(amplitude_direct(eig, i, t));
        REQUIRE_THAT(total, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("characteristic polynomial vanishes exactly at the spectrum", "[oracle]") {
    const ChainSpec spec = ChainSpec::quasi_uniform(9, 0.5, 0.8);
    const EigenSystem eig = diagonalize(spec);
    for (int r = 0; r < 9; ++r)
        REQUIRE(std::abs(char_poly_residual(spec, eig.eigenvalues[r])) < 1e-8);

    // uniform case: lambda = 2 cos(pi/(N+1)) is the top eigenvalue
    const ChainSpec unif = ChainSpec::quasi_uniform(9, 1.0, 1.0);
    REQUIRE(std::abs(char_poly_residual(unif, 2.0 * std::cos(std::numbers::pi / 10.0))) < 1e-10);

    // outside the spectrum the residual is far from zero
    REQUIRE(std::abs(char_poly_residual(spec, 3.0)) > 1e-3);
}

TEST_CASE("residuals vanish at dense eigenvalues for many sizes", "[oracle]") {
    std::mt19937_64 gen(17);
    for (int n : {5, 6, 7, 20, 33, 60}) {
        const ChainSpec spec =
            ChainSpec::quasi_uniform(n, 0.05 + 0.95 * rand01(gen), 0.05 + 0.95 * rand01(gen));
        const EigenSystem eig = diagonalize(spec);
        for (int r = 0; r < n; ++r)
            REQUIRE(std::abs(char_poly_residual(spec, eig.eigenvalues[r])) < 1e-8);
    }
}

TEST_CASE("scaled recursion survives long chains and large lambda", "[oracle]") {
    const ChainSpec spec = ChainSpec::quasi_uniform(1001, 0.5, 0.8);
    const double r = char_poly_residual(spec, 3.0);
    REQUIRE(std::isfinite(r));
    REQUIRE(std::abs(r) > 1e-6);
    const EigenSystem eig = diagonalize(spec, 1200);
    REQUIRE(std::abs(char_poly_residual(spec, eig.eigenvalues[500])) < 1e-6);
}

TEST_CASE("first eigenvector components reproduce the mode density", "[oracle]") {
    std::mt19937_64 gen(29);
    const int n = 200;
    const ChainSpec spec =
        ChainSpec::quasi_uniform(n, 0.02 + 0.98 * rand01(gen), 0.02 + 0.98 * rand01(gen));
    const EigenSystem eig = diagonalize(spec);
    const ModeSolution ms = solve_modes(spec);
    for (int i = 0; i < n; ++i) {
        const double u1sq = eig.vectors(n - 1 - i, 0) * eig.vectors(n - 1 - i, 0);
        REQUIRE_THAT(ms.modes[i].density, WithinAbs(u1sq, 1e-9));
    }
}

TEST_CASE("dense-path guard", "[oracle]") {
    REQUIRE_THROWS_AS(diagonalize(ChainSpec::uniform(10), 5), std::invalid_argument);
    REQUIRE_THROWS_AS(char_poly_residual(ChainSpec::uniform(9), 1.0), std::invalid_argument);
}
