#include <catch_amalgamated.hpp>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "bqst/oracle.hpp"
#include "bqst/spectral.hpp"

using namespace bqst;
using Catch::Matchers::WithinAbs;

namespace {
double rand01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
}

TEST_CASE("uniform chain has zero phase shift", "[spectral]") {
    for (double q : {0.0, 0.1, 0.37, -0.8, 1.3, -1.5}) {
        REQUIRE_THAT(phase_shift(1.0, 1.0, q), WithinAbs(0.0, 1e-13));
        REQUIRE_THAT(phase_shift_derivative(1.0, 1.0, q), WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("phase shift at the fixed point is independent of y", "[spectral]") {
    // at q_F = asin(x/2) the y-dependence cancels algebraically
    for (double x : {0.2, 0.6, 1.0}) {
        const double qf = std::asin(0.5 * x);
        const double ref = phase_shift(x, 1.0, qf);
        for (double y : {0.3, 0.7, 1.0})
            REQUIRE_THAT(phase_shift(x, y, qf), WithinAbs(ref, 1e-12));
    }
    const double expected = std::atan(2.0 * std::sqrt(1.0 - 0.09) / 0.6) - 2.0 * std::asin(0.3);
    REQUIRE_THAT(phase_shift(0.6, 0.4, std::asin(0.3)), WithinAbs(expected, 1e-12));
    REQUIRE_THAT(phase_shift(0.6, 1.0, std::asin(0.3)), WithinAbs(expected, 1e-12));
}

TEST_CASE("complex-argument and extended-arctangent routes agree", "[spectral]") {
    REQUIRE_THAT(phase_shift(0.6, 0.8, 0.5) - phase_shift_arctan(0.6, 0.8, 0.5),
                 WithinAbs(0.0, 1e-12));
    std::mt19937_64 gen(7);
    for (int i = 0; i < 2000; ++i) {
        const double x = 0.02 + 0.98 * rand01(gen);
        const double y = 0.02 + 0.98 * rand01(gen);
        const double q = (rand01(gen) - 0.5) * (std::numbers::pi - 1e-6);
        REQUIRE_THAT(phase_shift(x, y, q) - phase_shift_arctan(x, y, q), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("phase shift is odd in q", "[spectral]") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 200; ++i) {
        const double x = 0.05 + 0.95 * rand01(gen);
        const double y = 0.05 + 0.95 * rand01(gen);
        const double q = rand01(gen) * 1.5;
        REQUIRE(phase_shift(x, y, -q) == -phase_shift(x, y, q));
    }
}

TEST_CASE("phase shift derivative matches central differences", "[spectral]") {
    const double h = 1e-5;
    const std::array<std::array<double, 3>, 4> cases{{
        {0.6, 0.8, 0.2}, {0.2247, 0.5439, 0.0}, {0.3, 0.95, -0.9}, {0.9, 0.4, 1.1}}};
    for (const auto& c : cases) {
        const double fd = (phase_shift(c[0], c[1], c[2] + h) - phase_shift(c[0], c[1], c[2] - h)) /
                          (2.0 * h);
        REQUIRE_THAT(phase_shift_derivative(c[0], c[1], c[2]), WithinAbs(fd, 1e-6));
    }
    // closed form at q = 0 reduces to -2 + 2 y^2/x^2
    const double x = 0.2247, y = 0.5439;
    REQUIRE_THAT(phase_shift_derivative(x, y, 0.0),
                 WithinAbs(-2.0 + 2.0 * y * y / (x * x), 1e-12));
}

TEST_CASE("uniform modes are the lattice momenta", "[spectral]") {
    const ModeSolution ms = solve_modes(ChainSpec::uniform(11));
    REQUIRE(ms.modes.size() == 11);
    for (int i = 0; i < 11; ++i) {
        const double m = i - 5.0;
        REQUIRE(ms.modes[i].m == m);
        REQUIRE_THAT(ms.modes[i].q, WithinAbs(std::numbers::pi * m / 12.0, 1e-12));
        REQUIRE_THAT(ms.modes[i].density,
                     WithinAbs(2.0 * std::pow(std::cos(ms.modes[i].q), 2) / 12.0, 1e-12));
        REQUIRE(ms.modes[i].omega == std::sin(ms.modes[i].q));
    }
}

TEST_CASE("spectral frequencies match dense diagonalization", "[spectral]") {
    const ChainSpec spec = ChainSpec::quasi_uniform(9, 0.5, 0.8);
    const ModeSolution ms = solve_modes(spec);
    const EigenSystem eig = diagonalize(spec);
    for (int i = 0; i < 9; ++i)
        REQUIRE_THAT(ms.modes[i].omega, WithinAbs(eig.frequencies[8 - i], 1e-10));
}

TEST_CASE("mode densities are normalized", "[spectral]") {
    for (const ChainSpec& spec :
         {ChainSpec::quasi_uniform(51, 0.4322, 0.7338), ChainSpec::quasi_uniform(50, 0.3, 0.6),
          ChainSpec::quasi_uniform(5, 0.5, 0.8), ChainSpec::quasi_uniform(6, 0.9, 0.2),
          ChainSpec::uniform(11)}) {
        const ModeSolution ms = solve_modes(spec);
        double sum = 0.0, comp = 0.0;
        for (const Mode& m : ms.modes) {
            const double t = m.density - comp;
            const double s = sum + t;
            comp = (s - sum) - t;
            sum = s;
        }
        REQUIRE_THAT(sum, WithinAbs(1.0, 1e-10));
    }
}

TEST_CASE("momenta increase strictly with m; spectrum is mirror symmetric", "[spectral]") {
    std::mt19937_64 gen(23);
    for (int c = 0; c < 20; ++c) {
        const int n = 5 + static_cast<int>(gen() % 120);
        const ChainSpec spec =
            ChainSpec::quasi_uniform(n, 0.02 + 0.98 * rand01(gen), 0.02 + 0.98 * rand01(gen));
        const ModeSolution ms = solve_modes(spec);
        REQUIRE(ms.modes.size() == static_cast<std::size_t>(n));
        for (std::size_t i = 1; i < ms.modes.size(); ++i) {
            REQUIRE(ms.modes[i].q > ms.modes[i - 1].q);
            REQUIRE(ms.modes[i].m == ms.modes[i - 1].m + 1.0);
        }
        for (std::size_t i = 0; i < ms.modes.size(); ++i) {
            const Mode& a = ms.modes[i];
            const Mode& b = ms.modes[ms.modes.size() - 1 - i];
            REQUIRE(a.q == -b.q);  // exact by construction
            REQUIRE(a.density == b.density);
            REQUIRE(a.velocity == b.velocity);
        }
    }
}

TEST_CASE("bimodal threshold", "[spectral]") {
    REQUIRE_THAT(bimodal_threshold(1.0), WithinAbs(0.956146, 1e-6));
    REQUIRE_THAT(bimodal_threshold(0.2247), WithinAbs(0.540859, 1e-5));
    REQUIRE(std::abs(bimodal_threshold(0.2247) - 0.5439) < 0.006);
    // small-x limit Y ~ 2^{1/4} sqrt(x)
    const double x = 1e-4;
    REQUIRE_THAT(bimodal_threshold(x) / (std::pow(2.0, 0.25) * std::sqrt(x)), WithinAbs(1.0, 1e-4));
}

TEST_CASE("mode density: uniform reduction and threshold flatness", "[spectral]") {
    for (double q : {0.0, 0.3, -0.7, 1.2})
        REQUIRE_THAT(mode_density(1.0, 1.0, q, 11),
                     WithinAbs(2.0 * std::pow(std::cos(q), 2) / 12.0, 1e-13));

    // at y = Y(x) the quadratic term of P_q - P_0 cancels, leaving ~q^4
    const double x = 0.6, y = bimodal_threshold(0.6);
    const int n = 1000000;
    const int pts = 41;
    double s0 = 0, s2 = 0, s4 = 0, s6 = 0, s8 = 0, b0 = 0, b2 = 0, b4 = 0;
    for (int i = 0; i < pts; ++i) {
        const double q = -0.05 + 0.1 * i / (pts - 1);
        const double p = mode_density(x, y, q, n);
        const double q2 = q * q;
        s0 += 1; s2 += q2; s4 += q2 * q2; s6 += q2 * q2 * q2; s8 += q2 * q2 * q2 * q2;
        b0 += p; b2 += p * q2; b4 += p * q2 * q2;
    }
    // normal equations for p ~ c0 + c2 q^2 + c4 q^4 (Cramer)
    const double det = s0 * (s4 * s8 - s6 * s6) - s2 * (s2 * s8 - s4 * s6) + s4 * (s2 * s6 - s4 * s4);
    const double c2 = (s0 * (b2 * s8 - b4 * s6) - b0 * (s2 * s8 - s4 * s6) +
                       s4 * (s2 * b4 - s4 * b2)) / det;
    const double p0 = mode_density(x, y, 0.0, n);
    REQUIRE(std::abs(c2) * 1.0 < 1e-3 * p0);  // quadratic coefficient suppressed

    // below threshold the density is bimodal: q = 0 is a local minimum with
    // lateral maxima near asin(x/2)
    const double pa = mode_density(0.6, 0.4, 0.0, n);
    REQUIRE(mode_density(0.6, 0.4, 0.02, n) > pa);
    REQUIRE(mode_density(0.6, 0.4, 0.05, n) > mode_density(0.6, 0.4, 0.02, n));
    REQUIRE(mode_density(0.6, 0.4, 0.3, n) > 10.0 * pa);
}

TEST_CASE("velocity and density are even, phase shift odd, across solved modes", "[spectral]") {
    const ModeSolution ms = solve_modes(ChainSpec::quasi_uniform(24, 0.45, 0.75));
    for (const Mode& m : ms.modes) {
        REQUIRE(m.velocity > 0.0);
        REQUIRE(m.density > 0.0);
    }
}

TEST_CASE("perfect-transfer profile is rejected by the analytic solver", "[spectral]") {
    REQUIRE_THROWS_AS(solve_modes(ChainSpec::perfect_transfer(11)), std::invalid_argument);
}
