#include <catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "bqst/chain.hpp"

using bqst::ChainSpec;
using bqst::couplings;

TEST_CASE("quasi-uniform couplings", "[chain]") {
    const auto v = couplings(ChainSpec::quasi_uniform(5, 0.5, 0.8));
    REQUIRE(v == bqst::CouplingSequence{0.5, 0.8, 0.8, 0.5});

    const auto w = couplings(ChainSpec::quasi_uniform(6, 0.3, 0.9));
    REQUIRE(w == bqst::CouplingSequence{0.3, 0.9, 1.0, 0.9, 0.3});

    const auto u = couplings(ChainSpec::quasi_uniform(9, 0.5, 0.8));
    REQUIRE(u.size() == 8);
    REQUIRE(u[0] == 0.5);
    REQUIRE(u[1] == 0.8);
    REQUIRE(u[4] == 1.0);
    REQUIRE(u[6] == 0.8);
    REQUIRE(u[7] == 0.5);
}

TEST_CASE("uniform couplings", "[chain]") {
    const auto v = couplings(ChainSpec::uniform(6));
    REQUIRE(v == bqst::CouplingSequence{1, 1, 1, 1, 1});
}

TEST_CASE("perfect-transfer couplings", "[chain]") {
    const auto v = couplings(ChainSpec::perfect_transfer(3));
    const double expected = std::numbers::pi * std::numbers::sqrt2 / 4.0;
    REQUIRE(v.size() == 2);
    REQUIRE_THAT(v[0], Catch::Matchers::WithinAbs(expected, 1e-14));
    REQUIRE_THAT(v[1], Catch::Matchers::WithinAbs(expected, 1e-14));
    REQUIRE_THAT(v[0], Catch::Matchers::WithinAbs(1.1107, 2e-4));
}

TEST_CASE("invalid specs name the offending field", "[chain]") {
    REQUIRE_THROWS_WITH(ChainSpec::quasi_uniform(4, 0.5, 0.5),
                        Catch::Matchers::ContainsSubstring("ChainSpec.N"));
    REQUIRE_THROWS_WITH(ChainSpec::quasi_uniform(9, 0.0, 0.5),
                        Catch::Matchers::ContainsSubstring("ChainSpec.x"));
    REQUIRE_THROWS_WITH(ChainSpec::quasi_uniform(9, 0.5, 1.2),
                        Catch::Matchers::ContainsSubstring("ChainSpec.y"));
    REQUIRE_THROWS_AS(ChainSpec::uniform(1), std::invalid_argument);
    REQUIRE_THROWS_AS(ChainSpec::quasi_uniform(9, -0.1, 0.5), std::invalid_argument);
}

TEST_CASE("mirror symmetry holds for every profile, N <= 50", "[chain]") {
    for (int n = 5; n <= 50; ++n) {
        for (const auto& v : {couplings(ChainSpec::quasi_uniform(n, 0.37, 0.82)),
                              couplings(ChainSpec::perfect_transfer(n)),
                              couplings(ChainSpec::uniform(n))}) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                REQUIRE_THAT(v[i], Catch::Matchers::WithinAbs(v[v.size() - 1 - i], 1e-15));
                REQUIRE(v[i] > 0.0);
            }
        }
    }
}

TEST_CASE("perfect-transfer maximum sits at the middle bond, below pi/2", "[chain]") {
    for (int n : {10, 11, 51, 250, 251}) {
        const auto v = couplings(ChainSpec::perfect_transfer(n));
        std::size_t arg = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[arg]) arg = i;
        REQUIRE(v[arg] <= std::numbers::pi / 2.0 + 1e-12);
        const std::size_t mid_lo = (v.size() - 1) / 2, mid_hi = v.size() / 2;
        REQUIRE((arg == mid_lo || arg == mid_hi));
    }
}
