#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bqst {

enum class Profile { QuasiUniform, PerfectTransfer, Uniform };

/// Chain of N sites with nearest-neighbor couplings in units of the bulk bond.
/// QuasiUniform keeps the two mirror-symmetric boundary pairs free: x on the
/// outermost bonds, y on the next pair, every other bond equal to 1.
struct ChainSpec {
    int N = 0;
    Profile profile = Profile::Uniform;
    double x = 1.0;  // A_{1,2} = A_{N-1,N}
    double y = 1.0;  // A_{2,3} = A_{N-2,N-1}

    static ChainSpec quasi_uniform(int n, double x, double y) {
        ChainSpec s{n, Profile::QuasiUniform, x, y};
        s.validate();
        return s;
    }
    static ChainSpec perfect_transfer(int n) {
        ChainSpec s{n, Profile::PerfectTransfer, 1.0, 1.0};
        s.validate();
        return s;
    }
    static ChainSpec uniform(int n) {
        ChainSpec s{n, Profile::Uniform, 1.0, 1.0};
        s.validate();
        return s;
    }

    void validate() const {
        if (profile == Profile::QuasiUniform) {
            if (N < 5)
                throw std::invalid_argument("ChainSpec.N: quasi-uniform profile needs N >= 5, got " +
                                            std::to_string(N));
            check_coupling(x, "ChainSpec.x");
            check_coupling(y, "ChainSpec.y");
        } else if (N < 2) {
            throw std::invalid_argument("ChainSpec.N: chain needs N >= 2, got " + std::to_string(N));
        }
    }

private:
    static void check_coupling(double v, const char* field) {
        if (!(v > 0.0) || !(v <= 1.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string(field) + ": coupling must lie in (0,1], got " +
                                        std::to_string(v));
    }
};

/// Ordered bond strengths; entry i is A_{i+1,i+2} (0-based). Mirror symmetric
/// for every profile produced here.
using CouplingSequence = std::vector<double>;

inline CouplingSequence couplings(const ChainSpec& spec) {
    spec.validate();
    const int nb = spec.N - 1;
    CouplingSequence v(static_cast<std::size_t>(nb), 1.0);
    switch (spec.profile) {
        case Profile::QuasiUniform:
            // [x, y, 1, ..., 1, y, x]; for N=5 the bulk segment is empty and
            // the two y-bonds are adjacent, for N=6 a single bulk bond remains.
            v[0] = spec.x;
            v[1] = spec.y;
            v[static_cast<std::size_t>(nb - 2)] = spec.y;
            v[static_cast<std::size_t>(nb - 1)] = spec.x;
            break;
        case Profile::PerfectTransfer:
            for (int i = 1; i <= nb; ++i)
                v[static_cast<std::size_t>(i - 1)] =
                    std::numbers::pi / (spec.N + 1.0) * std::sqrt(double(i) * double(spec.N - i));
            break;
        case Profile::Uniform:
            break;
    }
    return v;
}

}  // namespace bqst
