#ifndef DECOH_TESTS_HELPERS_HPP
#define DECOH_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace testutil {

// Deterministic uniform draws: mt19937 output is fully specified by the
// standard, and the mapping below avoids the unspecified distribution
// implementations, so generated cases are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint32_t seed) : m_eng(seed) {}

    double uniform01() {
        const std::uint64_t hi = m_eng() >> 5;  // 27 bits
        const std::uint64_t lo = m_eng() >> 6;  // 26 bits
        return double((hi << 26) | lo) / 9007199254740992.0; // 2^53
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    int uniform_int(int lo, int hi) { // inclusive bounds
        return lo + int(uniform01() * double(hi - lo + 1)) % (hi - lo + 1);
    }

private:
    std::mt19937 m_eng;
};

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace testutil

#endif
