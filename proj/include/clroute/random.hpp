/**
 * @file random.hpp
 * @brief Portable seeded random streams.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. The standard distributions are implementation-defined, so the
 * uniform and normal variates are derived here by hand: uniforms take the top
 * 53 bits of one engine draw, normals use the Marsaglia polar method.
 */

#ifndef CLROUTE_RANDOM_HPP
#define CLROUTE_RANDOM_HPP

#include <cstdint>
#include <optional>
#include <random>

namespace clroute {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream number @p stream derived from @p master_seed.
    static Rng split(std::uint64_t master_seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01();

    /// Uniform on [lo, hi].
    double uniform(double lo, double hi);

    /// Uniform integer on [0, bound).
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal.
    double normal();

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

/// SplitMix64 finalizer, used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

} // namespace clroute

#endif
