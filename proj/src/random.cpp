#include "clroute/random.hpp"

#include <cmath>

namespace clroute {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::split(std::uint64_t master_seed, std::uint64_t stream)
{
    return Rng(mix64(mix64(master_seed) ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    // rejection sampling removes modulo bias
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x = engine_();
    while (x >= limit)
        x = engine_();
    return x % bound;
}

double Rng::normal()
{
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return z;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform01() - 1.0;
        v = 2.0 * uniform01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    return u * factor;
}

} // namespace clroute
