#pragma once

// Counter-based random numbers: draw i of stream s under seed k is a pure
// function of (k, s, i). Samples can therefore be generated in any order or
// in parallel and still reproduce bit-for-bit.

#include <chebtail/constants.hpp>

#include <cmath>
#include <cstdint>

namespace chebtail {

/// SplitMix64 finalizer; a bijective avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    constexpr explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix64(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix64(stream + 0x632be59bd9b4e019ULL))
    {
    }

    /// Raw 64-bit word for the given counter.
    constexpr std::uint64_t bits(std::uint64_t counter) const noexcept
    {
        return mix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
    }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform(std::uint64_t counter) const noexcept
    {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes counters 2i and 2i+1.
    double normal(std::uint64_t index) const noexcept
    {
        const double u1 = uniform(2 * index);
        const double u2 = uniform(2 * index + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi_v<double> * u2);
    }

private:
    std::uint64_t key_;
};

} // namespace chebtail
