#ifndef SKTK_RNG_HPP
#define SKTK_RNG_HPP

#include <cmath>
#include <cstdint>

namespace sktk {

/// SplitMix64 finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from (seed, index); used for per-trial
/// streams so that trials are reproducible regardless of scheduling.
inline constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ull));
}

/// Counter-based generator: the n-th output is a pure function of
/// (key, n), so streams can be split and replayed deterministically.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(substream_seed(seed, stream)), counter_(0) {}

    std::uint64_t next_u64() { return mix64(key_ ^ mix64(counter_++)); }

    /// Uniform on [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a log argument.
    double next_double_open() { return 1.0 - next_double(); }

    double next_exponential(double rate) { return -std::log(next_double_open()) / rate; }

    /// Uniform integer in [0, n); Lemire reduction.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    CounterRng split(std::uint64_t substream) const {
        return CounterRng(key_, substream + 1);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

} // namespace sktk

#endif // SKTK_RNG_HPP
