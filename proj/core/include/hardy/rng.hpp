#pragma once

#include <cstdint>
#include <initializer_list>

namespace hardy {

/// SplitMix64 finalizer; a bijective avalanche on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based derivation: folds the words into a seed one at a time.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = mix64(seed);
    for (auto w : words) h = mix64(h ^ mix64(w + 0x632be59bd9b4e019ULL));
    return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Small counter-driven generator used by random walkers and resampling.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return mix64(key_ ^ mix64(counter_++)); }
    double uniform() { return to_unit((*this)()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace hardy
