#pragma once

#include <algorithm>

#include "hardy/rng.hpp"

namespace hardy {

template <class Statistic>
Interval bootstrap_ci(std::size_t n, Statistic&& stat, std::uint64_t seed, int resamples, double level) {
    std::vector<double> stats;
    stats.reserve(static_cast<std::size_t>(resamples));
    std::vector<std::size_t> idx(n);
    for (int r = 0; r < resamples; ++r) {
        CounterRng rng(derive_seed(seed, {static_cast<std::uint64_t>(r)}));
        for (auto& i : idx) i = static_cast<std::size_t>(rng() % n);
        stats.push_back(stat(std::span<const std::size_t>(idx)));
    }
    std::sort(stats.begin(), stats.end());
    const double tail = 0.5 * (1.0 - level);
    return {quantile_sorted(stats, tail), quantile_sorted(stats, 1.0 - tail)};
}

}  // namespace hardy
