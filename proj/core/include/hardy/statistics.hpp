#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hardy {

/// Pairwise summation; the result depends only on the order of `values`.
double pairwise_sum(std::span<const double> values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope x (weights optional).
LinearFit fit_line(std::span<const double> x, std::span<const double> y,
                   std::span<const double> weights = {});

/// Slope of log y against log x.
LinearFit fit_loglog(std::span<const double> x, std::span<const double> y);

double mean(std::span<const double> v);
/// Unbiased sample variance (0 for fewer than two samples).
double sample_variance(std::span<const double> v);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Percentile bootstrap interval of the mean of f(sample) over resamples of
/// `samples`; resample r draws from a stream keyed by (seed, r).
Interval bootstrap_mean_ci(std::span<const double> samples, std::uint64_t seed,
                           int resamples = 1000, double level = 0.95);

/// Percentile bootstrap interval for an arbitrary statistic of resampled
/// indices.
template <class Statistic>
Interval bootstrap_ci(std::size_t n, Statistic&& stat, std::uint64_t seed, int resamples = 1000,
                      double level = 0.95);

double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace hardy

#include "hardy/detail/bootstrap.ipp"
