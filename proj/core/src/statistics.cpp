#include "hardy/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "hardy/error.hpp"

namespace hardy {

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> v) {
    require(!v.empty(), "mean: empty sample");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> weights) {
    require(x.size() == y.size(), "fit_line: size mismatch");
    require(x.size() >= 2, "fit_line: need at least two points");
    require(weights.empty() || weights.size() == x.size(), "fit_line: weight size mismatch");
    const std::size_t n = x.size();
    auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };
    double sw = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sw += w(i);
        mx += w(i) * x[i];
        my += w(i) * y[i];
    }
    mx /= sw;
    my /= sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += w(i) * (x[i] - mx) * (x[i] - mx);
        sxy += w(i) * (x[i] - mx) * (y[i] - my);
    }
    require(sxx > 0.0, "fit_line: abscissae are all equal");
    LinearFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (n > 2) {
        double rss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - (f.intercept + f.slope * x[i]);
            rss += w(i) * r * r;
        }
        const double s2 = rss / (static_cast<double>(n) - 2.0);
        f.slope_stderr = std::sqrt(s2 / sxx);
        f.intercept_stderr = std::sqrt(s2 * (1.0 / sw + mx * mx / sxx));
    }
    return f;
}

LinearFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        require(x[i] > 0.0 && y[i] > 0.0, "fit_loglog: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return fit_line(lx, ly);
}

double quantile_sorted(std::span<const double> sorted, double q) {
    require(!sorted.empty(), "quantile_sorted: empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

Interval bootstrap_mean_ci(std::span<const double> samples, std::uint64_t seed, int resamples, double level) {
    require(!samples.empty(), "bootstrap_mean_ci: empty sample");
    return bootstrap_ci(
        samples.size(),
        [&](std::span<const std::size_t> idx) {
            double s = 0.0;
            for (auto i : idx) s += samples[i];
            return s / static_cast<double>(idx.size());
        },
        seed, resamples, level);
}

}  // namespace hardy
