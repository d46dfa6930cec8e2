#include "hardy/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace hardy {
namespace {

// Beyond this argument e^z overflows long before I_n does not, so the
// asymptotic series takes over.
constexpr double kDirectLimit = 600.0;
constexpr int kTailOrder = 10;

// Coefficients of e^{-z} I_n(z) sqrt(2 pi z) = sum_k c_k z^{-k}.
std::vector<double> asymptotic_coefficients(int n, int order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    const double mu = 4.0 * n * static_cast<double>(n);
    c[0] = 1.0;
    for (int k = 1; k <= order; ++k) {
        const double odd = 2.0 * k - 1.0;
        c[static_cast<std::size_t>(k)] = -c[static_cast<std::size_t>(k) - 1] * (mu - odd * odd) / (8.0 * k);
    }
    return c;
}

double asymptotic_scaled_i(int n, double z) {
    const double mu = 4.0 * n * static_cast<double>(n);
    double term = 1.0;
    double sum = 1.0;
    double last = 1.0;
    for (int k = 1; k < 400; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * z);
        const double mag = std::abs(term);
        if (mag > last && k > 2 * n + 2) break;  // divergent tail of the asymptotic series
        sum += term;
        last = mag;
        if (mag < 1e-18 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double scaled_bessel_i(int n, double z) {
    require(n >= 0, "scaled_bessel_i: order must be nonnegative");
    require(z >= 0.0, "scaled_bessel_i: argument must be nonnegative");
    if (z == 0.0) return n == 0 ? 1.0 : 0.0;
    if (z <= kDirectLimit) return std::cyl_bessel_i(static_cast<double>(n), z) * std::exp(-z);
    return asymptotic_scaled_i(n, z);
}

QuadratureResult free_green_quadrature(const Point& x, double eps) {
    const int d = x.dim();
    require(d >= 3, "free_green_quadrature: the integral diverges for d < 3");
    require(eps > 0.0, "free_green_quadrature: eps must be positive");

    std::vector<int> orders(static_cast<std::size_t>(d));
    int nmax = 0;
    for (int i = 0; i < d; ++i) {
        orders[static_cast<std::size_t>(i)] = std::abs(x[i]);
        nmax = std::max(nmax, std::abs(x[i]));
    }

    // Split point: the tail expansion in 1/t converges like (n^2 / t)^k.
    const double cutoff = std::max(300.0, 40.0 * nmax * static_cast<double>(nmax));

    auto integrand = [&](double t) {
        double p = 1.0;
        for (int n : orders) {
            p *= scaled_bessel_i(n, 2.0 * t);
            if (p == 0.0) break;
        }
        return p;
    };

    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
    QuadratureResult out;
    out.cutoff = cutoff;
    double a = 0.0;
    double b = 1.0;
    long double total = 0.0L;
    int panels = 0;
    while (a < cutoff) {
        b = std::min(b, cutoff);
        double err = 0.0;
        const double piece = Kronrod::integrate(integrand, a, b, 15, 1e-14, &err);
        total += piece;
        out.error_bound += err;
        ++panels;
        a = b;
        b = 2.0 * b;
    }

    // Tail: product of per-axis asymptotic series in u = 1/t, each factor
    // (4 pi t)^{-1/2} sum_k c_k (2t)^{-k}; integrate t^{-d/2-m} termwise.
    std::vector<double> poly{1.0};
    for (int n : orders) {
        const auto c = asymptotic_coefficients(n, kTailOrder + 1);
        std::vector<double> next(static_cast<std::size_t>(kTailOrder) + 2, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i)
            for (std::size_t k = 0; k < c.size() && i + k < next.size(); ++k)
                next[i + k] += poly[i] * c[k] * std::pow(0.5, static_cast<double>(k));
        poly = std::move(next);
    }
    const double pref = std::pow(4.0 * std::numbers::pi, -0.5 * d);
    long double tail = 0.0L;
    for (int m = 0; m <= kTailOrder; ++m) {
        const double expo = 1.0 - 0.5 * d - m;
        tail += pref * poly[static_cast<std::size_t>(m)] * std::pow(cutoff, expo) / (0.5 * d + m - 1.0);
    }
    const int m = kTailOrder + 1;
    const double omitted = pref * std::abs(poly[static_cast<std::size_t>(m)]) *
                           std::pow(cutoff, 1.0 - 0.5 * d - m) / (0.5 * d + m - 1.0);
    out.error_bound += 10.0 * omitted + 1e-15 * std::abs(static_cast<double>(tail));

    out.value = static_cast<double>(total + tail);
    if (out.error_bound > eps) {
        throw ConvergenceError("free_green_quadrature: error bound exceeds eps at " + x.str(),
                               out.error_bound, panels);
    }
    return out;
}

}  // namespace hardy
