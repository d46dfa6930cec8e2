// Shared fixtures and independent oracles for the unit and acceptance tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "hardy/green.hpp"
#include "hardy/lattice.hpp"

namespace hardy::testing {

inline std::shared_ptr<const CoefficientField> free_field(int dim, int radius) {
    return std::make_shared<const CoefficientField>(build_constant_field(BoxDomain(dim, radius), 1.0));
}

inline std::shared_ptr<const CoefficientField> iid_field(int dim, int radius, double delta, std::uint64_t seed,
                                                         Distribution dist = Distribution::rademacher) {
    return std::make_shared<const CoefficientField>(build_iid_field(BoxDomain(dim, radius), delta, dist, seed));
}

/// G_0(0) on Z^3 from Watson's closed form,
/// W = sqrt(6)/(32 pi^3) Gamma(1/24) Gamma(5/24) Gamma(7/24) Gamma(11/24), G_0(0) = W / 6.
inline double watson_g0() {
    const long double pi = std::numbers::pi_v<long double>;
    const long double w = std::sqrt(6.0L) / (32.0L * pi * pi * pi) * std::tgamma(1.0L / 24) *
                          std::tgamma(5.0L / 24) * std::tgamma(7.0L / 24) * std::tgamma(11.0L / 24);
    return static_cast<double>(w / 6.0L);
}

/// e^{-z} I_n(z): Boost below z = 600, four-term Hankel expansion above.
inline double oracle_scaled_i(int n, double z) {
    if (z < 600.0) return boost::math::cyl_bessel_i(n, z) * std::exp(-z);
    const double mu = 4.0 * n * n;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 6; ++k) {
        term *= -(mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * z);
        sum += term;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

/// Heat-kernel integral by double-exponential rules (tanh-sinh on [0, 300],
/// exp-sinh on [300, inf)); shares no code with free_green_quadrature.
inline double oracle_free_green(const Point& x) {
    auto f = [&](double t) {
        double p = 1.0;
        for (int j = 0; j < x.dim(); ++j) p *= oracle_scaled_i(std::abs(x[j]), 2.0 * t);
        return p;
    };
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    return ts.integrate(f, 0.0, 300.0) + es.integrate([&](double u) { return f(300.0 + u); });
}

/// G^F(x, 0) - G^{F'}(x, 0) against -(a^F - a^{F'}) grad G^F(x, e) grad G^{F'}(e, 0) for
/// F' = F with the edge e = [u, u + e_axis] changed; returns the max gap relative to max |lhs|.
inline double resolvent_gap(const std::shared_ptr<const CoefficientField>& f, const Point& u, int axis, double new_value) {
    const int d = f->dim();
    const Point v = u + Point::unit(d, axis);
    auto fp = std::make_shared<const CoefficientField>(f->with_edge(u, axis, new_value));
    const Point o = Point::origin(d);
    const GreenField g = dense_green_oracle(f, o);
    const GreenField gp = dense_green_oracle(fp, o);
    const GreenField gu = dense_green_oracle(f, u);
    const GreenField gv = dense_green_oracle(f, v);
    const double da = f->conductance(u, axis) - new_value;
    const double grad_p = gp.at(v) - gp.at(u);
    double worst = 0.0, scale = 0.0;
    const BoxDomain& box = f->domain();
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        const double lhs = g.at(x) - gp.at(x);
        const double rhs = -da * (gv.at(x) - gu.at(x)) * grad_p;
        worst = std::max(worst, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(lhs));
    }
    return worst / scale;
}

}  // namespace hardy::testing
