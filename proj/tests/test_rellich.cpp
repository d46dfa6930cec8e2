#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hardy/rellich.hpp"
#include "support.hpp"

using namespace hardy;
using namespace hardy::testing;

namespace {

double weighted_norm(const LatticeFunction& f, const LatticeFunction& weight, const LatticeFunction& support) {
    double s = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (support[k] != 0.0) s += weight[k] * f[k] * f[k];
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("Rellich constant") {
    CHECK(rellich_params(1.0, 5, 2.0 / 3).gamma == doctest::Approx(0.6141).epsilon(1e-4));
    const auto p = rellich_params(1.0, 3, 0.5);
    const double e = 1.0 / 6;
    CHECK(p.gamma == doctest::Approx(std::pow((1 - std::pow(e, 0.25)) / (1 - std::sqrt(e)), 2)));
    CHECK(p.ellipticity == doctest::Approx(e));
    CHECK(p.gamma > 0.0);
    CHECK(p.gamma < 1.0);
    // gamma -> 1 as alpha -> 1
    CHECK(rellich_params(1.0, 3, 0.999).gamma > 0.99);
    CHECK(default_rellich_alpha(6) == doctest::Approx(0.5));
    CHECK_THROWS_AS(rellich_params(1.0, 3, 1.0), InvalidArgument);
    CHECK_THROWS_AS(rellich_params(1.0, 3, 0.0), InvalidArgument);
    CHECK_THROWS_AS(rellich_params(1.2, 3, 0.5), InvalidArgument);
    CHECK_THROWS_AS(rellich_params(1.0, 2, 0.5), InvalidArgument);
}

TEST_CASE("Rellich weights") {
    const auto g = solve_green(iid_field(3, 8, 0.2, 6), Point::origin(3));
    const auto w = hardy_weight(g);
    const auto rw = rellich_weights(g, w, 0.5);
    std::size_t support = 0;
    for (std::size_t k = 0; k < rw.lhs.size(); ++k) {
        if (w.w()[k] > 0.0) {
            ++support;
            CHECK(rw.lhs[k] * rw.rhs[k] == doctest::Approx(g.values()[k]).epsilon(1e-12));
        } else {
            CHECK(rw.lhs[k] == 0.0);
            CHECK(rw.rhs[k] == 0.0);
        }
    }
    CHECK(rw.support == support);
    CHECK_THROWS_AS(rellich_weights(g, w, 0.0), InvalidArgument);
}

TEST_CASE("Rellich check against a direct evaluation") {
    const auto g = solve_green(free_field(3, 12), Point::origin(3));
    const auto w = hardy_weight(g);
    const auto params = rellich_params(1.0, 3, 0.5);
    const auto rw = rellich_weights(g, w, 0.5);
    const auto phis = rellich_test_functions(w, 6, 31);
    REQUIRE(phis.size() == 6);
    for (const auto& phi : phis) {
        for (auto op : {RellichOperator::elliptic, RellichOperator::free_laplacian}) {
            const auto c = rellich_check(g, w, params, phi, op);
            const auto aphi = apply_operator(g.field(), phi);
            CHECK(c.lhs_norm == doctest::Approx(weighted_norm(aphi, rw.lhs, phi)).epsilon(1e-12));
            CHECK(c.rhs_norm == doctest::Approx(weighted_norm(phi, rw.rhs, phi)).epsilon(1e-12));
            CHECK(c.residual == doctest::Approx(c.lhs_norm - (1 - c.gamma) * c.rhs_norm));
            CHECK(c.residual >= 0.0);
        }
        // both norms are 1-homogeneous
        LatticeFunction twice = phi;
        for (auto& v : twice.values()) v *= -2.0;
        const auto a = rellich_check(g, w, params, phi, RellichOperator::elliptic);
        const auto b = rellich_check(g, w, params, twice, RellichOperator::elliptic);
        CHECK(b.lhs_norm == doctest::Approx(2 * a.lhs_norm));
        CHECK(b.rhs_norm == doctest::Approx(2 * a.rhs_norm));
    }
}

TEST_CASE("Rellich test functions") {
    const auto g = solve_green(iid_field(3, 10, 0.2, 8), Point::origin(3));
    const auto w = hardy_weight(g);
    const auto a = rellich_test_functions(w, 8, 5);
    const auto b = rellich_test_functions(w, 8, 5);
    const auto c = rellich_test_functions(w, 8, 6);
    REQUIRE(a.size() == 8);
    bool differs = false;
    const BoxDomain& box = w.domain();
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(std::ranges::equal(a[n].values(), b[n].values()));
        differs = differs || !std::ranges::equal(a[n].values(), c[n].values());
        bool nonzero = false;
        for (std::size_t k = 0; k < box.site_count(); ++k) {
            if (a[n][k] == 0.0) continue;
            nonzero = true;
            const Point x = box.point(k);
            for (int i = 0; i < 3; ++i) CHECK(std::abs(x[i]) <= box.radius() - 2);
            CHECK(w.w()[k] > 0.0);
        }
        CHECK(nonzero);
    }
    CHECK(differs);
}

TEST_CASE("phi outside the support of w is rejected") {
    const auto g = solve_green(free_field(3, 4), Point::origin(3));
    const auto w = hardy_weight(g);
    const auto phi = LatticeFunction::indicator(g.domain(), Point{4, 0, 0});
    CHECK_THROWS_AS(rellich_check(g, w, rellich_params(1.0, 3, 0.5), phi, RellichOperator::elliptic),
                    InvalidArgument);
}
