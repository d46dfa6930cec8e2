#include <doctest.h>

#include <cmath>

#include "hardy/bessel.hpp"
#include "hardy/green.hpp"
#include "support.hpp"

using namespace hardy;
using namespace hardy::testing;

TEST_CASE("pole equation of the free field") {
    const auto g = solve_green(free_field(3, 10), Point::origin(3));
    CHECK(g.at(Point::origin(3)) - g.at(Point{1, 0, 0}) == doctest::Approx(1.0 / 6).epsilon(1e-9));
    const auto diag = diagnose(g);
    CHECK(diag.pole_equation_error <= identity_tolerance(g));
    CHECK(diag.harmonicity_error <= identity_tolerance(g));
    CHECK(g.residual() <= 1e-10);
}

TEST_CASE("structural invariants on an iid field") {
    const auto g = solve_green(iid_field(3, 24, 0.2, 3), Point::origin(3));
    const auto diag = diagnose(g);
    CHECK(diag.min_value > 0.0);
    CHECK(diag.comparison_violations == 0);
    CHECK(diag.comparison_slack > 0.0);
    CHECK(diag.pole_equation_error <= identity_tolerance(g));
    CHECK(diag.harmonicity_error <= identity_tolerance(g));
}

TEST_CASE("solver errors") {
    CHECK_THROWS_AS(solve_green(free_field(3, 4), Point{5, 0, 0}), InvalidArgument);
    SolverOptions o;
    o.tol = 0.0;
    CHECK_THROWS_AS(solve_green(free_field(3, 4), Point::origin(3), o), InvalidArgument);
    o.tol = 1e-14;
    o.max_iter = 3;
    CHECK_THROWS_AS(solve_green(free_field(3, 8), Point::origin(3), o), ConvergenceError);
}

TEST_CASE("dense oracle agrees with CG") {
    SolverOptions tight;
    tight.tol = 1e-12;
    for (const auto& f : {free_field(3, 4), iid_field(3, 4, 0.3, 8, Distribution::uniform)}) {
        const auto cg = solve_green(f, Point::origin(3), tight);
        const auto dn = dense_green_oracle(f, Point::origin(3));
        double worst = 0.0;
        for (std::size_t k = 0; k < cg.values().size(); ++k)
            worst = std::max(worst, std::abs(cg.values()[k] - dn.values()[k]) / dn.values()[k]);
        CHECK(worst <= 1e-10);
    }
    CHECK_THROWS_AS(dense_green_oracle(free_field(3, 11), Point::origin(3)), InvalidArgument);
}

TEST_CASE("resolvent identity for a single-edge perturbation") {
    CHECK(resolvent_gap(iid_field(3, 3, 0.2, 4), Point{1, 0, -1}, 1, 0.7) <= 1e-9);
    CHECK(resolvent_gap(free_field(3, 3), Point{0, 0, 0}, 0, 1.3) <= 1e-9);
}

TEST_CASE("translated pole on the free field") {
    const int r = 12;
    const auto f = free_field(3, r);
    const auto g0 = solve_green(f, Point::origin(3));
    const auto g1 = solve_green(f, Point{1, 0, 0});
    double worst = 0.0;
    const BoxDomain inner(3, r / 2);
    for (std::size_t k = 0; k < inner.site_count(); ++k) {
        const Point x = inner.point(k);
        worst = std::max(worst, std::abs(g1.at(x + Point{1, 0, 0}) - g0.at(x)));
    }
    // boundary asymmetry is O(R^{2-d}); the harmonic corrector is ~ 1/(4 pi R)
    CHECK(worst > 0.0);
    CHECK(worst <= 1.0 / r);
}

TEST_CASE("random walk estimator") {
    const auto f = iid_field(3, 4, 0.2, 21);
    const auto g = solve_green(f, Point::origin(3));
    for (const Point& x : {Point{0, 0, 0}, Point{1, 0, 0}, Point{2, 1, 0}}) {
        const auto est = random_walk_green(*f, Point::origin(3), x, 200000, 99, 2);
        CHECK(std::abs(est.estimate - g.at(x)) <= 4.0 * est.stderr_);
    }
    const auto out = random_walk_green(*f, Point::origin(3), Point{7, 0, 0}, 10, 1);
    CHECK(out.estimate == 0.0);
    CHECK(out.stderr_ == 0.0);

    // thread count only partitions the walker range
    const auto a = random_walk_green(*f, Point::origin(3), Point{1, 1, 0}, 5000, 4, 1);
    const auto b = random_walk_green(*f, Point::origin(3), Point{1, 1, 0}, 5000, 4, 3);
    CHECK(a.estimate == b.estimate);
    CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("Aronson report") {
    const auto g = solve_green(free_field(3, 24), Point::origin(3));
    const std::vector<double> shells{4, 8, 12};
    const auto rep = aronson_report(g, shells);
    // oracle: the same shell extremes recomputed from the box values, and the
    // quadrature values as an upper envelope (truncation only lowers G)
    double bmin = 1e300, bmax = 0.0, qmax = 0.0;
    const BoxDomain inner(3, 13);
    for (std::size_t k = 0; k < inner.site_count(); ++k) {
        const Point x = inner.point(k);
        for (double r : shells) {
            if (x.norm() < r - 0.5 || x.norm() >= r + 0.5) continue;
            const double ratio = g.at(x) * (1.0 + x.norm());
            bmin = std::min(bmin, ratio);
            bmax = std::max(bmax, ratio);
            if (r == 4) qmax = std::max(qmax, oracle_free_green(x) * (1.0 + x.norm()));
        }
    }
    CHECK(rep.ratio_min == doctest::Approx(bmin).epsilon(1e-14));
    CHECK(rep.ratio_max == doctest::Approx(bmax).epsilon(1e-14));
    CHECK(rep.ratio_max <= qmax * (1 + 1e-9));
    CHECK(rep.constant == doctest::Approx(std::max(rep.ratio_max, 1 / rep.ratio_min)));
    REQUIRE(rep.shells.size() == 3);
    CHECK(rep.shells[0].count > 0);

    const auto gi = solve_green(iid_field(3, 24, 0.2, 17), Point::origin(3));
    const auto ri = aronson_report(gi, shells);
    CHECK(ri.ratio_min > 0.0);
    CHECK(ri.ratio_min <= ri.ratio_max);
    CHECK(std::isfinite(ri.constant));

    CHECK_THROWS_AS(aronson_report(g, {}), InvalidArgument);
    CHECK_THROWS_AS(aronson_report(g, {30.0}), InvalidArgument);
}

TEST_CASE("truncation extrapolation") {
    auto free = [](const BoxDomain& b) { return build_constant_field(b, 1.0); };
    const auto e = truncation_extrapolate(free, 3, {12, 18, 24, 36}, Point::origin(3), Point::origin(3));
    CHECK(std::abs(e.g_inf - watson_g0()) <= 1e-3);
    CHECK(e.monotone);
    CHECK(e.slope > 0.0);

    const auto e5 = truncation_extrapolate(free, 5, {6, 8, 10}, Point::origin(5), Point::origin(5));
    CHECK(std::isfinite(e5.g_inf));
    CHECK(e5.fit_residual < e5.values.back() - e5.values[1]);

    // fixed point: exact data on the model is reproduced
    const auto fp = extrapolate_values(3, {10, 20, 40}, {0.5 - 2.0 / 10, 0.5 - 2.0 / 20, 0.5 - 2.0 / 40});
    CHECK(fp.g_inf == doctest::Approx(0.5));
    CHECK(fp.slope == doctest::Approx(2.0));
    CHECK(fp.fit_residual < 1e-14);
    const auto flat = extrapolate_values(3, {100, 200, 400}, {0.3, 0.3, 0.3});
    CHECK(flat.slope == doctest::Approx(0.0));
    CHECK(flat.g_inf == doctest::Approx(0.3));

    const auto bad = extrapolate_values(3, {10, 20, 30}, {0.3, 0.2, 0.31});
    CHECK_FALSE(bad.monotone);
    CHECK_THROWS_AS(truncation_extrapolate(free, 3, {12, 18}, Point::origin(3), Point::origin(3)), InvalidArgument);
}

TEST_CASE("Dirichlet monotonicity on nested boxes") {
    const auto g8 = solve_green(iid_field(3, 8, 0.3, 5, Distribution::uniform), Point::origin(3));
    const auto g12 = solve_green(iid_field(3, 12, 0.3, 5, Distribution::uniform), Point::origin(3));
    const BoxDomain& box = g8.domain();
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        CHECK(g8.at(x) <= g12.at(x) + 10 * 1e-10);
    }
}

TEST_CASE("free Green's function is never locally constant") {
    const auto g = solve_green(free_field(3, 16), Point::origin(3));
    double worst = 1e300;
    const BoxDomain inner(3, 8);
    for (std::size_t k = 0; k < inner.site_count(); ++k) {
        const Point x = inner.point(k);
        if (x.norm() > 8) continue;
        double s = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int sg : {1, -1}) s += std::abs(g.at(x) - g.at(x + Point::unit(3, j, sg)));
        worst = std::min(worst, s);
    }
    CHECK(worst > 100 * identity_tolerance(g));
}

TEST_CASE("dense Richardson extrapolation is consistent with the quadrature oracle") {
    std::vector<double> radii, vals;
    for (int r : {4, 5, 6}) {
        radii.push_back(r);
        vals.push_back(dense_green_oracle(free_field(3, r), Point::origin(3)).at(Point::origin(3)));
    }
    const auto e = extrapolate_values(3, radii, vals);
    CHECK(std::abs(e.g_inf - free_green_quadrature(Point::origin(3)).value) <= 5e-3);
}
