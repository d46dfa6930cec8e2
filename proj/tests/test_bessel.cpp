#include <doctest.h>

#include <cmath>

#include "hardy/bessel.hpp"
#include "hardy/error.hpp"
#include "support.hpp"

using namespace hardy;
using namespace hardy::testing;

TEST_CASE("scaled Bessel values") {
    for (int n : {0, 1, 2, 5, 12})
        for (double z : {0.0, 0.05, 1.0, 7.5, 80.0, 550.0, 650.0, 3000.0}) {
            const double ref = oracle_scaled_i(n, z);
            const double got = scaled_bessel_i(n, z);
            if (ref == 0.0)
                CHECK(got == 0.0);
            else
                CHECK(std::abs(got - ref) <= 1e-10 * ref);
        }
    CHECK(scaled_bessel_i(0, 0.0) == 1.0);
    CHECK_THROWS_AS(scaled_bessel_i(-1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(scaled_bessel_i(0, -1.0), InvalidArgument);
}

TEST_CASE("free Green's function at the origin matches Watson's constant") {
    const auto q = free_green_quadrature(Point::origin(3));
    CHECK(std::abs(q.value - watson_g0()) <= 1e-9);
    CHECK(q.error_bound <= 1e-9);
    CHECK(q.value == doctest::Approx(0.252731009858663).epsilon(1e-12));
}

TEST_CASE("quadrature against the double-exponential oracle") {
    for (const Point& x : {Point{1, 0, 0}, Point{3, 4, 5}, Point{10, 0, 0}, Point{9, 9, 9}, Point{20, 0, 0},
                           Point{0, 0, 0, 0}, Point{2, 1, 0, 1}, Point{0, 0, 0, 0, 0}}) {
        const double ref = oracle_free_green(x);
        CHECK(std::abs(free_green_quadrature(x).value - ref) <= 1e-8 * ref);
    }
}

TEST_CASE("lattice harmonicity of the quadrature values") {
    // L G_0 = 1_0 on Z^3: 6 G(0) - 6 G(e_1) = 1 and 6 G(x) = sum of neighbours off the origin
    const double g0 = free_green_quadrature(Point{0, 0, 0}).value;
    const double g1 = free_green_quadrature(Point{1, 0, 0}).value;
    CHECK(6 * (g0 - g1) == doctest::Approx(1.0).epsilon(1e-9));
    const Point x{2, 1, 0};
    double nb = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int s : {1, -1}) nb += free_green_quadrature(x + Point::unit(3, j, s)).value;
    CHECK(std::abs(6 * free_green_quadrature(x).value - nb) <= 1e-9);
}

TEST_CASE("far-field decay") {
    const double g = free_green_quadrature(Point{20, 0, 0}).value;
    CHECK(std::abs(g - 1.0 / (4 * std::numbers::pi * 20)) <= 5e-4 / 20);
}

TEST_CASE("quadrature rejects low dimension") {
    CHECK_THROWS_AS(free_green_quadrature(Point{0, 0}), InvalidArgument);
    CHECK_THROWS_AS(free_green_quadrature(Point::origin(3), 0.0), InvalidArgument);
}
