#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "hardy/field_io.hpp"
#include "hardy/lattice.hpp"
#include "hardy/rng.hpp"
#include "support.hpp"

using namespace hardy;

TEST_CASE("box domain enumeration") {
    const BoxDomain box(3, 2);
    CHECK(box.site_count() == 125);
    for (std::size_t k = 0; k < box.site_count(); ++k) CHECK(box.index(box.point(k)) == k);
    // x_d varies fastest
    CHECK(box.point(1) == Point({-2, -2, -1}));
    CHECK(box.is_interior(Point{1, 1, 1}));
    CHECK_FALSE(box.is_interior(Point{2, 0, 0}));
    CHECK_THROWS_AS(BoxDomain(2, 4), InvalidArgument);
    CHECK_THROWS_AS(BoxDomain(3, 0), InvalidArgument);
}

TEST_CASE("constant fields") {
    CHECK(build_constant_field(BoxDomain(3, 2), 1.0).ellipticity() == doctest::Approx(1.0 / 6));
    CHECK(build_constant_field(BoxDomain(4, 1), 1.0).ellipticity() == doctest::Approx(1.0 / 8));
    const auto half = build_constant_field(BoxDomain(3, 2), 0.5, 0.5);
    CHECK(half.ellipticity() == doctest::Approx(1.0 / 6));
    for (double a : half.edges()) CHECK(a == 0.5);
    CHECK_THROWS_AS(build_constant_field(BoxDomain(3, 2), 0.0), InvalidArgument);
    CHECK_THROWS_AS(build_constant_field(BoxDomain(3, 2), 0.4, 0.5), InvalidArgument);
}

TEST_CASE("iid fields") {
    const BoxDomain box(3, 5);
    const auto f = build_iid_field(box, 0.2, Distribution::rademacher, 11);
    for (double a : f.edges()) CHECK((a == doctest::Approx(0.8) || a == doctest::Approx(1.2)));
    CHECK(f.lambda() == doctest::Approx(0.8));

    // every forward edge of a vertex shares its variate
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        const Point x = box.point(k);
        CHECK(f.conductance(x, 0) == f.conductance(x, 1));
        CHECK(f.conductance(x, 1) == f.conductance(x, 2));
    }

    const auto same = build_iid_field(box, 0.2, Distribution::rademacher, 11);
    const auto other = build_iid_field(box, 0.2, Distribution::rademacher, 12);
    CHECK(std::equal(f.edges().begin(), f.edges().end(), same.edges().begin()));
    CHECK_FALSE(std::equal(f.edges().begin(), f.edges().end(), other.edges().begin()));

    // nested boxes agree on the overlap
    const auto big = build_iid_field(BoxDomain(3, 8), 0.2, Distribution::rademacher, 11);
    for (std::size_t k = 0; k < box.site_count(); ++k)
        for (int j = 0; j < 3; ++j) CHECK(f.conductance(box.point(k), j) == big.conductance(box.point(k), j));

    CHECK_THROWS_AS(build_iid_field(box, 0.0, Distribution::uniform, 1), InvalidArgument);
    CHECK_THROWS_AS(build_iid_field(box, 1.0, Distribution::uniform, 1), InvalidArgument);
}

TEST_CASE("vertex variates have mean zero") {
    for (auto dist : {Distribution::rademacher, Distribution::uniform}) {
        const BoxDomain box(3, 49);  // 99^3 ~ 0.97e6 vertices
        double s = 0.0;
        for (std::size_t k = 0; k < box.site_count(); ++k) {
            const double w = vertex_variate(2024, box.point(k), dist);
            REQUIRE(std::abs(w) <= 1.0);
            s += w;
        }
        CHECK(std::abs(s / box.site_count()) < 0.005);
    }
}

TEST_CASE("ellipticity invariants on generated fields") {
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        for (double delta : {0.1, 0.5, 0.9}) {
            const auto f = build_iid_field(BoxDomain(3, 3), delta, Distribution::uniform, seed);
            const double lam = f.lambda();
            for (double a : f.edges()) {
                CHECK(a >= lam * (1 - 1e-12));
                CHECK(a <= (1 / lam) * (1 + 1e-12));
            }
            CHECK(f.ellipticity() >= lam * lam / 6.0);
            CHECK(f.ellipticity() <= 1.0 / 6.0 + 1e-15);
        }
}

TEST_CASE("operator on the indicator of the origin") {
    const auto f = build_constant_field(BoxDomain(3, 3), 1.0);
    const auto lf = apply_operator(f, LatticeFunction::indicator(f.domain(), Point::origin(3)));
    CHECK(lf.at(Point::origin(3)) == 6.0);
    for (int j = 0; j < 3; ++j)
        for (int s : {1, -1}) CHECK(lf.at(Point::unit(3, j, s)) == -1.0);
    CHECK(lf.at(Point{1, 1, 0}) == 0.0);
}

TEST_CASE("constants are harmonic in the interior") {
    const auto f = build_iid_field(BoxDomain(3, 3), 0.3, Distribution::uniform, 5);
    LatticeFunction c(f.domain());
    for (auto& v : c.values()) v = 2.5;
    const auto lc = apply_operator(f, c);
    for (std::size_t k = 0; k < f.domain().site_count(); ++k)
        if (f.domain().is_interior(f.domain().point(k))) CHECK(std::abs(lc[k]) < 1e-14);
}

TEST_CASE("operator symmetry and the energy identity") {
    const auto f = build_iid_field(BoxDomain(3, 2), 0.4, Distribution::uniform, 9);
    const BoxDomain& box = f.domain();
    CounterRng rng(77);
    LatticeFunction u(box), v(box);
    for (std::size_t k = 0; k < box.site_count(); ++k) {
        if (!box.is_interior(box.point(k))) continue;
        u[k] = rng.uniform() - 0.5;
        v[k] = rng.uniform() - 0.5;
    }
    const double a = inner_product(v, apply_operator(f, u));
    const double b = inner_product(u, apply_operator(f, v));
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));

    const double q = dirichlet_energy(f, u);
    CHECK(q > 0.0);
    CHECK(std::abs(q - 2.0 * inner_product(u, apply_operator(f, u))) <= 1e-12 * q);

    const auto free = build_constant_field(box, 1.0);
    CHECK(dirichlet_energy(free, LatticeFunction::indicator(box, Point::origin(3))) == doctest::Approx(12.0));
    CHECK(dirichlet_energy(free, LatticeFunction(box)) == 0.0);
}

TEST_CASE("with_edge and scaled") {
    const auto f = build_constant_field(BoxDomain(3, 2), 1.0);
    const auto g = f.with_edge(Point{0, 0, 0}, 1, 1.5);
    CHECK(g.conductance(Point{0, 0, 0}, 1) == 1.5);
    CHECK(g.bond(Point{0, 1, 0}, Point{0, 0, 0}) == 1.5);
    CHECK(g.conductance(Point{0, 0, 0}, 0) == 1.0);
    const auto h = f.scaled(2.0);
    for (double a : h.edges()) CHECK(a == 2.0);
}

TEST_CASE("field text round trip") {
    for (const auto& f : {build_iid_field(BoxDomain(3, 2), 0.2, Distribution::uniform, 42),
                          build_constant_field(BoxDomain(4, 1), 1.0),
                          build_constant_field(BoxDomain(3, 2), 1.0).with_edge(Point{0, 0, 0}, 2, 1.25)}) {
        std::stringstream ss;
        write_field(ss, f);
        const auto g = read_field(ss);
        CHECK(g.domain() == f.domain());
        CHECK(g.source() == f.source());
        CHECK(std::equal(f.edges().begin(), f.edges().end(), g.edges().begin(), g.edges().end()));
    }

    std::stringstream bad("hardy-field v1\ndim 3\nradius 1\nlambda 0.8\nsource iid\ndelta 0.2\ndist uniform\nseed 1\n"
                          "edges 81\n");
    for (int i = 0; i < 81; ++i) bad << "1\n";
    CHECK_THROWS_AS(read_field(bad), InvalidArgument);
    std::stringstream nohdr("dim 3\n");
    CHECK_THROWS_AS(read_field(nohdr), InvalidArgument);
}
