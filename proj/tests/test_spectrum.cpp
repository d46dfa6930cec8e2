#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hardy/hardy_weight.hpp"
#include "hardy/spectrum.hpp"
#include "support.hpp"

using namespace hardy;
using namespace hardy::testing;

TEST_CASE("Lanczos agrees with the dense eigensolver") {
    for (const auto& f : {free_field(3, 6), iid_field(3, 6, 0.3, 12, Distribution::uniform)}) {
        const auto w = hardy_weight(solve_green(f, Point::origin(3)));
        const auto cert = certify_hardy(*f, w.w(), 1e-8);
        const double dense = dense_min_eigenvalue(*f, w.w());
        CHECK(cert.converged);
        CHECK(std::abs(cert.min_eigenvalue - dense) <= 1e-8);
        CHECK(cert.bracket_lo <= dense + 1e-12);
        CHECK(dense <= cert.bracket_hi + 1e-12);
        CHECK(cert.certified);
    }
}

TEST_CASE("zero weight gives the Dirichlet ground state") {
    const int r = 5;
    const auto f = free_field(3, r);
    const LatticeFunction zero(f->domain());
    // 2 L on (2R+1)^3 sites with zero exterior: 2 d * 2 (1 - cos(pi / (2R + 2)))
    const double exact = 2.0 * 3 * 2 * (1 - std::cos(std::numbers::pi / (2 * r + 2)));
    CHECK(dense_min_eigenvalue(*f, zero) == doctest::Approx(exact).epsilon(1e-10));
    const auto cert = certify_hardy(*f, zero, 0.0);
    CHECK(cert.min_eigenvalue == doctest::Approx(exact).epsilon(1e-8));
    CHECK(cert.certified);
}

TEST_CASE("scaling the weight") {
    const auto f = free_field(3, 8);
    const auto w = hardy_weight(solve_green(f, Point::origin(3)));
    CHECK(certify_hardy(*f, w.scaled(0.9).w(), 1e-8).certified);
    const auto over = certify_hardy(*f, w.scaled(1.5).w(), 1e-8);
    CHECK(over.min_eigenvalue < -1e-3);
    CHECK_FALSE(over.certified);
}

TEST_CASE("certificate input validation") {
    const auto f = free_field(3, 3);
    LatticeFunction neg(f->domain());
    neg[0] = -1.0;
    CHECK_THROWS_AS(certify_hardy(*f, neg, 1e-8), InvalidArgument);
    CHECK_THROWS_AS(certify_hardy(*f, LatticeFunction(f->domain()), -1.0), InvalidArgument);
    CHECK_THROWS_AS(certify_hardy(*f, LatticeFunction(BoxDomain(3, 2)), 1e-8), InvalidArgument);
    const auto big = free_field(3, 8);
    CHECK_THROWS_AS(dense_min_eigenvalue(*big, LatticeFunction(big->domain())), InvalidArgument);
}
