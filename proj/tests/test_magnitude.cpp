#include <doctest.h>

#include "ultraberk/magnitude.hpp"

using namespace ultraberk;

namespace {
Magnitude mag(long num, long den = 1) { return Magnitude::from_exp(make_rat(num, den)); }
} // namespace

TEST_CASE("magnitude arithmetic") {
    // b^(-1/2) * b^(-2) = b^(-5/2)
    CHECK(mag(1, 2) * mag(2) == mag(5, 2));
    // max(b^-4, b^-5/2) = b^-5/2
    CHECK(Magnitude::max(mag(4), mag(5, 2)) == mag(5, 2));
    // b^-(1+eps) < b^-1
    Magnitude eps = Magnitude::from_exp(Rat(1), Rat(1));
    CHECK(Magnitude::cmp(eps, mag(1)) < 0);
    CHECK(mag(0).is_one());
    CHECK((Magnitude::zero() * mag(3)).is_zero());
    CHECK_THROWS_AS(mag(1) / Magnitude::zero(), UbError);
    CHECK_THROWS_AS(Magnitude::zero().pow(Rat(0)), UbError);
    CHECK(Magnitude::zero().pow(Rat(2)).is_zero());
    // exact fractional roots
    CHECK(mag(5, 2).pow(make_rat(1, 5)) == mag(1, 2));
}

TEST_CASE("magnitude text round trip") {
    for (const char* s : {"0", "b^0", "b^(-3/2)", "b^(-3/2 - 1/4e)", "b^(2)", "b^(-1/4e)",
                          "b^(1/2 + 3e)"}) {
        Magnitude m = Magnitude::parse(s);
        CHECK(Magnitude::parse(m.str()) == m);
    }
    CHECK(Magnitude::parse("b^(-3/2)") == mag(3, 2));
    CHECK(Magnitude::parse("b^(-3/2 - 1/4e)") == Magnitude::from_exp(make_rat(3, 2), make_rat(1, 4)));
    CHECK(Magnitude::parse("1") == Magnitude::one());
    CHECK(Magnitude::parse("0").is_zero());
}

TEST_CASE("lower hull") {
    // T^2 - p: single slope, root valuation 1/2 with multiplicity 2
    NewtonPolygon np = lower_hull({{0, Rat(1)}, {2, Rat(0)}});
    REQUIRE(np.single_segment());
    auto rv = np.root_valuations();
    REQUIRE(rv.size() == 1);
    CHECK(rv[0].first == make_rat(1, 2));
    CHECK(rv[0].second == 2);

    // T - a, a unit: slope 0
    NewtonPolygon np1 = lower_hull({{0, Rat(0)}, {1, Rat(0)}});
    CHECK(np1.root_valuations()[0].first == 0);
    CHECK(np1.root_valuations()[0].second == 1);

    // (T-1)(T-p) = T^2 - (1+p)T + p: root valuations {1, 0}
    NewtonPolygon np2 = lower_hull({{0, Rat(1)}, {1, Rat(0)}, {2, Rat(0)}});
    auto rv2 = np2.root_valuations();
    REQUIRE(rv2.size() == 2);
    CHECK(rv2[0].first == Rat(1));
    CHECK(rv2[1].first == Rat(0));
    // geometric slopes nondecreasing
    auto sl = np2.slopes();
    CHECK(sl[0].first <= sl[1].first);

    CHECK_THROWS_AS(lower_hull({{0, std::nullopt}, {1, std::nullopt}}), UbError);
}

TEST_CASE("solve_radius") {
    // identity case
    CHECK(solve_radius(Magnitude::one(), {}, mag(3)) == mag(3));
    // rho * max(rho, b^-1) = b^-3 has rho = b^-2
    CHECK(solve_radius(Magnitude::one(), {mag(1)}, mag(3)) == mag(2));
    // target zero
    CHECK(solve_radius(mag(-2), {mag(1), Magnitude::zero()}, Magnitude::zero()).is_zero());
    // zero distances act as extra rho factors: lead * rho^2 = b^-4
    CHECK(solve_radius(Magnitude::one(), {Magnitude::zero()}, mag(4)) == mag(2));
}
