#include <doctest.h>

#include <random>

#include "rnderiv/rational.hpp"

using namespace rnderiv;

TEST_CASE("parse_rat accepts p/q, integers and decimals") {
    CHECK(parse_rat("3/4") == make_rat(3, 4));
    CHECK(parse_rat("-3/4") == make_rat(-3, 4));
    CHECK(parse_rat("6/8") == make_rat(3, 4)); // canonicalized
    CHECK(parse_rat("7") == Rat(7));
    CHECK(parse_rat("0.25") == make_rat(1, 4));
    CHECK(parse_rat("1e-6") == make_rat(1, 1000000));
    CHECK(parse_rat("2.5e2") == Rat(250));
    CHECK(parse_rat(" 1/3 ") == make_rat(1, 3));
}

TEST_CASE("parse_rat rejects junk") {
    CHECK_THROWS_AS(parse_rat(""), Error);
    CHECK_THROWS_AS(parse_rat("1/0"), Error);
    CHECK_THROWS_AS(parse_rat("a/b"), Error);
    CHECK_THROWS_AS(parse_rat("1.2.3"), Error);
    CHECK_THROWS_AS(parse_rat("--5"), Error);
}

TEST_CASE("rat_str round-trips") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        long num = static_cast<long>(rng() % 2001) - 1000;
        long den = 1 + static_cast<long>(rng() % 999);
        Rat r = make_rat(num, den);
        CHECK(parse_rat(rat_str(r)) == r);
    }
}

TEST_CASE("rat_to_double rounds to nearest") {
    // 1/3 sits strictly between two doubles; nearest is the one whose exact
    // value minimizes the distance.
    Rat third = make_rat(1, 3);
    double d = rat_to_double(third);
    Rat err = rat_abs(third - rat_from_double(d));
    for (double alt : {std::nextafter(d, 1.0), std::nextafter(d, 0.0)})
        CHECK(err <= rat_abs(third - rat_from_double(alt)));

    // big operands exercise the slow path
    Rat big = make_rat(Int("123456789012345678901234567"), Int("987654321098765432109876543"));
    double bd = rat_to_double(big);
    Rat berr = rat_abs(big - rat_from_double(bd));
    for (double alt : {std::nextafter(bd, 1.0), std::nextafter(bd, 0.0)})
        CHECK(berr <= rat_abs(big - rat_from_double(alt)));
}

TEST_CASE("rat_from_double is exact") {
    CHECK(rat_from_double(0.5) == make_rat(1, 2));
    CHECK(rat_from_double(0.1) != make_rat(1, 10)); // 0.1 is not a dyadic rational
}

TEST_CASE("pow_rat and grid helpers") {
    CHECK(pow_rat(make_rat(2, 3), 3) == make_rat(8, 27));
    CHECK(pow_rat(make_rat(5, 1), 0) == Rat(1));
    CHECK(dyadic(Int(3), 2) == make_rat(3, 4));
    CHECK(triadic(Int(2), 1) == make_rat(2, 3));
    CHECK(scaled_floor(make_rat(1, 3), 2, 3) == 2); // floor(8/3)
    CHECK(scaled_floor(make_rat(1, 2), 2, 1) == 1);
}
