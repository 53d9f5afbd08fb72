#include <doctest.h>

#include "rnderiv/interval_set.hpp"
#include "support/gen.hpp"

using namespace rnderiv;

namespace {

IntervalSet iv(long a, long b, long c, long d) {
    return IntervalSet::interval(make_rat(a, b), make_rat(c, d));
}

IntervalSet random_set(gen::Rng& rng) {
    std::vector<Interval> pieces;
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) {
        Rat a = gen::rat01(rng), b = gen::rat01(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        pieces.push_back({a, b});
    }
    return IntervalSet::from_pieces(std::move(pieces));
}

} // namespace

TEST_CASE("canonical form merges touching and overlapping pieces") {
    IntervalSet s = IntervalSet::from_pieces(
        {{make_rat(1, 2), make_rat(3, 4)}, {Rat(0), make_rat(1, 2)}, {make_rat(3, 4), make_rat(4, 5)}});
    REQUIRE(s.pieces().size() == 1);
    CHECK(s == iv(0, 1, 4, 5));
    CHECK(IntervalSet::interval(make_rat(1, 3), make_rat(1, 3)).empty());
    CHECK_THROWS_AS(IntervalSet::interval(make_rat(1, 2), make_rat(1, 3)), Error);
    CHECK_THROWS_AS(IntervalSet::interval(Rat(0), Rat(2)), Error);
}

TEST_CASE("is_canonical recognizes only sorted, disjoint, gap-separated pieces") {
    CHECK(IntervalSet::is_canonical({{Rat(0), make_rat(1, 2)}, {make_rat(2, 3), Rat(1)}}));
    CHECK_FALSE(IntervalSet::is_canonical({{Rat(0), make_rat(1, 2)}, {make_rat(1, 2), Rat(1)}}));
    CHECK_FALSE(IntervalSet::is_canonical({{make_rat(1, 2), Rat(1)}, {Rat(0), make_rat(1, 4)}}));
    CHECK_FALSE(IntervalSet::is_canonical({{make_rat(1, 2), make_rat(1, 2)}}));
}

TEST_CASE("membership respects half-open convention") {
    IntervalSet s = iv(1, 4, 1, 2);
    CHECK(s.contains(make_rat(1, 4)));
    CHECK_FALSE(s.contains(make_rat(1, 2)));
    CHECK(s.strictly_inside(make_rat(1, 3)));
    CHECK_FALSE(s.strictly_inside(make_rat(1, 4)));
    CHECK_FALSE(s.strictly_inside(make_rat(1, 2)));
}

TEST_CASE("set algebra properties on random sets") {
    gen::Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        IntervalSet a = random_set(rng), b = random_set(rng);
        IntervalSet ab = a.intersect(b);
        CHECK(ab == b.intersect(a));
        CHECK(ab.subset_of(a));
        CHECK(ab.subset_of(b));
        IntervalSet u = a.unite(b);
        CHECK(a.subset_of(u));
        CHECK(b.subset_of(u));
        // inclusion-exclusion on Lebesgue length
        CHECK(u.length() + ab.length() == a.length() + b.length());
        // intersect distributes into the union parts it came from
        CHECK(u.intersect(a) == a);
    }
}

TEST_CASE("length and leftmost") {
    IntervalSet s = IntervalSet::from_pieces({{Rat(0), make_rat(1, 4)}, {make_rat(1, 2), Rat(1)}});
    CHECK(s.length() == make_rat(3, 4));
    CHECK(s.leftmost() == Rat(0));
    CHECK(IntervalSet().length() == Rat(0));
}
