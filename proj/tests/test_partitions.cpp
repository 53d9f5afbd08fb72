#include <doctest.h>

#include "rnderiv/partition.hpp"
#include "support/gen.hpp"

using namespace rnderiv;

namespace {
Partition two_cells(const Rat& cut) {
    return Partition::trivial().split_cell(0, cut);
}
} // namespace

TEST_CASE("trivial partition") {
    Partition t = Partition::trivial();
    CHECK(t.size() == 1);
    CHECK(t.cell(0) == IntervalSet::unit());
    gen::Rng rng(3);
    for (int i = 0; i < 50; ++i) CHECK(is_refinement(t, gen::partition(rng, 6)));
}

TEST_CASE("split_cell examples") {
    Partition halves = two_cells(make_rat(1, 2));
    REQUIRE(halves.size() == 2);
    CHECK(halves.cell(0) == IntervalSet::interval(Rat(0), make_rat(1, 2)));
    CHECK(halves.cell(1) == IntervalSet::interval(make_rat(1, 2), Rat(1)));

    Partition three = halves.split_cell(1, make_rat(2, 3));
    REQUIRE(three.size() == 3);
    CHECK(three.cell(1) == IntervalSet::interval(make_rat(1, 2), make_rat(2, 3)));
    CHECK(three.cell(2) == IntervalSet::interval(make_rat(2, 3), Rat(1)));

    CHECK_THROWS_AS(Partition::trivial().split_cell(0, Rat(0)), Error);
    CHECK_THROWS_AS(halves.split_cell(0, make_rat(1, 2)), Error); // boundary of the cell
    CHECK_THROWS_AS(halves.split_cell(0, make_rat(2, 3)), Error); // lies in the other cell
    CHECK_THROWS_AS(halves.split_cell(5, make_rat(1, 3)), Error);
}

TEST_CASE("split of a non-contiguous cell keeps the remainder together") {
    // cell {[0,1/4) u [1/2,1)} split at 3/4
    Partition p = Partition::from_cells(
        {IntervalSet::from_pieces({{Rat(0), make_rat(1, 4)}, {make_rat(1, 2), Rat(1)}}),
         IntervalSet::interval(make_rat(1, 4), make_rat(1, 2))});
    Partition q = p.split_cell(0, make_rat(3, 4));
    REQUIRE(q.size() == 3);
    CHECK(q.cell(0) ==
          IntervalSet::from_pieces({{Rat(0), make_rat(1, 4)}, {make_rat(1, 2), make_rat(3, 4)}}));
    CHECK(q.cell(2) == IntervalSet::interval(make_rat(3, 4), Rat(1)));
    CHECK(is_refinement(p, q));
}

TEST_CASE("common refinement examples") {
    Partition a = two_cells(make_rat(1, 2));
    Partition b = two_cells(make_rat(1, 3));
    Partition ab = common_refinement(a, b);
    REQUIRE(ab.size() == 3);
    CHECK(ab.cell(0) == IntervalSet::interval(Rat(0), make_rat(1, 3)));
    CHECK(ab.cell(1) == IntervalSet::interval(make_rat(1, 3), make_rat(1, 2)));
    CHECK(ab.cell(2) == IntervalSet::interval(make_rat(1, 2), Rat(1)));

    CHECK(common_refinement(a, a) == a);
    CHECK(common_refinement(a, Partition::trivial()) == a);
}

TEST_CASE("is_refinement examples") {
    Partition a = two_cells(make_rat(1, 2));
    Partition b = two_cells(make_rat(1, 3));
    CHECK_FALSE(is_refinement(a, b)); // [1/3,1) straddles the cut at 1/2
    CHECK(is_refinement(a, common_refinement(a, b)));
    CHECK(is_refinement(b, common_refinement(a, b)));
}

TEST_CASE("lattice laws on random partitions (incl. non-contiguous cells)") {
    gen::Rng rng(17);
    for (int i = 0; i < 120; ++i) {
        Partition x = gen::scattered_partition(rng, 6, 4);
        Partition y = gen::scattered_partition(rng, 6, 4);
        Partition z = gen::scattered_partition(rng, 5, 3);

        Partition xy = common_refinement(x, y);
        CHECK(xy == common_refinement(y, x));                                   // commutative
        CHECK(common_refinement(xy, z) == common_refinement(x, common_refinement(y, z)));
        CHECK(common_refinement(x, x) == x);                                    // idempotent
        CHECK(is_refinement(x, xy));
        CHECK(is_refinement(y, xy));

        // partial order: reflexive + transitive on a refinement chain
        CHECK(is_refinement(x, x));
        Partition fine = gen::refine(rng, xy, 2);
        CHECK(is_refinement(x, fine));

        // minimality among common upper bounds: any refinement of both x and y
        // refines x v y
        CHECK(is_refinement(xy, fine));

        // cover exactness
        Rat total(0);
        for (const IntervalSet& c : x.cells()) total += c.length();
        CHECK(total == Rat(1));
    }
}

TEST_CASE("from_cells validation") {
    CHECK_THROWS_AS(Partition::from_cells({IntervalSet::interval(Rat(0), make_rat(1, 2))}), Error);
    CHECK_THROWS_AS(Partition::from_cells({IntervalSet::unit(), IntervalSet::unit()}), Error);
    CHECK_THROWS_AS(Partition::from_cells({IntervalSet::unit(), IntervalSet()}), Error);
    // overlapping cells with total length 1 still fail the union check
    CHECK_THROWS_AS(
        Partition::from_cells({IntervalSet::interval(Rat(0), make_rat(1, 2)),
                               IntervalSet::interval(make_rat(1, 4), make_rat(3, 4))}),
        Error);
}

TEST_CASE("grid helper") {
    Partition g = Partition::grid(2, 3);
    CHECK(g.size() == 8);
    CHECK(g.cell(3) == IntervalSet::interval(make_rat(3, 8), make_rat(1, 2)));
}
