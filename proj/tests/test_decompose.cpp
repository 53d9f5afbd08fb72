#include <doctest.h>

#include "rnderiv/decompose.hpp"
#include "support/gen.hpp"

using namespace rnderiv;

namespace {

DecomposeConfig quick(int rounds,
                      EngineConfig::SplitMode mode = EngineConfig::SplitMode::all_improving) {
    DecomposeConfig cfg;
    cfg.engine.max_rounds = rounds;
    cfg.engine.split_mode = mode;
    return cfg;
}

} // namespace

TEST_CASE("psi examples and algebra") {
    CHECK(psi(Rat(0)) == ExtendedRat{false, Rat(0)});
    CHECK(psi(make_rat(1, 2)) == ExtendedRat{false, Rat(1)});
    CHECK(psi(Rat(1)).infinite);
    CHECK_THROWS_AS(psi(Rat(-1)), Error);
    CHECK_THROWS_AS(psi(make_rat(3, 2)), Error);

    gen::Rng rng(3);
    Rat prev(-1);
    for (int i = 0; i < 100; ++i) {
        Rat g = gen::positive_rat(rng, 20, 20);
        CHECK(psi(g / (1 + g)).value == g); // inverse relation, exact
        Rat x = gen::rat01(rng);
        Rat y = gen::rat01(rng);
        if (x < y) CHECK(psi(x).value < psi(y).value); // strictly increasing
    }
}

TEST_CASE("decompose: nu = mu gives the constant density with no singular part") {
    MeasureSpec leb = MeasureSpec::lebesgue();
    Decomposition d = decompose(leb, leb, quick(10));
    CHECK(d.density.values() == std::vector<Rat>{Rat(1)});
    CHECK(d.singular_mass == Rat(0));
    CHECK(d.residual == Rat(0));
    CHECK(d.singular_cells.empty());
}

TEST_CASE("decompose: atom plus density splits into the analytic parts") {
    MeasureSpec mu = MeasureSpec::lebesgue();
    MeasureSpec nu = MeasureSpec::sum(
        {MeasureSpec::scale(make_rat(1, 2), MeasureSpec::lebesgue()),
         MeasureSpec::scale(make_rat(1, 2), MeasureSpec::atoms({{make_rat(1, 2), Rat(1)}}))});
    Decomposition d = decompose(nu, mu, quick(25));
    // atom at a dyadic point isolates quickly; default threshold flags it
    CHECK(d.singular_mass >= make_rat(1, 2));
    CHECK(d.singular_mass <= make_rat(1, 2) + make_rat(1, 1000000));
    CHECK(d.singular_cells.contains(make_rat(1, 2)));
    CHECK(d.singular_cells.length() < make_rat(1, 100000));
    CHECK(l1_distance(d.density, SimpleFunction::constant(make_rat(1, 2)), mu) <
          make_rat(1, 1000000));
    CHECK(d.residual == Rat(0));
}

TEST_CASE("derivative examples") {
    MeasureSpec mu = MeasureSpec::lebesgue();
    MeasureSpec nu = MeasureSpec::density({Rat(0), make_rat(1, 2), Rat(1)},
                                          {Poly{make_rat(3, 2)}, Poly{make_rat(1, 2)}});
    SimpleFunction f = derivative(nu, mu, quick(20, EngineConfig::SplitMode::best_only));
    CHECK(f.values() == std::vector<Rat>{make_rat(3, 2), make_rat(1, 2)});

    SimpleFunction zero = derivative(MeasureSpec::zero(), mu, quick(5));
    CHECK(integrate(zero, mu) == Rat(0));

    SimpleFunction atom_only =
        derivative(MeasureSpec::atoms({{make_rat(1, 3), Rat(1)}}), mu, quick(30));
    CHECK(l1_distance(atom_only, SimpleFunction::constant(Rat(0)), mu) < make_rat(1, 1000));
}

TEST_CASE("algebraic consistency: psi of h equals nu/mu on every moderate cell") {
    MeasureSpec mu = MeasureSpec::lebesgue();
    MeasureSpec nu = MeasureSpec::sum(
        {MeasureSpec::density({Rat(0), make_rat(1, 3), Rat(1)},
                              {Poly{make_rat(1, 2)}, Poly{Rat(2), Rat(-1)}}),
         MeasureSpec::atoms({{make_rat(3, 4), make_rat(1, 4)}})});
    Decomposition d = decompose(nu, mu, quick(12));
    const EngineOutput& eng = d.engine;
    for (std::size_t i = 0; i < eng.final_partition.size(); ++i) {
        const Rat& h = eng.f_gamma.value(i);
        Rat mu_cell = eng.cell_gamma[i] - eng.cell_nu[i];
        if (h > 0 && h < 1 && mu_cell > 0) {
            ExtendedRat g = psi(h);
            REQUIRE_FALSE(g.infinite);
            CHECK(g.value == eng.cell_nu[i] / mu_cell);
        }
    }
}

TEST_CASE("restriction identity: output density matches f_pi on the generating partition") {
    MeasureSpec mu = MeasureSpec::lebesgue();
    MeasureSpec nu = MeasureSpec::density(
        {Rat(0), make_rat(1, 4), make_rat(5, 8), Rat(1)},
        {Poly{Rat(2)}, Poly{make_rat(1, 4)}, Poly{make_rat(5, 4)}});
    Partition pi = Partition::from_cells(
        {IntervalSet::interval(Rat(0), make_rat(1, 4)),
         IntervalSet::interval(make_rat(1, 4), make_rat(5, 8)),
         IntervalSet::interval(make_rat(5, 8), Rat(1))});
    SimpleFunction direct = f_pi(nu, mu, pi);
    SimpleFunction computed = derivative(nu, mu, quick(25, EngineConfig::SplitMode::best_only));
    CHECK(equal_ae(direct, computed, mu));
}

TEST_CASE("mass conservation and bounds on random absolutely continuous instances") {
    gen::Rng rng(7);
    for (int i = 0; i < 25; ++i) {
        MeasureSpec mu = MeasureSpec::lebesgue();
        std::vector<Rat> breaks = gen::cuts(rng, 2, 16);
        breaks.insert(breaks.begin(), Rat(0));
        breaks.push_back(Rat(1));
        std::vector<Poly> coeffs;
        for (std::size_t c = 0; c + 1 < breaks.size(); ++c)
            coeffs.push_back(Poly{gen::positive_rat(rng, 6, 6)});
        MeasureSpec nu = MeasureSpec::density(breaks, coeffs);
        Decomposition d = decompose(nu, mu, quick(20, EngineConfig::SplitMode::best_only));
        CHECK(integrate(d.density, mu) + d.singular_mass == nu.total()); // residual is zero
        CHECK(d.residual == Rat(0));
        CHECK(d.singular_mass >= 0);
        CHECK(d.singular_mass <= nu.total());
        for (const Rat& v : d.density.values()) CHECK(v >= 0);
    }
}

TEST_CASE("degenerate measures decompose sensibly") {
    // mu = 0: every bit of nu is singular
    Decomposition all_singular = decompose(MeasureSpec::lebesgue(), MeasureSpec::zero(), quick(8));
    CHECK(all_singular.singular_mass == Rat(1));
    CHECK(all_singular.residual == Rat(0));

    Decomposition nothing = decompose(MeasureSpec::zero(), MeasureSpec::zero(), quick(3));
    CHECK(nothing.singular_mass == Rat(0));

    // an atom sitting at the left edge of the interval still isolates
    Decomposition edge =
        decompose(MeasureSpec::atoms({{Rat(0), Rat(1)}}), MeasureSpec::lebesgue(), quick(30));
    CHECK(edge.singular_mass >= Rat(1));
    CHECK(edge.singular_cells.contains(Rat(0)));
}

TEST_CASE("singular threshold validation") {
    DecomposeConfig cfg = quick(5);
    cfg.singular_threshold = Rat(0);
    CHECK_THROWS_AS(decompose(MeasureSpec::lebesgue(), MeasureSpec::lebesgue(), cfg), Error);
    cfg.singular_threshold = Rat(2);
    CHECK_THROWS_AS(decompose(MeasureSpec::lebesgue(), MeasureSpec::lebesgue(), cfg), Error);
}
