#include <doctest.h>

#include "gwb/measure.hpp"
#include "gwb/random_gen.hpp"

using namespace gwb;

TEST_CASE("counting measure is a valid Haar system with trivial modular data") {
    auto g = std::make_shared<const FiniteGroupoid>(pair_groupoid(3));
    auto mg = counting_measure(g);
    CHECK(validate_haar(mg).ok());
    for (const auto& d : modular(mg).delta) CHECK(d == Rational(1));
}

TEST_CASE("random Haar systems are left invariant") {
    for (unsigned seed = 0; seed < 50; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 10);
        CHECK(validate_haar(mg).ok());
        // Left invariance stated directly: weight(xy) = weight(y).
        const auto& g = *mg.g;
        for (ArrowId x = 0; x < g.num_arrows(); ++x)
            for (ArrowId y = 0; y < g.num_arrows(); ++y)
                if (g.composable(x, y))
                    CHECK(mg.haar.weight[g.comp(x, y)] == mg.haar.weight[y]);
    }
}

TEST_CASE("weights varying along a source fiber are rejected") {
    auto g = std::make_shared<const FiniteGroupoid>(pair_groupoid(2));
    MeasuredGroupoid mg = counting_measure(g);
    // Arrows (0,1) and (1,1) share the source 1 but get different weights.
    mg.haar.weight[pair_arrow(2, 0, 1)] = Rational(2);
    mg.haar.weight[pair_arrow(2, 1, 1)] = Rational(1);
    CHECK_FALSE(validate_haar(mg).ok());
}

TEST_CASE("nonpositive weights are rejected") {
    auto g = std::make_shared<const FiniteGroupoid>(unit_groupoid(2));
    auto mg = counting_measure(g);
    mg.haar.weight[0] = Rational(0);
    CHECK_FALSE(validate_haar(mg).ok());
}

TEST_CASE("modular homomorphism is multiplicative, exactly") {
    for (unsigned seed = 100; seed < 130; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 10);
        auto delta = modular(mg).delta;
        const auto& g = *mg.g;
        for (ArrowId x = 0; x < g.num_arrows(); ++x) {
            CHECK(delta[x] * delta[g.inv(x)] == Rational(1));
            for (ArrowId y = 0; y < g.num_arrows(); ++y)
                if (g.composable(x, y))
                    CHECK(delta[g.comp(x, y)] == delta[x] * delta[y]);
        }
    }
}

TEST_CASE("modular values on a weighted pair groupoid") {
    // Delta((i,j)) = base(i) w(i,j) / (base(j) w(j,i)) with w(x) = c(src x):
    // for c = (1, 3), base = (1, 2): Delta((0,1)) = (1*3)/(2*1) = 3/2.
    auto g = std::make_shared<const FiniteGroupoid>(pair_groupoid(2));
    MeasuredGroupoid mg;
    mg.g = g;
    std::vector<Rational> c = {Rational(1), Rational(3)};
    mg.haar.weight.resize(4);
    for (ArrowId x = 0; x < 4; ++x) mg.haar.weight[x] = c[g->src(x)];
    mg.base = {Rational(1), Rational(2)};
    REQUIRE(validate_haar(mg).ok());
    auto delta = modular(mg).delta;
    CHECK(delta[pair_arrow(2, 0, 1)] == Rational(3, 2));
    CHECK(delta[pair_arrow(2, 1, 0)] == Rational(2, 3));
    CHECK(delta[pair_arrow(2, 0, 0)] == Rational(1));
}

TEST_CASE("pushforward masses are the exact base masses of the preimage orbits") {
    auto p2 = std::make_shared<const FiniteGroupoid>(pair_groupoid(2));
    auto pt = std::make_shared<const FiniteGroupoid>(unit_groupoid(1));
    auto f = functor_from_arrow_map(p2, pt, {0, 0, 0, 0});
    auto rep = measured_functor_check(f, counting_measure(p2), counting_measure(pt));
    CHECK(rep.validation.ok());
    REQUIRE(rep.pushforward_mass.size() == 1);
    CHECK(rep.pushforward_mass[0] == Rational(2));
    CHECK(rep.codomain_mass[0] == Rational(1));
}

TEST_CASE("measured functor check passes on random measured functors") {
    for (unsigned seed = 0; seed < 20; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 8);
        auto mh = random_measured_groupoid(rng, 8);
        auto f = random_functor(mg.g, mh.g, rng);
        auto rep = measured_functor_check(f, mg, mh);
        CHECK(rep.validation.ok());
    }
}
