#include <doctest.h>

#include "gwb/groupoid.hpp"
#include "gwb/random_gen.hpp"

using namespace gwb;

TEST_CASE("standard constructions satisfy the groupoid axioms") {
    CHECK(validate_groupoid(unit_groupoid(4)).ok());
    CHECK(validate_groupoid(pair_groupoid(3)).ok());
    CHECK(validate_groupoid(group_groupoid({{0, 1}, {1, 0}})).ok());
    CHECK(validate_groupoid(
              action_groupoid({{0, 1}, {1, 0}}, {{0, 1}, {1, 0}}))
              .ok());
}

TEST_CASE("pair groupoid composition collapses middle indices") {
    const int n = 4;
    auto g = pair_groupoid(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                CHECK(g.comp(pair_arrow(n, i, j), pair_arrow(n, j, k)) ==
                      pair_arrow(n, i, k));
    CHECK(g.inv(pair_arrow(n, 1, 2)) == pair_arrow(n, 2, 1));
    CHECK(g.src(pair_arrow(n, 1, 2)) == 2);
    CHECK(g.tgt(pair_arrow(n, 1, 2)) == 1);
}

TEST_CASE("tampered tables are caught with a witness") {
    auto g = pair_groupoid(2);
    SUBCASE("broken inverse") {
        g.set_inv(pair_arrow(2, 0, 1), pair_arrow(2, 0, 1));
        auto rep = validate_groupoid(g);
        REQUIRE_FALSE(rep.ok());
        bool found = false;
        for (const auto& issue : rep.issues)
            if (issue.axiom.find("inverse") != std::string::npos) found = true;
        CHECK(found);
    }
    SUBCASE("broken composition endpoint") {
        g.set_comp(pair_arrow(2, 0, 1), pair_arrow(2, 1, 0), pair_arrow(2, 1, 0));
        CHECK_FALSE(validate_groupoid(g).ok());
    }
    SUBCASE("dangling source id") {
        g.set_src(0, 7);
        auto rep = validate_groupoid(g);
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.issues[0].kind == ValidationIssue::Structural);
    }
}

TEST_CASE("group table that is not a group is rejected") {
    CHECK_THROWS_AS(group_groupoid({{0, 1}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("orbits of disjoint unions add up") {
    auto a = pair_groupoid(2);
    auto b = group_groupoid({{0, 1}, {1, 0}});
    auto u = disjoint_union(a, b);
    CHECK(validate_groupoid(*u).ok());
    CHECK(u->num_objects() == 3);
    CHECK(u->num_arrows() == 6);
    CHECK(u->num_orbits() == 2);
}

TEST_CASE("random groupoids validate across seeds") {
    for (unsigned seed = 0; seed < 40; ++seed) {
        std::mt19937 rng(seed);
        auto g = random_groupoid(rng, 10);
        CHECK(g->num_arrows() <= 10);
        CHECK(validate_groupoid(*g).ok());
    }
}
