#include <doctest.h>

#include "gwb/bimodule.hpp"
#include "gwb/random_gen.hpp"

using namespace gwb;

namespace {

std::vector<Rational> random_rational_fn(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    std::vector<Rational> f(n);
    for (auto& v : f) v = Rational(d(rng));
    return f;
}

// The pair(n)-point bibundle: carrier = arrows of pair(n) out of object 0.
Bibundle pair_point_bibundle(int n) {
    auto pt = std::make_shared<const FiniteGroupoid>(unit_groupoid(1));
    auto pn = std::make_shared<const FiniteGroupoid>(pair_groupoid(n));
    return functor_bibundle(functor_from_arrow_map(pt, pn, {pair_arrow(n, 0, 0)}));
}

} // namespace

TEST_CASE("the canonical bibundle yields the canonical bimodule, exactly") {
    // On E(G_1) the module structure collapses to the convolution algebra:
    // <phi, psi> = phi^* * psi, f . phi = f * phi, phi . g = phi * g, as
    // exact identities of rational-valued functions.
    for (unsigned seed = 0; seed < 15; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 9);
        auto b = canonical_bibundle(mg.g);
        auto mu = induced_measure(b, mg);
        const int n = mg.g->num_arrows();
        auto phi = random_rational_fn(n, rng);
        auto psi = random_rational_fn(n, rng);
        auto f = random_rational_fn(n, rng);
        CHECK(inner_product_exact(b, mu, phi, psi) ==
              convolve_fn<Rational>(mg, involute_fn<Rational>(*mg.g, phi), psi));
        CHECK(left_action_exact(b, mg, f, phi) == convolve_fn<Rational>(mg, f, phi));
        CHECK(right_action_exact(b, mg, f, phi) == convolve_fn<Rational>(mg, phi, f));
    }
}

TEST_CASE("E of the pair-point bibundle is C^n with the full matrix left action") {
    for (int n : {2, 3}) {
        auto b = pair_point_bibundle(n);
        auto mg = counting_measure(b.left_groupoid);
        auto mpt = counting_measure(b.right_groupoid);
        auto e = build_bimodule(b, mg, mpt);
        REQUIRE(e.dim == n);
        // The left delta generators are the n^2 matrix units.
        MatrixSpan span;
        for (const auto& m : e.left) span.add(m);
        CHECK(span.dim() == n * n);
        // The right algebra is the scalars: the point's unit acts as 1.
        CHECK((e.right[0] - MatrixC::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
        // <delta_i, delta_j> = mu(i) delta_{ij} over the one-arrow groupoid.
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(e.ip[i][j](0) - Complex(i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("the self-bimodule of a unit groupoid is diagonal") {
    auto u = std::make_shared<const FiniteGroupoid>(unit_groupoid(3));
    auto mu = counting_measure(u);
    auto e = build_bimodule(canonical_bibundle(u), mu, mu);
    REQUIRE(e.dim == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(e.scalar_gram(i, j)) < 1e-12);
    CHECK(min_eigenvalue(e.scalar_gram) > 0.0);
}

TEST_CASE("bimodule gram operators are positive semidefinite") {
    for (unsigned seed = 20; seed < 35; ++seed) {
        std::mt19937 rng(seed);
        auto chain = random_bibundle_chain(rng, 6);
        auto e = build_bimodule(chain.b1, chain.mg, chain.mh);
        CHECK(min_eigenvalue(e.operator_gram()) > -1e-9);
        CHECK(min_eigenvalue(e.scalar_gram) > -1e-9);
    }
}

TEST_CASE("interior tensor with the canonical bimodule changes nothing") {
    for (unsigned seed = 40; seed < 48; ++seed) {
        std::mt19937 rng(seed);
        auto h = random_groupoid(rng, 6);
        auto g = random_groupoid(rng, 6);
        auto phi = random_functor(h, g, rng);
        auto mg = random_measure_on(g, rng);
        auto mh = random_measure_on(h, rng);
        auto e = build_bimodule(functor_bibundle(phi), mg, mh);
        auto can = build_bimodule(canonical_bibundle(h), mh, mh);
        auto t = interior_tensor(e, can);
        CHECK(t.dim <= e.dim * can.dim);
        CHECK(bimodule_unitarily_equivalent(t, e).has_value());
    }
}

TEST_CASE("the pair-point linking bimodules compose to the full matrix algebra") {
    auto b = pair_point_bibundle(2);
    auto rev = reverse_bibundle(b);
    auto mg = counting_measure(b.left_groupoid);
    auto mpt = counting_measure(b.right_groupoid);
    auto cert = bimodule_intertwiner(b, rev, mg, mpt, mg);
    CHECK(cert.passed());
    CHECK(cert.isometry_residual < 1e-9);
    CHECK(cert.linearity_residual < 1e-9);
    // E(X) (x) E(X^op) is the canonical self-bimodule of pair(2).
    auto t = interior_tensor(build_bimodule(b, mg, mpt), build_bimodule(rev, mpt, mg));
    auto can = build_bimodule(canonical_bibundle(b.left_groupoid), mg, mg);
    CHECK(bimodule_unitarily_equivalent(t, can).has_value());
}

TEST_CASE("bimodule intertwiner certifies random principal chains") {
    for (unsigned seed = 60; seed < 72; ++seed) {
        std::mt19937 rng(seed);
        auto chain = random_bibundle_chain(rng, 6);
        auto cert = bimodule_intertwiner(chain.b1, chain.b2, chain.mg, chain.mh,
                                         chain.mk);
        CHECK(cert.passed());
        CHECK(cert.well_defined);
        CHECK(cert.isometry_residual < 1e-9);
        CHECK(cert.linearity_residual < 1e-9);
    }
}

TEST_CASE("isotropy groups and their isomorphisms") {
    auto z2 = group_groupoid({{0, 1}, {1, 0}});
    auto z3 = group_groupoid({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
    auto iso2 = isotropy_group(z2, 0);
    auto iso3 = isotropy_group(z3, 0);
    CHECK(iso2.elements.size() == 2);
    CHECK(iso3.elements.size() == 3);
    CHECK(group_isomorphism(iso2.table, iso2.table).has_value());
    CHECK_FALSE(group_isomorphism(iso2.table, iso3.table).has_value());
    auto p = pair_groupoid(3);
    CHECK(isotropy_group(p, 1).elements.size() == 1);
}

TEST_CASE("Morita decision on standard pairs") {
    auto mk = [](FiniteGroupoid g) {
        return std::make_shared<const FiniteGroupoid>(std::move(g));
    };
    auto pair2 = mk(pair_groupoid(2));
    auto pair3 = mk(pair_groupoid(3));
    auto point = mk(unit_groupoid(1));
    auto z2 = mk(group_groupoid({{0, 1}, {1, 0}}));
    auto z3 = mk(group_groupoid({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}));

    SUBCASE("pair groupoids are equivalent to the point and to each other") {
        auto v = morita_decide(pair3, point);
        REQUIRE(v.equivalent);
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->carrier_size == 3);
        CHECK(validate_bibundle(*v.witness, true).ok());
        CHECK(validate_bibundle(reverse_bibundle(*v.witness), true).ok());
        auto w = morita_decide(pair2, pair3);
        CHECK(w.equivalent);
        CHECK(w.witness->carrier_size == 6);
        CHECK(validate_bibundle(*w.witness, true).ok());
    }
    SUBCASE("groups are equivalent iff isomorphic") {
        CHECK(morita_decide(z2, z2).equivalent);
        CHECK_FALSE(morita_decide(z2, z3).equivalent);
        auto v = morita_decide(z2, point);
        CHECK_FALSE(v.equivalent);
        CHECK(v.blocks_left == std::vector<int>{1, 1});
        CHECK(v.blocks_right == std::vector<int>{1});
    }
    SUBCASE("orbit count mismatch is an obstruction") {
        auto two_points = mk(unit_groupoid(2));
        auto v = morita_decide(two_points, point);
        CHECK_FALSE(v.equivalent);
        CHECK(v.obstruction.find("orbit counts differ") != std::string::npos);
    }
}

TEST_CASE("random Morita witnesses agree with the random construction") {
    // A functor bibundle of an equivalence-producing functor: a random
    // groupoid is always Morita equivalent to itself, with blocks equal.
    for (unsigned seed = 90; seed < 98; ++seed) {
        std::mt19937 rng(seed);
        auto g = random_groupoid(rng, 8);
        auto v = morita_decide(g, g);
        REQUIRE(v.equivalent);
        CHECK(v.blocks_left == v.blocks_right);
        CHECK(validate_bibundle(*v.witness, true).ok());
        CHECK(validate_bibundle(reverse_bibundle(*v.witness), true).ok());
    }
}
