#include <doctest.h>

#include "gwb/correspondence.hpp"
#include "gwb/random_gen.hpp"

using namespace gwb;

namespace {

TwoSidedSpace regular_space(const MeasuredGroupoid& mg) {
    RegularRepresentation rep(mg);
    TwoSidedSpace s;
    s.dim = rep.dim();
    s.gram = MatrixC::Zero(s.dim, s.dim);
    for (int i = 0; i < s.dim; ++i) s.gram(i, i) = rep.space_weights()[i];
    s.left = rep.piL_generators();
    s.right = rep.piR_generators();
    return s;
}

} // namespace

TEST_CASE("the standard correspondence is L^2(G) with pi_L and pi_R") {
    for (unsigned seed = 0; seed < 12; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 9);
        auto c = standard_correspondence(mg);
        REQUIRE(c.dim() == mg.g->num_arrows());
        auto u = unitarily_equivalent(c.as_space(), regular_space(mg));
        REQUIRE(u.has_value());
        // For the identity functor the relabeling (t(h), h) -> h is itself
        // an exact intertwiner, so the actions agree entry for entry.
        RegularRepresentation rep(mg);
        for (ArrowId x = 0; x < mg.g->num_arrows(); ++x) {
            MatrixC perm = MatrixC::Zero(c.dim(), c.dim());
            for (ArrowId h = 0; h < mg.g->num_arrows(); ++h)
                perm(c.index_of(mg.g->tgt(h), h), h) = 1.0;
            CHECK((c.pi_lambda_delta(x) * perm - perm * rep.piL_delta(x))
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
            CHECK((c.pi_rho_delta(x) * perm - perm * rep.piR_delta(x))
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("identity-identity fusion has zero residual") {
    std::mt19937 rng(5);
    auto mg = random_measured_groupoid(rng, 8);
    auto id = identity_functor(mg.g);
    auto cert = fusion_intertwiner(id, id, mg, mg, mg);
    CHECK(cert.passed());
    CHECK(cert.isometry_residual < 1e-9);
    CHECK(cert.intertwining_residual < 1e-9);
}

TEST_CASE("fusion form is positive semidefinite") {
    for (unsigned seed = 20; seed < 32; ++seed) {
        std::mt19937 rng(seed);
        auto chain = random_functor_chain(rng, 8);
        auto c1 = build_correspondence(chain.phi, chain.mg, chain.mh);
        auto c2 = build_correspondence(chain.psi, chain.mh, chain.mk);
        auto r = relative_tensor(c1, c2);
        CHECK(r.min_form_eigenvalue > -1e-9);
        CHECK(r.space.dim <= c1.dim() * c2.dim());
    }
}

TEST_CASE("fusion intertwiner certifies random chains") {
    for (unsigned seed = 50; seed < 62; ++seed) {
        std::mt19937 rng(seed);
        auto chain = random_functor_chain(rng, 8);
        auto cert = fusion_intertwiner(chain.phi, chain.psi, chain.mg, chain.mh,
                                       chain.mk);
        CHECK(cert.passed());
        CHECK(cert.isometry_residual < 1e-9);
        CHECK(cert.intertwining_residual < 1e-9);
        // The descended map is unitary between the fusion quotient and the
        // composite correspondence modulo its kernel.
        const auto& u = cert.unitary;
        CHECK((u.adjoint() * u -
               MatrixC::Identity(u.cols(), u.cols()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-8);
    }
}

TEST_CASE("the algebra-valued inner product is adjoint to the left action") {
    // (f, <psi1, psi2>_lambda)_{L^2(H)} = (psi1, pi_lambda(Jf) psi2), with J
    // the modular conjugation of the middle algebra.
    for (unsigned seed = 110; seed < 122; ++seed) {
        std::mt19937 rng(seed);
        auto mh = random_measured_groupoid(rng, 7);
        auto mk = random_measured_groupoid(rng, 7);
        auto psi = random_functor(mh.g, mk.g, rng);
        auto c = build_correspondence(psi, mh, mk);
        RegularRepresentation rep(mh);
        std::uniform_real_distribution<double> d(-1, 1);
        VectorC p1(c.dim()), p2(c.dim()), f(rep.dim());
        for (int i = 0; i < c.dim(); ++i) {
            p1(i) = Complex(d(rng), d(rng));
            p2(i) = Complex(d(rng), d(rng));
        }
        for (int i = 0; i < rep.dim(); ++i) f(i) = Complex(d(rng), d(rng));
        auto ipv = inner_product_valued(p1, p2, c);
        AlgebraElement jf{rep.J_matrix() * f.conjugate()};
        Complex lhs = rep.inner(f, ipv.coeff);
        Complex rhs = c.inner(p1, c.pi_lambda(jf) * p2);
        CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("fusing with the standard correspondence on the right changes nothing") {
    for (unsigned seed = 130; seed < 136; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 7);
        auto mh = random_measured_groupoid(rng, 7);
        auto phi = random_functor(mg.g, mh.g, rng);
        auto c = build_correspondence(phi, mg, mh);
        auto r = relative_tensor(c, standard_correspondence(mh));
        CHECK(unitarily_equivalent(r.space, c.as_space()).has_value());
    }
}

TEST_CASE("the inclusion of the trivial groupoid into Z/2 induces the regular module") {
    auto pt = std::make_shared<const FiniteGroupoid>(unit_groupoid(1));
    auto z2 = std::make_shared<const FiniteGroupoid>(group_groupoid({{0, 1}, {1, 0}}));
    auto mpt = counting_measure(pt);
    auto mz2 = counting_measure(z2);
    auto c = build_correspondence(functor_from_arrow_map(pt, z2, {0}), mpt, mz2);
    REQUIRE(c.dim() == 2);
    // The relabeling (0, h) -> h matches the right action with the right
    // regular representation of Z/2 entry for entry.
    RegularRepresentation rep(mz2);
    MatrixC perm = MatrixC::Zero(2, 2);
    for (ArrowId h = 0; h < 2; ++h) perm(c.index_of(0, h), h) = 1.0;
    for (ArrowId h = 0; h < 2; ++h)
        CHECK((c.pi_rho_delta(h) * perm - perm * rep.piR_delta(h))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
}

TEST_CASE("the constant functor to the point gives a module over the scalars") {
    auto p2 = std::make_shared<const FiniteGroupoid>(pair_groupoid(2));
    auto pt = std::make_shared<const FiniteGroupoid>(unit_groupoid(1));
    auto c = build_correspondence(functor_from_arrow_map(p2, pt, {0, 0, 0, 0}),
                                  counting_measure(p2), counting_measure(pt));
    REQUIRE(c.dim() == 2); // one basis vector per object upstairs
    CHECK((c.pi_rho_delta(0) - MatrixC::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fusion respects natural isomorphism classes") {
    // Composing with the identity on either side reproduces the original
    // correspondence up to unitary equivalence.
    for (unsigned seed = 70; seed < 76; ++seed) {
        std::mt19937 rng(seed);
        auto mg = random_measured_groupoid(rng, 7);
        auto mh = random_measured_groupoid(rng, 7);
        auto phi = random_functor(mg.g, mh.g, rng);
        auto c = build_correspondence(phi, mg, mh);
        auto r = relative_tensor(build_correspondence(identity_functor(mg.g), mg, mg),
                                 build_correspondence(phi, mg, mh));
        auto u = unitarily_equivalent(r.space, c.as_space());
        CHECK(u.has_value());
    }
}
