// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned here on purpose; do not read them from flags.

#include "gwb/bimodule.hpp"
#include "gwb/correspondence.hpp"
#include "gwb/random_gen.hpp"

#include <chrono>
#include <cstdio>
#include <random>

using namespace gwb;

namespace {

constexpr double kEps = 1e-9;

struct Gate {
    int failures = 0;
    void report(int num, bool pass, const std::string& what, double secs) {
        std::printf("criterion %d: %s  %s  (%.2fs)\n", num, pass ? "PASS" : "FAIL",
                    what.c_str(), secs);
        if (!pass) ++failures;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::vector<Rational> random_rational_fn(int n, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-3, 3);
    std::vector<Rational> f(n);
    for (auto& v : f) v = Rational(d(rng));
    return f;
}

// criterion 1: pair groupoids give full matrix algebras M_n.
void criterion1(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (int n = 2; n <= 4; ++n) {
        auto g = std::make_shared<const FiniteGroupoid>(pair_groupoid(n));
        auto s = analyze_convolution_algebra(counting_measure(g), kEps);
        pass = pass && s.dimension == n * n && s.center_dimension == 1 &&
               s.blocks == std::vector<int>{n};
    }
    double secs = seconds_since(t0);
    pass = pass && secs < 1.0;
    gate.report(1, pass, "pair(n) -> M_n, n in {2,3,4}", secs);
}

// criterion 2: unit groupoids give commutative diagonal algebras.
void criterion2(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (int n = 1; n <= 5; ++n) {
        auto g = std::make_shared<const FiniteGroupoid>(unit_groupoid(n));
        auto s = analyze_convolution_algebra(counting_measure(g), kEps);
        pass = pass && s.dimension == n && s.center_dimension == n &&
               s.blocks == std::vector<int>(n, 1);
    }
    double secs = seconds_since(t0);
    pass = pass && secs < 1.0;
    gate.report(2, pass, "unit(n) -> C^n, n in {1..5}", secs);
}

// criterion 3: exact modular multiplicativity; J W*(G) J = commutant.
void criterion3(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (unsigned seed = 0; seed < 50 && pass; ++seed) {
        std::mt19937 rng(1000 + seed);
        auto mg = random_measured_groupoid(rng, 10);
        if (!validate_haar(mg).ok()) {
            pass = false;
            break;
        }
        auto delta = modular(mg).delta;
        const auto& g = *mg.g;
        for (ArrowId x = 0; x < g.num_arrows() && pass; ++x)
            for (ArrowId y = 0; y < g.num_arrows() && pass; ++y)
                if (g.composable(x, y) && delta[g.comp(x, y)] != delta[x] * delta[y])
                    pass = false;

        RegularRepresentation rep(mg);
        const int d = rep.dim();
        std::vector<MatrixC> gens;
        for (ArrowId x = 0; x < d; ++x) gens.push_back(rep.to_orthonormal(rep.piL_delta(x)));
        auto algebra = generate_algebra(gens, d, kEps);
        // Move each basis element to the delta frame, conjugate by J, and
        // return to the orthonormal frame.
        Eigen::VectorXd w(d);
        for (int i = 0; i < d; ++i) w(i) = rep.space_weights()[i];
        Eigen::VectorXd sq = w.cwiseSqrt();
        std::vector<MatrixC> jaj;
        for (const auto& a_on : algebra) {
            MatrixC a = sq.cwiseInverse().asDiagonal() * a_on * sq.asDiagonal();
            jaj.push_back(rep.to_orthonormal(rep.conjugate_by_J(a)));
        }
        pass = pass && same_span(commutant(algebra, d, kEps), jaj, kEps);
    }
    gate.report(3, pass, "Delta multiplicative (exact), JW*J = commutant, 50 random",
                seconds_since(t0));
}

// criterion 4: the identity functor reproduces the standard form.
void criterion4(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    for (unsigned seed = 0; seed < 20 && pass; ++seed) {
        std::mt19937 rng(2000 + seed);
        auto mg = random_measured_groupoid(rng, 10);
        auto c = standard_correspondence(mg);
        RegularRepresentation rep(mg);
        const int d = rep.dim();
        if (c.dim() != d) {
            pass = false;
            break;
        }
        MatrixC perm = MatrixC::Zero(d, d); // the relabeling (t(h), h) <- h
        for (ArrowId h = 0; h < d; ++h) perm(c.index_of(mg.g->tgt(h), h), h) = 1.0;
        for (ArrowId x = 0; x < d; ++x) {
            worst = std::max(worst, (c.pi_lambda_delta(x) * perm -
                                     perm * rep.piL_delta(x))
                                        .cwiseAbs()
                                        .maxCoeff());
            worst = std::max(worst, (c.pi_rho_delta(x) * perm -
                                     perm * rep.piR_delta(x))
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        auto cert = fusion_intertwiner(identity_functor(mg.g), identity_functor(mg.g),
                                       mg, mg, mg, kEps);
        pass = pass && cert.passed();
        worst = std::max({worst, cert.isometry_residual, cert.intertwining_residual});
    }
    pass = pass && worst < kEps;
    char buf[96];
    std::snprintf(buf, sizeof buf, "L^2(id) = L^2(G), max residual %.2e", worst);
    gate.report(4, pass, buf, seconds_since(t0));
}

// criterion 5: fusion of 50 random functor chains.
void criterion5(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    for (unsigned seed = 0; seed < 50 && pass; ++seed) {
        std::mt19937 rng(3000 + seed);
        auto chain = random_functor_chain(rng, 8);
        auto cert = fusion_intertwiner(chain.phi, chain.psi, chain.mg, chain.mh,
                                       chain.mk, kEps);
        pass = pass && cert.passed();
        worst = std::max({worst, cert.isometry_residual, cert.intertwining_residual});
    }
    double secs = seconds_since(t0);
    pass = pass && worst < kEps && secs < 30.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "50 fusion chains, max residual %.2e", worst);
    gate.report(5, pass, buf, secs);
}

// criterion 6: 50 random principal bibundle chains; canonical cases exact.
void criterion6(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    for (unsigned seed = 0; seed < 50 && pass; ++seed) {
        std::mt19937 rng(4000 + seed);
        auto chain = random_bibundle_chain(rng, 6);
        auto cert = bimodule_intertwiner(chain.b1, chain.b2, chain.mg, chain.mh,
                                         chain.mk, kEps);
        pass = pass && cert.passed() && cert.well_defined;
        worst = std::max({worst, cert.isometry_residual, cert.linearity_residual});
    }
    // Canonical-unit cases, exact in rational arithmetic.
    for (unsigned seed = 0; seed < 10 && pass; ++seed) {
        std::mt19937 rng(4500 + seed);
        auto mg = random_measured_groupoid(rng, 8);
        auto b = canonical_bibundle(mg.g);
        auto mu = induced_measure(b, mg);
        auto phi = random_rational_fn(mg.g->num_arrows(), rng);
        auto psi = random_rational_fn(mg.g->num_arrows(), rng);
        auto f = random_rational_fn(mg.g->num_arrows(), rng);
        pass = pass &&
               inner_product_exact(b, mu, phi, psi) ==
                   convolve_fn<Rational>(mg, involute_fn<Rational>(*mg.g, phi), psi) &&
               left_action_exact(b, mg, f, phi) == convolve_fn<Rational>(mg, f, phi) &&
               right_action_exact(b, mg, f, phi) == convolve_fn<Rational>(mg, phi, f);
        if (mg.g->num_arrows() <= 6) {
            auto cert = bimodule_intertwiner(b, b, mg, mg, mg, kEps);
            pass = pass && cert.passed() && cert.well_defined;
        }
    }
    pass = pass && worst < kEps;
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "50 bimodule chains + exact canonical cases, max residual %.2e",
                  worst);
    gate.report(6, pass, buf, seconds_since(t0));
}

// criterion 7: Morita preservation end to end.
void criterion7(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    auto point = std::make_shared<const FiniteGroupoid>(unit_groupoid(1));
    auto m_point = counting_measure(point);
    for (int n = 2; n <= 4 && pass; ++n) {
        auto pg = std::make_shared<const FiniteGroupoid>(pair_groupoid(n));
        auto mg = counting_measure(pg);
        auto v = morita_decide(pg, point, kEps);
        pass = v.equivalent && v.witness.has_value() &&
               validate_bibundle(*v.witness, true).ok() &&
               validate_bibundle(reverse_bibundle(*v.witness), true).ok();
        if (!pass) break;
        auto ex = build_bimodule(*v.witness, mg, m_point, kEps);
        auto ex_rev = build_bimodule(reverse_bibundle(*v.witness), m_point, mg, kEps);
        auto composite = interior_tensor(ex, ex_rev, kEps);
        auto canonical = build_bimodule(canonical_bibundle(pg), mg, mg, kEps);
        pass = bimodule_unitarily_equivalent(composite, canonical, kEps).has_value();
    }
    auto z2 = std::make_shared<const FiniteGroupoid>(group_groupoid({{0, 1}, {1, 0}}));
    auto neg = morita_decide(z2, point, kEps);
    pass = pass && !neg.equivalent && neg.blocks_left == std::vector<int>{1, 1} &&
           neg.blocks_right == std::vector<int>{1};
    gate.report(7, pass,
                "pair(n) ~ point with E(X) (x) E(X^op) = canonical; Z/2 vs point "
                "negative",
                seconds_since(t0));
}

// criterion 8: gram positivity and the module Cauchy-Schwarz bound.
void criterion8(Gate& gate) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    for (unsigned seed = 0; seed < 100 && pass; ++seed) {
        std::mt19937 rng(5000 + seed);
        auto chain = random_bibundle_chain(rng, 6);
        auto e = build_bimodule(chain.b1, chain.mg, chain.mh, kEps);
        double mn = min_eigenvalue(e.operator_gram());
        worst = std::min(worst, mn);
        pass = pass && mn >= -kEps;

        // <f.phi, f.phi> <= ||f||^2 <phi, phi> as operators on L^2(H).
        RegularRepresentation rep_g(chain.mg), rep_h(chain.mh);
        std::uniform_real_distribution<double> d(-1, 1);
        AlgebraElement f;
        f.coeff = VectorC::Zero(chain.mg.g->num_arrows());
        for (int i = 0; i < f.coeff.size(); ++i) f.coeff(i) = Complex(d(rng), d(rng));
        VectorC phi = VectorC::Zero(e.dim);
        for (int i = 0; i < e.dim; ++i) phi(i) = Complex(d(rng), d(rng));
        Eigen::JacobiSVD<MatrixC> svd(rep_g.to_orthonormal(rep_g.piL(f)));
        double fnorm = svd.singularValues()(0);
        VectorC fphi = e.left_of(f) * phi;
        AlgebraElement lhs, rhs;
        lhs.coeff = e.ip_of(fphi, fphi);
        rhs.coeff = e.ip_of(phi, phi);
        MatrixC gap = fnorm * fnorm * rep_h.to_orthonormal(rep_h.piL(rhs)) -
                      rep_h.to_orthonormal(rep_h.piL(lhs));
        double scale = std::max(1.0, gap.cwiseAbs().maxCoeff());
        double mg2 = min_eigenvalue(gap) / scale;
        worst = std::min(worst, mg2);
        pass = pass && mg2 >= -kEps;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "100 gram operators and 100 Cauchy-Schwarz samples, worst %.2e",
                  worst);
    gate.report(8, pass, buf, seconds_since(t0));
}

} // namespace

int main() {
    Gate gate;
    criterion1(gate);
    criterion2(gate);
    criterion3(gate);
    criterion4(gate);
    criterion5(gate);
    criterion6(gate);
    criterion7(gate);
    criterion8(gate);
    if (gate.failures) {
        std::printf("%d criterion(s) failed\n", gate.failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
