#ifndef GWB_BIBUNDLE_HPP
#define GWB_BIBUNDLE_HPP

#include "gwb/functor.hpp"
#include "gwb/measure.hpp"

#include <memory>
#include <optional>

namespace gwb {

/// A finite G-H bibundle: carrier M with anchors tau: M -> G_0,
/// sigma: M -> H_0, a left G-action defined iff src(x) = tau(m) (moving
/// tau(m) to tgt(x)), and a right H-action defined iff tgt(h) = sigma(m)
/// (moving sigma(m) to src(h)). On finite sets, "surjective submersion"
/// reads as "surjective", "proper" is vacuous, "diffeomorphism" is
/// "bijection".
struct Bibundle {
    std::shared_ptr<const FiniteGroupoid> left_groupoid;  // G
    std::shared_ptr<const FiniteGroupoid> right_groupoid; // H
    int carrier_size = 0;
    std::vector<ObjectId> tau;   // per carrier point
    std::vector<ObjectId> sigma; // per carrier point
    std::vector<int> lact;       // (x * carrier + m) -> point, -1 undefined
    std::vector<int> ract;       // (m * |H_1| + h) -> point, -1 undefined

    int lact_raw(ArrowId x, int m) const {
        return lact[static_cast<size_t>(x) * carrier_size + m];
    }
    int ract_raw(int m, ArrowId h) const {
        return ract[static_cast<size_t>(m) * right_groupoid->num_arrows() + h];
    }
    int act_left(ArrowId x, int m) const {
        int r = lact_raw(x, m);
        if (r < 0) throw std::invalid_argument("left action undefined");
        return r;
    }
    int act_right(int m, ArrowId h) const {
        int r = ract_raw(m, h);
        if (r < 0) throw std::invalid_argument("right action undefined");
        return r;
    }
    void set_lact(ArrowId x, int m, int out) {
        lact[static_cast<size_t>(x) * carrier_size + m] = out;
    }
    void set_ract(int m, ArrowId h, int out) {
        ract[static_cast<size_t>(m) * right_groupoid->num_arrows() + h] = out;
    }
    std::vector<int> sigma_fiber(ObjectId r) const {
        std::vector<int> out;
        for (int m = 0; m < carrier_size; ++m)
            if (sigma[m] == r) out.push_back(m);
        return out;
    }
};

/// Allocates the action tables (all undefined) for the given shapes.
Bibundle make_bibundle(std::shared_ptr<const FiniteGroupoid> g,
                       std::shared_ptr<const FiniteGroupoid> h, int carrier);

/// Action axioms; with check_principal also verifies that
/// (x, m) -> (x.m, m) is a bijection onto M x_{H_0} M (equivalently the
/// G-action is free and transitive along sigma-fibers).
ValidationReport validate_bibundle(const Bibundle& b, bool check_principal);

/// The canonical G-G bibundle: M = arrows, tau = tgt, sigma = src, actions
/// by composition.
Bibundle canonical_bibundle(std::shared_ptr<const FiniteGroupoid> g);

/// The bibundle of a functor Phi: H -> G, always left principal:
/// carrier {(g, v) : s(g) = Phi_0(v)}, tau = tgt(g), sigma = v,
/// x.(g,v) = (xg, v), (g,v).h = (g Phi_1(h), s(h)).
Bibundle functor_bibundle(const GroupoidFunctor& phi);

/// Same carrier with the roles of G and H swapped through inverses.
Bibundle reverse_bibundle(const Bibundle& b);

/// Induced measures mu^r on sigma-fibers from the Haar system of G:
/// mu^r(m) = sum { w(x) : x in G^{tau(m0)}, x^{-1}.m0 = m } for any
/// basepoint m0 in sigma^{-1}(r). Exact rationals.
struct InducedMeasureSystem {
    std::vector<Rational> mu; // per carrier point, the value of mu^{sigma(m)}(m)
};

/// Throws std::invalid_argument when a sigma-fiber is empty and
/// std::runtime_error when basepoint independence or H-equivariance fails
/// (both are impossible on a left principal bibundle).
InducedMeasureSystem induced_measure(const Bibundle& b, const MeasuredGroupoid& mg);

/// Orbit space of {(m, n) : sigma(m) = tau(n)} under h.(m,n) = (m h, h^{-1} n),
/// with canonical lexicographically-least representatives.
Bibundle bibundle_tensor(const Bibundle& b1, const Bibundle& b2);

/// Equivariant bijection search, orbit-anchored with backtracking.
std::optional<std::vector<int>> bibundle_isomorphic(const Bibundle& b1,
                                                    const Bibundle& b2);

} // namespace gwb

#endif
