#ifndef GWB_RANDOM_GEN_HPP
#define GWB_RANDOM_GEN_HPP

#include "gwb/bibundle.hpp"
#include "gwb/bimodule.hpp"

#include <memory>
#include <random>

namespace gwb {

/// Disjoint union with objects and arrows of `b` appended after `a`.
std::shared_ptr<const FiniteGroupoid> disjoint_union(const FiniteGroupoid& a,
                                                     const FiniteGroupoid& b);

/// Random groupoid assembled from unit, pair, cyclic-group, and flip-action
/// components until the arrow budget runs out. Deterministic per rng state.
std::shared_ptr<const FiniteGroupoid> random_groupoid(std::mt19937& rng,
                                                      int max_arrows);

/// Random positive rational with numerator and denominator in [1, 5].
Rational random_positive_rational(std::mt19937& rng);

/// Random left-invariant Haar system: weights constant along source fibers.
HaarSystem random_haar(const FiniteGroupoid& g, std::mt19937& rng);

/// Random fully supported measured groupoid on a random groupoid.
MeasuredGroupoid random_measured_groupoid(std::mt19937& rng, int max_arrows);

/// Random measure structure over an existing groupoid.
MeasuredGroupoid random_measure_on(std::shared_ptr<const FiniteGroupoid> g,
                                   std::mt19937& rng);

/// All homomorphisms between two small group multiplication tables.
std::vector<std::vector<int>> all_homomorphisms(
    const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b);

/// Random functor dom -> cod, built per connected component from a random
/// anchor object, a random isotropy homomorphism, and random conjugating
/// arrows. Always succeeds (the trivial homomorphism is always available).
GroupoidFunctor random_functor(std::shared_ptr<const FiniteGroupoid> dom,
                               std::shared_ptr<const FiniteGroupoid> cod,
                               std::mt19937& rng);

/// A composable pair of functors with measures on all three groupoids,
/// sized for fusion experiments.
struct FunctorChain {
    GroupoidFunctor phi; // G -> H
    GroupoidFunctor psi; // H -> K
    MeasuredGroupoid mg, mh, mk;
};
FunctorChain random_functor_chain(std::mt19937& rng, int max_arrows);

/// A composable pair of left principal bibundles (functor bibundles and
/// occasionally canonical ones) with measures, capped so the algebraic
/// tensor product stays small.
struct BibundleChain {
    Bibundle b1; // G-H
    Bibundle b2; // H-K
    MeasuredGroupoid mg, mh, mk;
};
BibundleChain random_bibundle_chain(std::mt19937& rng, int max_arrows);

} // namespace gwb

#endif
