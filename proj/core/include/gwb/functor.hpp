#ifndef GWB_FUNCTOR_HPP
#define GWB_FUNCTOR_HPP

#include "gwb/groupoid.hpp"

#include <memory>
#include <optional>

namespace gwb {

/// A strict functor between finite groupoids. phi0 is determined by phi1 on
/// units but is stored for direct lookup.
struct GroupoidFunctor {
    std::shared_ptr<const FiniteGroupoid> dom;
    std::shared_ptr<const FiniteGroupoid> cod;
    std::vector<ObjectId> phi0; // objects(dom) -> objects(cod)
    std::vector<ArrowId> phi1;  // arrows(dom) -> arrows(cod)
};

GroupoidFunctor identity_functor(std::shared_ptr<const FiniteGroupoid> g);

/// Functor from the arrow table alone; derives phi0 from units.
GroupoidFunctor functor_from_arrow_map(std::shared_ptr<const FiniteGroupoid> dom,
                                       std::shared_ptr<const FiniteGroupoid> cod,
                                       std::vector<ArrowId> phi1);

ValidationReport validate_functor(const GroupoidFunctor& f);

/// g after f; requires f.cod == g.dom (same underlying tables).
GroupoidFunctor compose_functors(const GroupoidFunctor& g, const GroupoidFunctor& f);

/// Natural isomorphism eta: f => g, with components
/// eta(u): f.phi0(u) -> g.phi0(u) in the codomain.
struct NaturalIsomorphism {
    std::vector<ArrowId> eta; // objects(dom) -> arrows(cod)
};

ValidationReport validate_natural_isomorphism(const GroupoidFunctor& f,
                                              const GroupoidFunctor& g,
                                              const NaturalIsomorphism& n);

/// Exhaustive witness search, object by object, pruning by naturality
/// against previously fixed components.
std::optional<NaturalIsomorphism> naturally_isomorphic(const GroupoidFunctor& f,
                                                       const GroupoidFunctor& g);

} // namespace gwb

#endif
