#ifndef GWB_MEASURE_HPP
#define GWB_MEASURE_HPP

#include "gwb/functor.hpp"
#include "gwb/groupoid.hpp"
#include "gwb/rational.hpp"

#include <memory>

namespace gwb {

/// Strictly positive arrow weights; the restriction to the t-fiber G^u is
/// the Haar measure nu^u. Left invariance: weight(xy) = weight(y) for every
/// composable pair, which on a finite groupoid forces the weight to factor
/// through the source map.
struct HaarSystem {
    std::vector<Rational> weight; // per arrow
};

struct MeasuredGroupoid {
    std::shared_ptr<const FiniteGroupoid> g;
    HaarSystem haar;
    std::vector<Rational> base; // per object, strictly positive

    /// nu(x) = base(tgt x) * weight(x).
    Rational nu(ArrowId x) const { return base[g->tgt(x)] * haar.weight[x]; }
};

/// Multiplicative positive function Delta(x) = nu(x)/nu(inv x).
struct ModularData {
    std::vector<Rational> delta;
};

HaarSystem counting_haar(const FiniteGroupoid& g);

/// Measured groupoid with counting Haar system and uniform base measure.
MeasuredGroupoid counting_measure(std::shared_ptr<const FiniteGroupoid> g);

ValidationReport validate_haar(const MeasuredGroupoid& mg);

ModularData modular(const MeasuredGroupoid& mg);

/// Absolute continuity of the pushed-forward orbit measure. With strictly
/// positive weights this always holds; the report carries the mass ratio
/// table per codomain orbit for diagnostics (empty report = pass).
struct MeasuredFunctorReport {
    ValidationReport validation;
    std::vector<Rational> pushforward_mass; // per orbit of cod, mass pushed from dom
    std::vector<Rational> codomain_mass;    // per orbit of cod, its own base mass
};

MeasuredFunctorReport measured_functor_check(const GroupoidFunctor& f,
                                             const MeasuredGroupoid& dom,
                                             const MeasuredGroupoid& cod);

} // namespace gwb

#endif
