#include "gwb/measure.hpp"

#include <sstream>

namespace gwb {

HaarSystem counting_haar(const FiniteGroupoid& g) {
    return HaarSystem{std::vector<Rational>(g.num_arrows(), Rational(1))};
}

MeasuredGroupoid counting_measure(std::shared_ptr<const FiniteGroupoid> g) {
    MeasuredGroupoid mg;
    mg.haar = counting_haar(*g);
    mg.base.assign(g->num_objects(), Rational(1));
    mg.g = std::move(g);
    return mg;
}

ValidationReport validate_haar(const MeasuredGroupoid& mg) {
    ValidationReport rep;
    const auto& g = *mg.g;
    if (static_cast<int>(mg.haar.weight.size()) != g.num_arrows() ||
        static_cast<int>(mg.base.size()) != g.num_objects()) {
        rep.issues.push_back({ValidationIssue::Structural, "size", "()"});
        return rep;
    }
    for (ArrowId x = 0; x < g.num_arrows(); ++x)
        if (mg.haar.weight[x] <= 0) {
            std::ostringstream os;
            os << '(' << x << ')';
            rep.issues.push_back({ValidationIssue::Axiom, "positivity:weight", os.str()});
        }
    for (ObjectId u = 0; u < g.num_objects(); ++u)
        if (mg.base[u] <= 0) {
            std::ostringstream os;
            os << '(' << u << ')';
            rep.issues.push_back({ValidationIssue::Axiom, "positivity:base", os.str()});
        }
    if (!rep.ok()) return rep;
    // Left invariance: weight(xy) = weight(y) on all composable pairs.
    for (ArrowId x = 0; x < g.num_arrows(); ++x)
        for (ArrowId y = 0; y < g.num_arrows(); ++y) {
            if (!g.composable(x, y)) continue;
            if (mg.haar.weight[g.comp_raw(x, y)] != mg.haar.weight[y]) {
                std::ostringstream os;
                os << '(' << x << ',' << y << ')';
                rep.issues.push_back({ValidationIssue::Axiom, "left-invariance", os.str()});
            }
        }
    return rep;
}

ModularData modular(const MeasuredGroupoid& mg) {
    const auto& g = *mg.g;
    ModularData d;
    d.delta.resize(g.num_arrows());
    for (ArrowId x = 0; x < g.num_arrows(); ++x)
        d.delta[x] = mg.nu(x) / mg.nu(g.inv(x));
    return d;
}

MeasuredFunctorReport measured_functor_check(const GroupoidFunctor& f,
                                             const MeasuredGroupoid& dom,
                                             const MeasuredGroupoid& cod) {
    MeasuredFunctorReport out;
    const auto& G = *dom.g;
    const auto& H = *cod.g;
    auto g_orbit = G.orbit_of_object();
    auto h_orbit = H.orbit_of_object();
    int nh = H.num_orbits();
    out.pushforward_mass.assign(nh, Rational(0));
    out.codomain_mass.assign(nh, Rational(0));
    for (ObjectId v = 0; v < H.num_objects(); ++v)
        out.codomain_mass[h_orbit[v]] += cod.base[v];
    for (ObjectId u = 0; u < G.num_objects(); ++u)
        out.pushforward_mass[h_orbit[f.phi0[u]]] += dom.base[u];
    // Absolute continuity: every orbit carrying pushforward mass must carry
    // codomain mass. Strict positivity makes this automatic; kept as a check.
    for (int o = 0; o < nh; ++o)
        if (out.pushforward_mass[o] > 0 && out.codomain_mass[o] == 0) {
            std::ostringstream os;
            os << '(' << o << ')';
            out.validation.issues.push_back(
                {ValidationIssue::Axiom, "absolute-continuity", os.str()});
        }
    (void)g_orbit;
    return out;
}

} // namespace gwb
