#include "gwb/functor.hpp"

#include <functional>
#include <sstream>

namespace gwb {

namespace {

std::string tup(std::initializer_list<int> xs) {
    std::ostringstream os;
    os << '(';
    bool first = true;
    for (int x : xs) {
        if (!first) os << ',';
        os << x;
        first = false;
    }
    os << ')';
    return os.str();
}

} // namespace

GroupoidFunctor identity_functor(std::shared_ptr<const FiniteGroupoid> g) {
    GroupoidFunctor f;
    f.dom = g;
    f.cod = g;
    f.phi0.resize(g->num_objects());
    f.phi1.resize(g->num_arrows());
    for (int u = 0; u < g->num_objects(); ++u) f.phi0[u] = u;
    for (int x = 0; x < g->num_arrows(); ++x) f.phi1[x] = x;
    return f;
}

GroupoidFunctor functor_from_arrow_map(std::shared_ptr<const FiniteGroupoid> dom,
                                       std::shared_ptr<const FiniteGroupoid> cod,
                                       std::vector<ArrowId> phi1) {
    if (static_cast<int>(phi1.size()) != dom->num_arrows())
        throw std::invalid_argument("phi1 size mismatch");
    GroupoidFunctor f;
    f.dom = std::move(dom);
    f.cod = std::move(cod);
    f.phi1 = std::move(phi1);
    f.phi0.resize(f.dom->num_objects());
    for (int u = 0; u < f.dom->num_objects(); ++u) {
        ArrowId e = f.phi1[f.dom->unit(u)];
        if (e < 0 || e >= f.cod->num_arrows())
            throw std::invalid_argument("phi1 entry out of range");
        f.phi0[u] = f.cod->tgt(e);
    }
    return f;
}

ValidationReport validate_functor(const GroupoidFunctor& f) {
    ValidationReport rep;
    const auto& G = *f.dom;
    const auto& H = *f.cod;
    auto issue = [&](ValidationIssue::Kind k, const std::string& a, const std::string& w) {
        rep.issues.push_back({k, a, w});
    };
    if (static_cast<int>(f.phi0.size()) != G.num_objects() ||
        static_cast<int>(f.phi1.size()) != G.num_arrows()) {
        issue(ValidationIssue::Structural, "size", "()");
        return rep;
    }
    for (ObjectId u = 0; u < G.num_objects(); ++u)
        if (f.phi0[u] < 0 || f.phi0[u] >= H.num_objects())
            issue(ValidationIssue::Structural, "range:phi0", tup({u}));
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        if (f.phi1[x] < 0 || f.phi1[x] >= H.num_arrows())
            issue(ValidationIssue::Structural, "range:phi1", tup({x}));
    if (!rep.ok()) return rep;

    for (ArrowId x = 0; x < G.num_arrows(); ++x) {
        if (H.src(f.phi1[x]) != f.phi0[G.src(x)] ||
            H.tgt(f.phi1[x]) != f.phi0[G.tgt(x)])
            issue(ValidationIssue::Axiom, "functor:endpoints", tup({x}));
        if (f.phi1[G.inv(x)] != H.inv(f.phi1[x]))
            issue(ValidationIssue::Axiom, "functor:inverse", tup({x}));
    }
    for (ObjectId u = 0; u < G.num_objects(); ++u)
        if (f.phi1[G.unit(u)] != H.unit(f.phi0[u]))
            issue(ValidationIssue::Axiom, "functor:unit", tup({u}));
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (ArrowId y = 0; y < G.num_arrows(); ++y) {
            if (!G.composable(x, y)) continue;
            if (f.phi1[G.comp_raw(x, y)] != H.comp_raw(f.phi1[x], f.phi1[y]))
                issue(ValidationIssue::Axiom, "functor:composition", tup({x, y}));
        }
    return rep;
}

GroupoidFunctor compose_functors(const GroupoidFunctor& g, const GroupoidFunctor& f) {
    if (f.cod.get() != g.dom.get())
        throw std::invalid_argument("compose_functors: domain mismatch");
    GroupoidFunctor h;
    h.dom = f.dom;
    h.cod = g.cod;
    h.phi0.resize(f.phi0.size());
    h.phi1.resize(f.phi1.size());
    for (size_t u = 0; u < f.phi0.size(); ++u) h.phi0[u] = g.phi0[f.phi0[u]];
    for (size_t x = 0; x < f.phi1.size(); ++x) h.phi1[x] = g.phi1[f.phi1[x]];
    return h;
}

ValidationReport validate_natural_isomorphism(const GroupoidFunctor& f,
                                              const GroupoidFunctor& g,
                                              const NaturalIsomorphism& n) {
    ValidationReport rep;
    const auto& G = *f.dom;
    const auto& H = *f.cod;
    if (f.dom.get() != g.dom.get() || f.cod.get() != g.cod.get()) {
        rep.issues.push_back({ValidationIssue::Structural, "dom/cod", "()"});
        return rep;
    }
    for (ObjectId u = 0; u < G.num_objects(); ++u) {
        ArrowId e = n.eta[u];
        if (H.src(e) != f.phi0[u] || H.tgt(e) != g.phi0[u])
            rep.issues.push_back({ValidationIssue::Axiom, "eta:endpoints", tup({u})});
    }
    if (!rep.ok()) return rep;
    for (ArrowId x = 0; x < G.num_arrows(); ++x) {
        // eta(tgt x) . f(x) = g(x) . eta(src x)
        ArrowId lhs = H.comp_raw(n.eta[G.tgt(x)], f.phi1[x]);
        ArrowId rhs = H.comp_raw(g.phi1[x], n.eta[G.src(x)]);
        if (lhs < 0 || rhs < 0 || lhs != rhs)
            rep.issues.push_back({ValidationIssue::Axiom, "naturality", tup({x})});
    }
    return rep;
}

std::optional<NaturalIsomorphism> naturally_isomorphic(const GroupoidFunctor& f,
                                                       const GroupoidFunctor& g) {
    if (f.dom.get() != g.dom.get() || f.cod.get() != g.cod.get())
        throw std::invalid_argument("naturally_isomorphic: functors not parallel");
    const auto& G = *f.dom;
    const auto& H = *f.cod;
    const int no = G.num_objects();

    // Candidate components per object.
    std::vector<std::vector<ArrowId>> candidates(no);
    for (ObjectId u = 0; u < no; ++u) {
        for (ArrowId e = 0; e < H.num_arrows(); ++e)
            if (H.src(e) == f.phi0[u] && H.tgt(e) == g.phi0[u])
                candidates[u].push_back(e);
        if (candidates[u].empty()) return std::nullopt;
    }

    std::vector<ArrowId> eta(no, -1);
    // Naturality against arrows whose endpoints are both already fixed.
    auto consistent = [&](ObjectId just_fixed) {
        for (ArrowId x = 0; x < G.num_arrows(); ++x) {
            ObjectId a = G.src(x), b = G.tgt(x);
            if ((a != just_fixed && b != just_fixed) || eta[a] < 0 || eta[b] < 0)
                continue;
            if (H.comp_raw(eta[b], f.phi1[x]) != H.comp_raw(g.phi1[x], eta[a]))
                return false;
        }
        return true;
    };
    std::function<bool(int)> go = [&](int u) -> bool {
        if (u == no) return true;
        for (ArrowId e : candidates[u]) {
            eta[u] = e;
            if (consistent(u) && go(u + 1)) return true;
        }
        eta[u] = -1;
        return false;
    };
    if (!go(0)) return std::nullopt;
    return NaturalIsomorphism{eta};
}

} // namespace gwb
