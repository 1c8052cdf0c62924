#include "gwb/random_gen.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace gwb {

std::shared_ptr<const FiniteGroupoid> disjoint_union(const FiniteGroupoid& a,
                                                     const FiniteGroupoid& b) {
    const int oo = a.num_objects(), oa = a.num_arrows();
    FiniteGroupoid g(oo + b.num_objects(), oa + b.num_arrows());
    for (ArrowId x = 0; x < oa; ++x) {
        g.set_src(x, a.src(x));
        g.set_tgt(x, a.tgt(x));
        g.set_inv(x, a.inv(x));
    }
    for (ObjectId u = 0; u < oo; ++u) g.set_unit(u, a.unit(u));
    for (ArrowId x = 0; x < oa; ++x)
        for (ArrowId y = 0; y < oa; ++y)
            if (a.comp_raw(x, y) >= 0) g.set_comp(x, y, a.comp_raw(x, y));
    for (ArrowId x = 0; x < b.num_arrows(); ++x) {
        g.set_src(oa + x, oo + b.src(x));
        g.set_tgt(oa + x, oo + b.tgt(x));
        g.set_inv(oa + x, oa + b.inv(x));
    }
    for (ObjectId u = 0; u < b.num_objects(); ++u) g.set_unit(oo + u, oa + b.unit(u));
    for (ArrowId x = 0; x < b.num_arrows(); ++x)
        for (ArrowId y = 0; y < b.num_arrows(); ++y)
            if (b.comp_raw(x, y) >= 0) g.set_comp(oa + x, oa + y, oa + b.comp_raw(x, y));
    return std::make_shared<const FiniteGroupoid>(std::move(g));
}

namespace {

std::vector<std::vector<int>> cyclic_table(int k) {
    std::vector<std::vector<int>> t(k, std::vector<int>(k));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) t[a][b] = (a + b) % k;
    return t;
}

FiniteGroupoid random_component(std::mt19937& rng, int budget) {
    struct Kind {
        int cost;
        FiniteGroupoid (*make)();
    };
    static const std::vector<Kind> kinds = {
        {1, [] { return unit_groupoid(1); }},
        {2, [] { return group_groupoid(cyclic_table(2)); }},
        {3, [] { return group_groupoid(cyclic_table(3)); }},
        {4, [] { return pair_groupoid(2); }},
        {4, [] { return group_groupoid(cyclic_table(4)); }},
        {4, [] { // Z/2 flipping two points
            return action_groupoid(cyclic_table(2), {{0, 1}, {1, 0}});
        }},
        {9, [] { return pair_groupoid(3); }},
    };
    std::vector<int> ok;
    for (size_t i = 0; i < kinds.size(); ++i)
        if (kinds[i].cost <= budget) ok.push_back(static_cast<int>(i));
    int pick = ok[std::uniform_int_distribution<int>(0, static_cast<int>(ok.size()) - 1)(rng)];
    return kinds[pick].make();
}

int component_cost(const FiniteGroupoid& g) { return g.num_arrows(); }

} // namespace

std::shared_ptr<const FiniteGroupoid> random_groupoid(std::mt19937& rng,
                                                      int max_arrows) {
    if (max_arrows < 1) throw std::invalid_argument("random_groupoid: empty budget");
    int budget = max_arrows;
    FiniteGroupoid first = random_component(rng, budget);
    budget -= component_cost(first);
    auto g = std::make_shared<const FiniteGroupoid>(std::move(first));
    // Bias towards stopping so small multi-component examples stay common.
    while (budget >= 1 && std::uniform_int_distribution<int>(0, 2)(rng) != 0) {
        FiniteGroupoid next = random_component(rng, budget);
        budget -= component_cost(next);
        g = disjoint_union(*g, next);
    }
    return g;
}

Rational random_positive_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> d(1, 5);
    Rational r(d(rng), d(rng));
    r.canonicalize();
    return r;
}

HaarSystem random_haar(const FiniteGroupoid& g, std::mt19937& rng) {
    std::vector<Rational> c(g.num_objects());
    for (auto& v : c) v = random_positive_rational(rng);
    HaarSystem h;
    h.weight.resize(g.num_arrows());
    for (ArrowId x = 0; x < g.num_arrows(); ++x) h.weight[x] = c[g.src(x)];
    return h;
}

MeasuredGroupoid random_measure_on(std::shared_ptr<const FiniteGroupoid> g,
                                   std::mt19937& rng) {
    MeasuredGroupoid mg;
    mg.haar = random_haar(*g, rng);
    mg.base.resize(g->num_objects());
    for (auto& v : mg.base) v = random_positive_rational(rng);
    mg.g = std::move(g);
    return mg;
}

MeasuredGroupoid random_measured_groupoid(std::mt19937& rng, int max_arrows) {
    return random_measure_on(random_groupoid(rng, max_arrows), rng);
}

std::vector<std::vector<int>> all_homomorphisms(
    const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    auto identity_of = [](const std::vector<std::vector<int>>& t) {
        for (size_t c = 0; c < t.size(); ++c) {
            bool ok = true;
            for (size_t i = 0; i < t.size(); ++i)
                if (t[c][i] != static_cast<int>(i) || t[i][c] != static_cast<int>(i))
                    ok = false;
            if (ok) return static_cast<int>(c);
        }
        throw std::invalid_argument("all_homomorphisms: no identity");
    };
    int ea = identity_of(a), eb = identity_of(b);
    std::vector<std::vector<int>> out;
    std::vector<int> img(n, -1);
    img[ea] = eb;
    std::function<void(int)> go = [&](int i) {
        while (i < n && img[i] >= 0) ++i;
        if (i == n) {
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if (img[a[x][y]] != b[img[x]][img[y]]) return;
            out.push_back(img);
            return;
        }
        for (int j = 0; j < m; ++j) {
            img[i] = j;
            bool ok = true;
            for (int x = 0; x < n && ok; ++x) {
                if (img[x] < 0) continue;
                if (img[a[i][x]] >= 0 && img[a[i][x]] != b[j][img[x]]) ok = false;
                if (img[a[x][i]] >= 0 && img[a[x][i]] != b[img[x]][j]) ok = false;
            }
            if (ok) go(i + 1);
            img[i] = -1;
        }
    };
    go(0);
    return out;
}

namespace {

/// Spanning arrows t[u]: base -> u within each component, base = least object.
std::vector<ArrowId> spanning_arrows(const FiniteGroupoid& g,
                                     const std::vector<int>& orbit,
                                     const std::vector<ObjectId>& base_of_orbit) {
    std::vector<ArrowId> t(g.num_objects(), -1);
    for (ObjectId u = 0; u < g.num_objects(); ++u)
        if (base_of_orbit[orbit[u]] == u) t[u] = g.unit(u);
    bool changed = true;
    while (changed) {
        changed = false;
        for (ArrowId x = 0; x < g.num_arrows(); ++x) {
            if (t[g.src(x)] >= 0 && t[g.tgt(x)] < 0) {
                t[g.tgt(x)] = g.comp(x, t[g.src(x)]);
                changed = true;
            }
        }
    }
    for (auto v : t)
        if (v < 0) throw std::logic_error("spanning_arrows: unreachable object");
    return t;
}

} // namespace

GroupoidFunctor random_functor(std::shared_ptr<const FiniteGroupoid> dom,
                               std::shared_ptr<const FiniteGroupoid> cod,
                               std::mt19937& rng) {
    const auto& G = *dom;
    const auto& H = *cod;
    auto orbit = G.orbit_of_object();
    int norb = G.num_orbits();
    std::vector<ObjectId> base(norb, -1);
    for (ObjectId u = 0; u < G.num_objects(); ++u)
        if (base[orbit[u]] < 0) base[orbit[u]] = u;
    auto t = spanning_arrows(G, orbit, base);

    std::vector<IsotropyGroup> iso_g(norb);
    std::vector<std::map<ArrowId, int>> iso_idx(norb);
    std::vector<IsotropyGroup> iso_h(norb);
    std::vector<std::vector<int>> rho(norb);
    std::vector<ArrowId> alpha(G.num_objects());
    std::uniform_int_distribution<int> obj_h(0, H.num_objects() - 1);
    for (int o = 0; o < norb; ++o) {
        iso_g[o] = isotropy_group(G, base[o]);
        for (size_t i = 0; i < iso_g[o].elements.size(); ++i)
            iso_idx[o][iso_g[o].elements[i]] = static_cast<int>(i);
        ObjectId v0 = obj_h(rng);
        iso_h[o] = isotropy_group(H, v0);
        auto homs = all_homomorphisms(iso_g[o].table, iso_h[o].table);
        rho[o] = homs[std::uniform_int_distribution<size_t>(0, homs.size() - 1)(rng)];
        auto fiber = H.source_fiber(v0);
        for (ObjectId u = 0; u < G.num_objects(); ++u)
            if (orbit[u] == o)
                alpha[u] = fiber[std::uniform_int_distribution<size_t>(0, fiber.size() - 1)(rng)];
    }

    GroupoidFunctor f;
    f.dom = dom;
    f.cod = cod;
    f.phi0.resize(G.num_objects());
    f.phi1.resize(G.num_arrows());
    for (ObjectId u = 0; u < G.num_objects(); ++u) f.phi0[u] = H.tgt(alpha[u]);
    for (ArrowId x = 0; x < G.num_arrows(); ++x) {
        ObjectId u = G.src(x), up = G.tgt(x);
        int o = orbit[u];
        ArrowId gamma = G.comp(G.inv(t[up]), G.comp(x, t[u]));
        ArrowId im = iso_h[o].elements[rho[o][iso_idx[o].at(gamma)]];
        f.phi1[x] = H.comp(alpha[up], H.comp(im, H.inv(alpha[u])));
    }
    auto rep = validate_functor(f);
    if (!rep.ok())
        throw std::logic_error("random_functor produced an invalid functor:\n" +
                               rep.to_string());
    return f;
}

FunctorChain random_functor_chain(std::mt19937& rng, int max_arrows) {
    FunctorChain c;
    auto g = random_groupoid(rng, max_arrows);
    auto h = random_groupoid(rng, max_arrows);
    auto k = random_groupoid(rng, max_arrows);
    c.phi = random_functor(g, h, rng);
    c.psi = random_functor(h, k, rng);
    c.mg = random_measure_on(g, rng);
    c.mh = random_measure_on(h, rng);
    c.mk = random_measure_on(k, rng);
    return c;
}

BibundleChain random_bibundle_chain(std::mt19937& rng, int max_arrows) {
    const int cap = std::min(max_arrows, 6);
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto g = random_groupoid(rng, cap);
        std::shared_ptr<const FiniteGroupoid> h, k;
        Bibundle b1, b2;
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            h = g;
            b1 = canonical_bibundle(g);
        } else {
            h = random_groupoid(rng, cap);
            b1 = functor_bibundle(random_functor(h, g, rng));
        }
        if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) {
            k = h;
            b2 = canonical_bibundle(h);
        } else {
            k = random_groupoid(rng, cap);
            b2 = functor_bibundle(random_functor(k, h, rng));
        }
        if (static_cast<long>(b1.carrier_size) * b2.carrier_size > 256) continue;
        BibundleChain c;
        c.b1 = std::move(b1);
        c.b2 = std::move(b2);
        c.mg = random_measure_on(g, rng);
        c.mh = random_measure_on(h, rng);
        c.mk = random_measure_on(k, rng);
        return c;
    }
    throw std::runtime_error("random_bibundle_chain: size cap never satisfied");
}

} // namespace gwb
