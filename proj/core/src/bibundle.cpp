#include "gwb/bibundle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
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

Bibundle make_bibundle(std::shared_ptr<const FiniteGroupoid> g,
                       std::shared_ptr<const FiniteGroupoid> h, int carrier) {
    Bibundle b;
    b.carrier_size = carrier;
    b.tau.assign(carrier, -1);
    b.sigma.assign(carrier, -1);
    b.lact.assign(static_cast<size_t>(g->num_arrows()) * carrier, -1);
    b.ract.assign(static_cast<size_t>(carrier) * h->num_arrows(), -1);
    b.left_groupoid = std::move(g);
    b.right_groupoid = std::move(h);
    return b;
}

ValidationReport validate_bibundle(const Bibundle& b, bool check_principal) {
    ValidationReport rep;
    const auto& G = *b.left_groupoid;
    const auto& H = *b.right_groupoid;
    const int M = b.carrier_size;
    auto issue = [&](ValidationIssue::Kind k, const std::string& a, const std::string& w) {
        rep.issues.push_back({k, a, w});
    };

    for (int m = 0; m < M; ++m) {
        if (b.tau[m] < 0 || b.tau[m] >= G.num_objects())
            issue(ValidationIssue::Structural, "range:tau", tup({m}));
        if (b.sigma[m] < 0 || b.sigma[m] >= H.num_objects())
            issue(ValidationIssue::Structural, "range:sigma", tup({m}));
    }
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < M; ++m)
            if (b.lact_raw(x, m) >= M)
                issue(ValidationIssue::Structural, "range:lact", tup({x, m}));
    for (int m = 0; m < M; ++m)
        for (ArrowId h = 0; h < H.num_arrows(); ++h)
            if (b.ract_raw(m, h) >= M)
                issue(ValidationIssue::Structural, "range:ract", tup({m, h}));
    if (!rep.ok()) return rep;

    // Domains of definition.
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < M; ++m) {
            bool want = (G.src(x) == b.tau[m]);
            bool have = (b.lact_raw(x, m) >= 0);
            if (want != have)
                issue(ValidationIssue::Axiom, "lact:domain", tup({x, m}));
        }
    for (int m = 0; m < M; ++m)
        for (ArrowId h = 0; h < H.num_arrows(); ++h) {
            bool want = (H.tgt(h) == b.sigma[m]);
            bool have = (b.ract_raw(m, h) >= 0);
            if (want != have)
                issue(ValidationIssue::Axiom, "ract:domain", tup({m, h}));
        }
    if (!rep.ok()) return rep;

    // Anchor transport and unit laws.
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < M; ++m) {
            if (b.lact_raw(x, m) < 0) continue;
            int xm = b.lact_raw(x, m);
            if (b.tau[xm] != G.tgt(x) || b.sigma[xm] != b.sigma[m])
                issue(ValidationIssue::Axiom, "lact:anchors", tup({x, m}));
        }
    for (int m = 0; m < M; ++m)
        for (ArrowId h = 0; h < H.num_arrows(); ++h) {
            if (b.ract_raw(m, h) < 0) continue;
            int mh = b.ract_raw(m, h);
            if (b.tau[mh] != b.tau[m] || b.sigma[mh] != H.src(h))
                issue(ValidationIssue::Axiom, "ract:anchors", tup({m, h}));
        }
    for (int m = 0; m < M; ++m) {
        if (b.lact_raw(G.unit(b.tau[m]), m) != m)
            issue(ValidationIssue::Axiom, "lact:unit", tup({m}));
        if (b.ract_raw(m, H.unit(b.sigma[m])) != m)
            issue(ValidationIssue::Axiom, "ract:unit", tup({m}));
    }
    if (!rep.ok()) return rep;

    // Compatibility with composition, and of the two actions.
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (ArrowId y = 0; y < G.num_arrows(); ++y) {
            if (!G.composable(x, y)) continue;
            for (int m = 0; m < M; ++m) {
                if (b.tau[m] != G.src(y)) continue;
                if (b.lact_raw(G.comp_raw(x, y), m) != b.lact_raw(x, b.lact_raw(y, m)))
                    issue(ValidationIssue::Axiom, "lact:composition", tup({x, y, m}));
            }
        }
    for (ArrowId h = 0; h < H.num_arrows(); ++h)
        for (ArrowId l = 0; l < H.num_arrows(); ++l) {
            if (!H.composable(h, l)) continue;
            for (int m = 0; m < M; ++m) {
                if (b.sigma[m] != H.tgt(h)) continue;
                if (b.ract_raw(m, H.comp_raw(h, l)) != b.ract_raw(b.ract_raw(m, h), l))
                    issue(ValidationIssue::Axiom, "ract:composition", tup({m, h, l}));
            }
        }
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < M; ++m) {
            if (b.tau[m] != G.src(x)) continue;
            for (ArrowId h = 0; h < H.num_arrows(); ++h) {
                if (b.sigma[m] != H.tgt(h)) continue;
                if (b.ract_raw(b.lact_raw(x, m), h) != b.lact_raw(x, b.ract_raw(m, h)))
                    issue(ValidationIssue::Axiom, "actions:commute", tup({x, m, h}));
            }
        }
    if (!rep.ok() || !check_principal) return rep;

    // Left principality: sigma surjective, G-action free, and the pairing
    // (x, m) -> (x.m, m) bijective onto M x_{H_0} M.
    std::vector<bool> hit(H.num_objects(), false);
    for (int m = 0; m < M; ++m) hit[b.sigma[m]] = true;
    for (ObjectId r = 0; r < H.num_objects(); ++r)
        if (!hit[r]) issue(ValidationIssue::Axiom, "principal:sigma-surjective", tup({r}));
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < M; ++m) {
            if (b.lact_raw(x, m) != m) continue;
            if (!G.is_unit(x))
                issue(ValidationIssue::Axiom, "principal:free", tup({x, m}));
        }
    // Bijectivity of the pairing map.
    std::map<std::pair<int, int>, int> seen;
    long domain_count = 0;
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < M; ++m) {
            if (b.lact_raw(x, m) < 0) continue;
            ++domain_count;
            auto key = std::make_pair(b.lact_raw(x, m), m);
            if (seen.count(key))
                issue(ValidationIssue::Axiom, "principal:pairing-injective", tup({x, m}));
            seen[key] = x;
        }
    long fiber_pairs = 0;
    for (int m1 = 0; m1 < M; ++m1)
        for (int m2 = 0; m2 < M; ++m2)
            if (b.sigma[m1] == b.sigma[m2]) {
                ++fiber_pairs;
                if (!seen.count({m1, m2}))
                    issue(ValidationIssue::Axiom, "principal:pairing-surjective",
                          tup({m1, m2}));
            }
    (void)domain_count;
    (void)fiber_pairs;
    return rep;
}

Bibundle canonical_bibundle(std::shared_ptr<const FiniteGroupoid> g) {
    const auto& G = *g;
    Bibundle b = make_bibundle(g, g, G.num_arrows());
    for (int m = 0; m < G.num_arrows(); ++m) {
        b.tau[m] = G.tgt(m);
        b.sigma[m] = G.src(m);
    }
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int m = 0; m < G.num_arrows(); ++m)
            if (G.composable(x, m)) b.set_lact(x, m, G.comp_raw(x, m));
    for (int m = 0; m < G.num_arrows(); ++m)
        for (ArrowId h = 0; h < G.num_arrows(); ++h)
            if (G.composable(m, h)) b.set_ract(m, h, G.comp_raw(m, h));
    return b;
}

Bibundle functor_bibundle(const GroupoidFunctor& phi) {
    // phi: H -> G gives a G-H bibundle.
    auto G = phi.cod;
    auto H = phi.dom;
    std::vector<std::pair<ArrowId, ObjectId>> pts;
    std::map<std::pair<ArrowId, ObjectId>, int> id;
    for (ArrowId g = 0; g < G->num_arrows(); ++g)
        for (ObjectId v = 0; v < H->num_objects(); ++v)
            if (G->src(g) == phi.phi0[v]) {
                id[{g, v}] = static_cast<int>(pts.size());
                pts.emplace_back(g, v);
            }
    Bibundle b = make_bibundle(G, H, static_cast<int>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i) {
        b.tau[i] = G->tgt(pts[i].first);
        b.sigma[i] = pts[i].second;
    }
    for (ArrowId x = 0; x < G->num_arrows(); ++x)
        for (size_t i = 0; i < pts.size(); ++i) {
            auto [g, v] = pts[i];
            if (G->src(x) != G->tgt(g)) continue;
            b.set_lact(x, static_cast<int>(i), id.at({G->comp_raw(x, g), v}));
        }
    for (size_t i = 0; i < pts.size(); ++i) {
        auto [g, v] = pts[i];
        for (ArrowId h = 0; h < H->num_arrows(); ++h) {
            if (H->tgt(h) != v) continue;
            ArrowId gh = G->comp_raw(g, phi.phi1[h]);
            b.set_ract(static_cast<int>(i), h, id.at({gh, H->src(h)}));
        }
    }
    return b;
}

Bibundle reverse_bibundle(const Bibundle& b) {
    const auto& G = *b.left_groupoid;
    const auto& H = *b.right_groupoid;
    Bibundle r = make_bibundle(b.right_groupoid, b.left_groupoid, b.carrier_size);
    r.tau = b.sigma;
    r.sigma = b.tau;
    for (ArrowId h = 0; h < H.num_arrows(); ++h)
        for (int m = 0; m < b.carrier_size; ++m) {
            int out = b.ract_raw(m, H.inv(h));
            if (H.src(h) == b.sigma[m] && out >= 0) r.set_lact(h, m, out);
        }
    for (int m = 0; m < b.carrier_size; ++m)
        for (ArrowId x = 0; x < G.num_arrows(); ++x) {
            int out = b.lact_raw(G.inv(x), m);
            if (G.tgt(x) == b.tau[m] && out >= 0) r.set_ract(m, x, out);
        }
    return r;
}

InducedMeasureSystem induced_measure(const Bibundle& b, const MeasuredGroupoid& mg) {
    const auto& G = *b.left_groupoid;
    const auto& H = *b.right_groupoid;
    if (mg.g.get() != b.left_groupoid.get())
        throw std::invalid_argument("induced_measure: Haar system is for a different groupoid");
    InducedMeasureSystem sys;
    sys.mu.assign(b.carrier_size, Rational(0));
    for (ObjectId r = 0; r < H.num_objects(); ++r) {
        auto fiber = b.sigma_fiber(r);
        if (fiber.empty())
            throw std::invalid_argument("induced_measure: sigma not surjective at " +
                                        std::to_string(r));
        bool first = true;
        std::vector<Rational> mu_r(b.carrier_size, Rational(0));
        for (int m0 : fiber) {
            std::vector<Rational> trial(b.carrier_size, Rational(0));
            for (ArrowId x = 0; x < G.num_arrows(); ++x) {
                if (G.tgt(x) != b.tau[m0]) continue;
                trial[b.act_left(G.inv(x), m0)] += mg.haar.weight[x];
            }
            if (first) {
                mu_r = trial;
                first = false;
            } else if (trial != mu_r) {
                throw std::runtime_error("induced_measure: basepoint dependence detected");
            }
        }
        for (int m : fiber) sys.mu[m] = mu_r[m];
    }
    // H-equivariance: mu^{t(h)}(m) = mu^{s(h)}(m.h).
    for (ArrowId h = 0; h < H.num_arrows(); ++h)
        for (int m = 0; m < b.carrier_size; ++m) {
            if (b.sigma[m] != H.tgt(h)) continue;
            if (sys.mu[m] != sys.mu[b.act_right(m, h)])
                throw std::runtime_error("induced_measure: H-equivariance failure");
        }
    return sys;
}

Bibundle bibundle_tensor(const Bibundle& b1, const Bibundle& b2) {
    if (b1.right_groupoid.get() != b2.left_groupoid.get())
        throw std::invalid_argument("bibundle_tensor: middle groupoid mismatch");
    const auto& G = *b1.left_groupoid;
    const auto& H = *b1.right_groupoid;
    const auto& K = *b2.right_groupoid;

    std::vector<std::pair<int, int>> pairs;
    std::map<std::pair<int, int>, int> pid;
    for (int m = 0; m < b1.carrier_size; ++m)
        for (int n = 0; n < b2.carrier_size; ++n)
            if (b1.sigma[m] == b2.tau[n]) {
                pid[{m, n}] = static_cast<int>(pairs.size());
                pairs.emplace_back(m, n);
            }
    const int np = static_cast<int>(pairs.size());

    // Orbits of the diagonal middle action h.(m,n) = (m h, h^{-1} n).
    std::vector<int> parent(np);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int p = 0; p < np; ++p) {
        auto [m, n] = pairs[p];
        for (ArrowId h = 0; h < H.num_arrows(); ++h) {
            if (H.tgt(h) != b1.sigma[m]) continue;
            int q = pid.at({b1.act_right(m, h), b2.act_left(H.inv(h), n)});
            int a = find(p), bb = find(q);
            if (a != bb) parent[std::max(a, bb)] = std::min(a, bb);
        }
    }
    // Canonical representatives: least pair index in each orbit.
    std::vector<int> rep_of(np);
    std::vector<int> reps;
    std::map<int, int> orbit_id;
    for (int p = 0; p < np; ++p) {
        int r = find(p);
        if (!orbit_id.count(r)) {
            orbit_id[r] = static_cast<int>(reps.size());
            reps.push_back(r);
        }
        rep_of[p] = orbit_id[r];
    }
    const int nc = static_cast<int>(reps.size());

    Bibundle out = make_bibundle(b1.left_groupoid, b2.right_groupoid, nc);
    for (int c = 0; c < nc; ++c) {
        auto [m, n] = pairs[reps[c]];
        out.tau[c] = b1.tau[m];
        out.sigma[c] = b2.sigma[n];
    }
    // Induced actions; checked for well-definedness over every orbit member.
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (int p = 0; p < np; ++p) {
            auto [m, n] = pairs[p];
            if (G.src(x) != b1.tau[m]) continue;
            int target = rep_of[pid.at({b1.act_left(x, m), n})];
            int c = rep_of[p];
            int prev = out.lact_raw(x, c);
            if (prev >= 0 && prev != target)
                throw std::runtime_error("bibundle_tensor: induced left action ill-defined");
            out.set_lact(x, c, target);
        }
    for (ArrowId k = 0; k < K.num_arrows(); ++k)
        for (int p = 0; p < np; ++p) {
            auto [m, n] = pairs[p];
            if (K.tgt(k) != b2.sigma[n]) continue;
            int target = rep_of[pid.at({m, b2.act_right(n, k)})];
            int c = rep_of[p];
            int prev = out.ract_raw(c, k);
            if (prev >= 0 && prev != target)
                throw std::runtime_error("bibundle_tensor: induced right action ill-defined");
            out.set_ract(c, k, target);
        }
    return out;
}

std::optional<std::vector<int>> bibundle_isomorphic(const Bibundle& b1,
                                                    const Bibundle& b2) {
    if (b1.left_groupoid.get() != b2.left_groupoid.get() ||
        b1.right_groupoid.get() != b2.right_groupoid.get())
        throw std::invalid_argument("bibundle_isomorphic: different groupoid pair");
    if (b1.carrier_size != b2.carrier_size) return std::nullopt;
    const auto& G = *b1.left_groupoid;
    const auto& H = *b1.right_groupoid;
    const int M = b1.carrier_size;

    // G x H orbits of the first carrier.
    std::vector<int> comp(M, -1);
    int ncomp = 0;
    for (int seed = 0; seed < M; ++seed) {
        if (comp[seed] >= 0) continue;
        std::vector<int> stack{seed};
        comp[seed] = ncomp;
        while (!stack.empty()) {
            int m = stack.back();
            stack.pop_back();
            for (ArrowId x = 0; x < G.num_arrows(); ++x) {
                int t = b1.lact_raw(x, m);
                if (t >= 0 && comp[t] < 0) { comp[t] = ncomp; stack.push_back(t); }
            }
            for (ArrowId h = 0; h < H.num_arrows(); ++h) {
                int t = b1.ract_raw(m, h);
                if (t >= 0 && comp[t] < 0) { comp[t] = ncomp; stack.push_back(t); }
            }
        }
        ++ncomp;
    }
    std::vector<int> anchor(ncomp, -1);
    for (int m = M - 1; m >= 0; --m) anchor[comp[m]] = m;

    std::vector<int> image(M, -1);
    std::vector<bool> used(M, false);

    // Propagate equivariance from an anchored guess; returns the points
    // fixed by this propagation (for rollback), or nullopt on clash.
    auto propagate = [&](int a, int c) -> std::optional<std::vector<int>> {
        std::vector<int> fixed;
        auto assign = [&](int m, int im) -> bool {
            if (image[m] >= 0) return image[m] == im;
            if (used[im]) return false;
            if (b1.tau[m] != b2.tau[im] || b1.sigma[m] != b2.sigma[im]) return false;
            image[m] = im;
            used[im] = true;
            fixed.push_back(m);
            return true;
        };
        auto rollback = [&]() {
            for (int m : fixed) {
                used[image[m]] = false;
                image[m] = -1;
            }
        };
        if (!assign(a, c)) { rollback(); return std::nullopt; }
        for (size_t qi = 0; qi < fixed.size(); ++qi) {
            int m = fixed[qi];
            for (ArrowId x = 0; x < G.num_arrows(); ++x) {
                int t = b1.lact_raw(x, m);
                if (t < 0) continue;
                int it = b2.lact_raw(x, image[m]);
                if (it < 0 || !assign(t, it)) { rollback(); return std::nullopt; }
            }
            for (ArrowId h = 0; h < H.num_arrows(); ++h) {
                int t = b1.ract_raw(m, h);
                if (t < 0) continue;
                int it = b2.ract_raw(image[m], h);
                if (it < 0 || !assign(t, it)) { rollback(); return std::nullopt; }
            }
        }
        return fixed;
    };

    std::function<bool(int)> solve = [&](int orbit) -> bool {
        if (orbit == ncomp) return true;
        int a = anchor[orbit];
        for (int c = 0; c < M; ++c) {
            auto fixed = propagate(a, c);
            if (!fixed) continue;
            if (solve(orbit + 1)) return true;
            for (int m : *fixed) {
                used[image[m]] = false;
                image[m] = -1;
            }
        }
        return false;
    };
    if (!solve(0)) return std::nullopt;
    for (int m = 0; m < M; ++m)
        if (image[m] < 0) return std::nullopt;
    return image;
}

} // namespace gwb
