#include "gwb/groupoid.hpp"

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

std::vector<int> FiniteGroupoid::orbit_of_object() const {
    std::vector<int> parent(num_objects_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int u) {
        while (parent[u] != u) u = parent[u] = parent[parent[u]];
        return u;
    };
    for (ArrowId x = 0; x < num_arrows_; ++x) {
        int a = find(src_[x]), b = find(tgt_[x]);
        if (a != b) parent[a] = b;
    }
    std::vector<int> label(num_objects_, -1);
    int next = 0;
    std::vector<int> out(num_objects_);
    for (int u = 0; u < num_objects_; ++u) {
        int r = find(u);
        if (label[r] < 0) label[r] = next++;
        out[u] = label[r];
    }
    return out;
}

int FiniteGroupoid::num_orbits() const {
    auto o = orbit_of_object();
    int m = 0;
    for (int v : o) m = std::max(m, v + 1);
    return m;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& i : issues)
        os << (i.kind == ValidationIssue::Structural ? "structural " : "axiom ")
           << i.axiom << " at " << i.witness << '\n';
    return os.str();
}

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
    ValidationReport rep;
    const int no = g.num_objects(), na = g.num_arrows();
    auto structural = [&](const std::string& where, const std::string& wit) {
        rep.issues.push_back({ValidationIssue::Structural, where, wit});
    };
    auto axiom = [&](const std::string& name, const std::string& wit) {
        rep.issues.push_back({ValidationIssue::Axiom, name, wit});
    };

    // Range checks first; axiom checks only run on well-formed tables.
    for (ArrowId x = 0; x < na; ++x) {
        if (g.src(x) < 0 || g.src(x) >= no) structural("range:src", tup({x}));
        if (g.tgt(x) < 0 || g.tgt(x) >= no) structural("range:tgt", tup({x}));
        if (g.inv(x) < 0 || g.inv(x) >= na) structural("range:inv", tup({x}));
    }
    for (ObjectId u = 0; u < no; ++u)
        if (g.unit(u) < 0 || g.unit(u) >= na) structural("range:unit", tup({u}));
    for (ArrowId x = 0; x < na; ++x)
        for (ArrowId y = 0; y < na; ++y) {
            ArrowId z = g.comp_raw(x, y);
            if (z >= na) structural("range:comp", tup({x, y}));
        }
    if (!rep.ok()) return rep;

    // Composability domain and source/target of composites.
    for (ArrowId x = 0; x < na; ++x)
        for (ArrowId y = 0; y < na; ++y) {
            ArrowId z = g.comp_raw(x, y);
            if (g.composable(x, y)) {
                if (z < 0) {
                    axiom("composability:undefined", tup({x, y}));
                } else {
                    if (g.tgt(z) != g.tgt(x) || g.src(z) != g.src(y))
                        axiom("composability:endpoints", tup({x, y, z}));
                }
            } else if (z >= 0) {
                axiom("composability:spurious", tup({x, y}));
            }
        }
    if (!rep.ok()) return rep;

    // Associativity over all composable triples.
    for (ArrowId x = 0; x < na; ++x)
        for (ArrowId y = 0; y < na; ++y) {
            if (!g.composable(x, y)) continue;
            ArrowId xy = g.comp_raw(x, y);
            for (ArrowId z = 0; z < na; ++z) {
                if (!g.composable(y, z)) continue;
                ArrowId yz = g.comp_raw(y, z);
                if (g.comp_raw(xy, z) != g.comp_raw(x, yz))
                    axiom("associativity", tup({x, y, z}));
            }
        }

    // Units.
    std::vector<bool> seen_unit(na, false);
    for (ObjectId u = 0; u < no; ++u) {
        ArrowId e = g.unit(u);
        if (seen_unit[e]) axiom("unit:injective", tup({u}));
        seen_unit[e] = true;
        if (g.src(e) != u || g.tgt(e) != u) axiom("unit:endpoints", tup({u}));
    }
    for (ArrowId x = 0; x < na; ++x) {
        if (g.comp_raw(g.unit(g.tgt(x)), x) != x) axiom("unit:left", tup({x}));
        if (g.comp_raw(x, g.unit(g.src(x))) != x) axiom("unit:right", tup({x}));
    }

    // Inverses.
    for (ArrowId x = 0; x < na; ++x) {
        ArrowId xi = g.inv(x);
        if (g.inv(xi) != x) axiom("inverse:involution", tup({x}));
        if (g.src(xi) != g.tgt(x) || g.tgt(xi) != g.src(x)) {
            axiom("inverse:endpoints", tup({x}));
            continue;
        }
        if (g.comp_raw(x, xi) != g.unit(g.tgt(x)) ||
            g.comp_raw(xi, x) != g.unit(g.src(x)))
            axiom("inverse", tup({x}));
    }
    return rep;
}

FiniteGroupoid unit_groupoid(int n) {
    FiniteGroupoid g(n, n);
    for (int u = 0; u < n; ++u) {
        g.set_src(u, u);
        g.set_tgt(u, u);
        g.set_unit(u, u);
        g.set_inv(u, u);
        g.set_comp(u, u, u);
    }
    return g;
}

FiniteGroupoid pair_groupoid(int n) {
    FiniteGroupoid g(n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            ArrowId a = pair_arrow(n, i, j);
            g.set_tgt(a, i);
            g.set_src(a, j);
            g.set_inv(a, pair_arrow(n, j, i));
        }
    for (int u = 0; u < n; ++u) g.set_unit(u, pair_arrow(n, u, u));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                g.set_comp(pair_arrow(n, i, j), pair_arrow(n, j, k),
                           pair_arrow(n, i, k));
    return g;
}

namespace {

// Identity and inverses of a finite group multiplication table.
// Throws if the table is not a group.
struct GroupTable {
    int order;
    int identity;
    std::vector<int> inverse;
};

GroupTable analyze_group(const std::vector<std::vector<int>>& t) {
    const int n = static_cast<int>(t.size());
    if (n == 0) throw std::invalid_argument("empty group table");
    for (const auto& row : t) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("group table not square");
        for (int v : row)
            if (v < 0 || v >= n)
                throw std::invalid_argument("group table entry out of range");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (t[t[a][b]][c] != t[a][t[b][c]])
                    throw std::invalid_argument("group table not associative");
    int e = -1;
    for (int cand = 0; cand < n; ++cand) {
        bool ok = true;
        for (int a = 0; a < n; ++a)
            if (t[cand][a] != a || t[a][cand] != a) { ok = false; break; }
        if (ok) { e = cand; break; }
    }
    if (e < 0) throw std::invalid_argument("group table has no identity");
    std::vector<int> inv(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (t[a][b] == e && t[b][a] == e) { inv[a] = b; break; }
        if (inv[a] < 0) throw std::invalid_argument("group table element has no inverse");
    }
    return {n, e, inv};
}

} // namespace

FiniteGroupoid group_groupoid(const std::vector<std::vector<int>>& table) {
    GroupTable gt = analyze_group(table);
    FiniteGroupoid g(1, gt.order);
    for (int a = 0; a < gt.order; ++a) {
        g.set_src(a, 0);
        g.set_tgt(a, 0);
        g.set_inv(a, gt.inverse[a]);
        for (int b = 0; b < gt.order; ++b) g.set_comp(a, b, table[a][b]);
    }
    g.set_unit(0, gt.identity);
    return g;
}

FiniteGroupoid action_groupoid(const std::vector<std::vector<int>>& table,
                               const std::vector<std::vector<int>>& action) {
    GroupTable gt = analyze_group(table);
    const int n = gt.order;
    if (static_cast<int>(action.size()) != n)
        throw std::invalid_argument("action table must have one row per group element");
    const int m = action.empty() ? 0 : static_cast<int>(action[0].size());
    if (m == 0) throw std::invalid_argument("action on empty set");
    for (const auto& row : action) {
        if (static_cast<int>(row.size()) != m)
            throw std::invalid_argument("ragged action table");
        for (int v : row)
            if (v < 0 || v >= m)
                throw std::invalid_argument("action entry out of range");
    }
    // Action axioms: e.p = p, (ab).p = a.(b.p).
    for (int p = 0; p < m; ++p)
        if (action[gt.identity][p] != p)
            throw std::invalid_argument("identity does not act trivially");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int p = 0; p < m; ++p)
                if (action[table[a][b]][p] != action[a][action[b][p]])
                    throw std::invalid_argument("action not compatible with multiplication");

    // Arrow (a, p): p -> a.p, id a*m + p.
    FiniteGroupoid g(m, n * m);
    auto aid = [m](int a, int p) { return a * m + p; };
    for (int a = 0; a < n; ++a)
        for (int p = 0; p < m; ++p) {
            ArrowId x = aid(a, p);
            g.set_src(x, p);
            g.set_tgt(x, action[a][p]);
            g.set_inv(x, aid(gt.inverse[a], action[a][p]));
        }
    for (int p = 0; p < m; ++p) g.set_unit(p, aid(gt.identity, p));
    // comp((a, b.p), (b, p)) = (ab, p)
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int p = 0; p < m; ++p)
                g.set_comp(aid(a, action[b][p]), aid(b, p), aid(table[a][b], p));
    return g;
}

} // namespace gwb
