#ifndef GWB_GROUPOID_HPP
#define GWB_GROUPOID_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwb {

using ObjectId = int;
using ArrowId = int;

/// A finite groupoid given by dense integer ids and total lookup tables.
/// Composition convention: comp(x, y) is "x after y", defined exactly when
/// src(x) == tgt(y); then tgt(comp) == tgt(x) and src(comp) == src(y).
class FiniteGroupoid {
public:
    FiniteGroupoid() = default;
    FiniteGroupoid(int num_objects, int num_arrows)
        : num_objects_(num_objects), num_arrows_(num_arrows),
          src_(num_arrows, -1), tgt_(num_arrows, -1),
          unit_(num_objects, -1), inv_(num_arrows, -1),
          comp_(static_cast<size_t>(num_arrows) * num_arrows, -1) {}

    int num_objects() const { return num_objects_; }
    int num_arrows() const { return num_arrows_; }

    ObjectId src(ArrowId x) const { return src_[x]; }
    ObjectId tgt(ArrowId x) const { return tgt_[x]; }
    ArrowId unit(ObjectId u) const { return unit_[u]; }
    ArrowId inv(ArrowId x) const { return inv_[x]; }

    bool composable(ArrowId x, ArrowId y) const { return src_[x] == tgt_[y]; }
    /// Raw table entry; -1 where undefined.
    ArrowId comp_raw(ArrowId x, ArrowId y) const {
        return comp_[static_cast<size_t>(x) * num_arrows_ + y];
    }
    ArrowId comp(ArrowId x, ArrowId y) const {
        ArrowId z = comp_raw(x, y);
        if (z < 0) throw std::invalid_argument("comp on non-composable pair");
        return z;
    }
    bool is_unit(ArrowId x) const { return unit_[src_[x]] == x; }

    void set_src(ArrowId x, ObjectId u) { src_[x] = u; }
    void set_tgt(ArrowId x, ObjectId u) { tgt_[x] = u; }
    void set_unit(ObjectId u, ArrowId x) { unit_[u] = x; }
    void set_inv(ArrowId x, ArrowId y) { inv_[x] = y; }
    void set_comp(ArrowId x, ArrowId y, ArrowId z) {
        comp_[static_cast<size_t>(x) * num_arrows_ + y] = z;
    }

    /// Arrows in the t-fiber G^u = tgt^{-1}(u).
    std::vector<ArrowId> target_fiber(ObjectId u) const {
        std::vector<ArrowId> out;
        for (ArrowId x = 0; x < num_arrows_; ++x)
            if (tgt_[x] == u) out.push_back(x);
        return out;
    }
    std::vector<ArrowId> source_fiber(ObjectId u) const {
        std::vector<ArrowId> out;
        for (ArrowId x = 0; x < num_arrows_; ++x)
            if (src_[x] == u) out.push_back(x);
        return out;
    }

    /// Connected components of the base: u ~ v iff some arrow joins them.
    /// Returns orbit index per object.
    std::vector<int> orbit_of_object() const;
    int num_orbits() const;

private:
    int num_objects_ = 0;
    int num_arrows_ = 0;
    std::vector<ObjectId> src_, tgt_;
    std::vector<ArrowId> unit_, inv_;
    std::vector<ArrowId> comp_; // row-major (x, y), -1 = undefined
};

/// One validation finding. Structural errors (dangling ids, missing table
/// entries) are reported separately from axiom violations and suppress
/// axiom checking, since the tables cannot be trusted.
struct ValidationIssue {
    enum Kind { Structural, Axiom } kind;
    std::string axiom;    // e.g. "inverse", "associativity", "range:src"
    std::string witness;  // offending tuple, rendered
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

ValidationReport validate_groupoid(const FiniteGroupoid& g);

/// Standard constructions.
FiniteGroupoid unit_groupoid(int n);
/// Pair groupoid on n points; arrow id i*n+j is the arrow j -> i, so that
/// comp((i,j),(j,k)) = (i,k).
FiniteGroupoid pair_groupoid(int n);
/// Group as a one-object groupoid. table[a][b] = a*b, with comp(a,b)=a*b.
/// Throws std::invalid_argument if the table is not a group.
FiniteGroupoid group_groupoid(const std::vector<std::vector<int>>& table);
/// Action groupoid of the group `table` acting on {0..set_size-1} via
/// action[a][p] = a.p. Arrow (a, p): p -> a.p, id a*set_size + p.
FiniteGroupoid action_groupoid(const std::vector<std::vector<int>>& table,
                               const std::vector<std::vector<int>>& action);

/// Arrow id helpers for the standard constructions.
inline ArrowId pair_arrow(int n, int i, int j) { return i * n + j; }

} // namespace gwb

#endif
