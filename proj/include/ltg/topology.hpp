#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ltg/bitset.hpp"
#include "ltg/order.hpp"

namespace ltg {

/// Finite topological space: named points plus the full open-set family,
/// closed under union and intersection, containing the empty and full sets.
class FiniteSpace {
public:
    static constexpr std::size_t kOpenFamilyCap = 1u << 16;

    FiniteSpace() = default;

    /// Opens are all unions of finite intersections of the given sets,
    /// plus the empty and full sets.  Both closures run as worklists
    /// against the generators, so the cost is output-linear.
    static FiniteSpace from_basis(std::vector<std::string> points,
                                  const std::vector<Bitset>& basis) {
        FiniteSpace sp;
        sp.points_ = std::move(points);
        const int n = static_cast<int>(sp.points_.size());
        std::vector<Bitset> gens{Bitset::full(n)};
        for (const auto& b : basis) {
            if (b.universe_size() != n) throw Error("UnknownPoint", "basis set over wrong universe");
            gens.push_back(b);
        }
        std::set<Bitset> meets(gens.begin(), gens.end());
        std::vector<Bitset> work(meets.begin(), meets.end());
        while (!work.empty()) {
            Bitset cur = work.back();
            work.pop_back();
            for (const auto& g : gens) {
                Bitset next = cur & g;
                if (meets.insert(next).second) work.push_back(next);
            }
            if (meets.size() > kOpenFamilyCap) throw Error("TooLarge", "open family exceeds cap");
        }
        std::vector<Bitset> closed_basis(meets.begin(), meets.end());
        std::set<Bitset> fam(closed_basis.begin(), closed_basis.end());
        fam.insert(Bitset(n));
        work.assign(fam.begin(), fam.end());
        while (!work.empty()) {
            Bitset cur = work.back();
            work.pop_back();
            for (const auto& g : closed_basis) {
                Bitset next = cur | g;
                if (fam.insert(next).second) work.push_back(next);
            }
            if (fam.size() > kOpenFamilyCap) throw Error("TooLarge", "open family exceeds cap");
        }
        sp.opens_.assign(fam.begin(), fam.end());
        sp.compute_min_nbhd();
        return sp;
    }

    int size() const { return static_cast<int>(points_.size()); }
    const std::string& point_name(int i) const { return points_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& point_names() const { return points_; }
    const std::vector<Bitset>& opens() const { return opens_; }

    bool is_open(const Bitset& s) const {
        return std::binary_search(opens_.begin(), opens_.end(), s);
    }

    /// Smallest open neighbourhood of a point.
    const Bitset& min_nbhd(int i) const { return minn_[static_cast<std::size_t>(i)]; }

    bool same_topology(const FiniteSpace& o) const {
        return points_ == o.points_ && opens_ == o.opens_;
    }

private:
    void compute_min_nbhd() {
        const int n = size();
        minn_.assign(static_cast<std::size_t>(n), Bitset::full(n));
        for (int i = 0; i < n; ++i)
            for (const auto& o : opens_)
                if (o.test(i)) minn_[static_cast<std::size_t>(i)] &= o;
    }

    std::vector<std::string> points_;
    std::vector<Bitset> opens_;
    std::vector<Bitset> minn_;
};

/// In a finite space a pair is separated by disjoint opens iff the minimal
/// neighbourhoods are disjoint.
inline bool hausdorff_subspace(const FiniteSpace& sp, const Bitset& sub) {
    std::vector<int> pts = sub.indices();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            Bitset a = sp.min_nbhd(pts[i]) & sub;
            Bitset b = sp.min_nbhd(pts[j]) & sub;
            if (a.intersects(b)) return false;
        }
    return true;
}

/// Every subset of a finite space is compact: any open cover is itself
/// finite.  The routine extracts an irredundant subcover as the audit
/// trail rather than just asserting the fact.
inline bool is_compact(const FiniteSpace& sp, const Bitset& s) {
    std::vector<Bitset> cover;
    s.for_each([&](int i) { cover.push_back(sp.min_nbhd(i)); });
    Bitset covered(sp.size());
    for (const auto& c : cover) {
        if (s.subset_of(covered)) break;
        covered |= c;
    }
    return s.subset_of(covered);
}

struct SpaceProps {
    bool hausdorff = false;
    bool locally_hausdorff = false;
    bool locally_compact = false;
};

inline SpaceProps space_props(const FiniteSpace& sp) {
    SpaceProps p;
    p.hausdorff = hausdorff_subspace(sp, Bitset::full(sp.size()));
    p.locally_hausdorff = true;
    for (int i = 0; i < sp.size() && p.locally_hausdorff; ++i)
        if (!hausdorff_subspace(sp, sp.min_nbhd(i))) p.locally_hausdorff = false;
    p.locally_compact = true;
    for (int i = 0; i < sp.size() && p.locally_compact; ++i)
        if (!is_compact(sp, sp.min_nbhd(i))) p.locally_compact = false;
    return p;
}

/// Compact containment via the sandwich definition: some compact C with
/// O inside C inside N.  In a finite space C = O always works, so this
/// reduces to inclusion; the shortcut below states that directly.
inline bool compact_containment_literal(const FiniteSpace& sp, const Bitset& o, const Bitset& n) {
    if (!o.subset_of(n)) return false;
    return is_compact(sp, o);
}

inline bool compact_containment(const FiniteSpace&, const Bitset& o, const Bitset& n) {
    return o.subset_of(n);
}

/// Candidate concrete local bi-pseudobasis: named non-empty opens of a
/// finite space, deduplicated by value.
struct ConcreteFamily {
    FiniteSpace space;
    std::vector<std::string> names;  // one canonical name per distinct set
    std::vector<Bitset> sets;

    static ConcreteFamily make(FiniteSpace sp, const std::vector<std::pair<std::string, Bitset>>& named) {
        ConcreteFamily f;
        f.space = std::move(sp);
        std::map<Bitset, std::string> dedup;
        for (const auto& [name, s] : named) {
            if (s.empty()) throw Error("AxiomViolation", "named set " + name + " is empty");
            if (!f.space.is_open(s)) throw Error("AxiomViolation", "named set " + name + " is not open");
            auto it = dedup.find(s);
            if (it == dedup.end() || name < it->second) dedup[s] = name;
        }
        for (const auto& [s, name] : dedup) {
            f.sets.push_back(s);
            f.names.push_back(name);
        }
        return f;
    }

    int count() const { return static_cast<int>(sets.size()); }
};

struct ClbpReport {
    bool locally_hausdorff = false;
    bool cover = false;
    bool point_filter = false;
    bool dense = false;
    bool separating = false;
    std::vector<std::string> witness;
    bool all() const { return locally_hausdorff && cover && point_filter && dense && separating; }
};

/// The five concrete local bi-pseudobasis axioms, each evaluated with a
/// witness on failure.  Point-Filter asks that the named sets through any
/// fixed point are non-empty, downward directed under compact containment,
/// and upward closed within the family.
inline ClbpReport check_concrete_clbp(const ConcreteFamily& f) {
    ClbpReport rep;
    const auto& sp = f.space;
    const int n = sp.size();
    const int m = f.count();

    rep.locally_hausdorff = true;
    for (int i = 0; i < m && rep.locally_hausdorff; ++i)
        if (!hausdorff_subspace(sp, f.sets[static_cast<std::size_t>(i)])) {
            rep.locally_hausdorff = false;
            rep.witness = {f.names[static_cast<std::size_t>(i)]};
        }

    rep.cover = true;
    for (int x = 0; x < n && rep.cover; ++x) {
        bool in = false;
        for (int i = 0; i < m; ++i) in = in || f.sets[static_cast<std::size_t>(i)].test(x);
        if (!in) {
            rep.cover = false;
            rep.witness = {sp.point_name(x)};
        }
    }

    rep.point_filter = true;
    for (int x = 0; x < n && rep.point_filter; ++x) {
        std::vector<int> px;
        for (int i = 0; i < m; ++i)
            if (f.sets[static_cast<std::size_t>(i)].test(x)) px.push_back(i);
        if (px.empty()) {
            rep.point_filter = false;
            rep.witness = {sp.point_name(x)};
            break;
        }
        for (int a : px) {
            for (int b : px) {
                bool found = false;
                for (int c : px)
                    if (compact_containment(sp, f.sets[static_cast<std::size_t>(c)], f.sets[static_cast<std::size_t>(a)]) &&
                        compact_containment(sp, f.sets[static_cast<std::size_t>(c)], f.sets[static_cast<std::size_t>(b)]))
                        found = true;
                if (!found) {
                    rep.point_filter = false;
                    rep.witness = {sp.point_name(x), f.names[static_cast<std::size_t>(a)],
                                   f.names[static_cast<std::size_t>(b)]};
                    break;
                }
            }
            if (!rep.point_filter) break;
        }
        if (!rep.point_filter) break;
        for (int a : px) {
            for (int i = 0; i < m; ++i) {
                bool up = compact_containment(sp, f.sets[static_cast<std::size_t>(a)], f.sets[static_cast<std::size_t>(i)]);
                bool has = f.sets[static_cast<std::size_t>(i)].test(x);
                if (up && !has) {
                    rep.point_filter = false;
                    rep.witness = {sp.point_name(x), f.names[static_cast<std::size_t>(a)],
                                   f.names[static_cast<std::size_t>(i)]};
                    break;
                }
            }
            if (!rep.point_filter) break;
        }
    }

    rep.dense = true;
    for (const auto& o : sp.opens()) {
        if (o.empty()) continue;
        bool found = false;
        for (int i = 0; i < m && !found; ++i)
            if (f.sets[static_cast<std::size_t>(i)].subset_of(o)) found = true;
        if (!found) {
            rep.dense = false;
            rep.witness.clear();
            o.for_each([&](int x) { rep.witness.push_back(sp.point_name(x)); });
            break;
        }
    }

    rep.separating = true;
    for (int x = 0; x < n && rep.separating; ++x)
        for (int y = x + 1; y < n && rep.separating; ++y) {
            bool distinguished = false;
            for (int i = 0; i < m && !distinguished; ++i)
                if (f.sets[static_cast<std::size_t>(i)].test(x) != f.sets[static_cast<std::size_t>(i)].test(y))
                    distinguished = true;
            if (!distinguished) {
                rep.separating = false;
                rep.witness = {sp.point_name(x), sp.point_name(y)};
            }
        }

    return rep;
}

/// The abstract relation a concrete family induces: carrier = the named
/// sets, ordered by compact containment.
inline TransRel induced_relation(const ConcreteFamily& f) {
    std::vector<std::pair<int, int>> prs;
    for (int a = 0; a < f.count(); ++a)
        for (int b = 0; b < f.count(); ++b)
            if (compact_containment(f.space, f.sets[static_cast<std::size_t>(a)],
                                    f.sets[static_cast<std::size_t>(b)]))
                prs.emplace_back(a, b);
    return TransRel::build_indexed(f.names, prs, false);
}

} // namespace ltg
