#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ltg/bitset.hpp"

namespace ltg {

/// Structured error carrying a stable machine-readable code
/// (DuplicateElement, UnknownElement, NotTransitive, ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// A finite carrier with a transitive relation.  `below(p)` is the cone
/// p^> = {q : q < p}, `above(p)` is p^< = {q : p < q}.  Transitivity is
/// enforced at construction; roundness is a reported property, not an
/// invariant, so non-round inputs can be diagnosed by classify().
class TransRel {
public:
    TransRel() = default;

    /// Builds from named elements and ordered pairs (a, b) meaning a < b.
    /// When `close` is set the transitive closure is taken; otherwise a
    /// missing composite pair raises NotTransitive with a witness triple.
    static TransRel build(const std::vector<std::string>& elements,
                          const std::vector<std::pair<std::string, std::string>>& pairs,
                          bool close = false) {
        TransRel r;
        r.names_ = elements;
        for (std::size_t i = 0; i < elements.size(); ++i) {
            if (elements[i].empty())
                throw Error("DuplicateElement", "empty element name");
            if (!r.index_.emplace(elements[i], static_cast<int>(i)).second)
                throw Error("DuplicateElement", elements[i]);
        }
        const int n = static_cast<int>(elements.size());
        r.below_.assign(n, Bitset(n));
        r.above_.assign(n, Bitset(n));
        for (const auto& [a, b] : pairs) {
            int ia = r.index(a);
            int ib = r.index(b);
            r.below_[ib].set(ia);
            r.above_[ia].set(ib);
        }
        if (close) {
            r.transitive_close();
        } else {
            r.verify_transitive();
        }
        return r;
    }

    /// Builds directly from index pairs; closes or verifies as above.
    static TransRel build_indexed(std::vector<std::string> elements,
                                  const std::vector<std::pair<int, int>>& pairs,
                                  bool close = false) {
        TransRel r;
        r.names_ = std::move(elements);
        const int n = static_cast<int>(r.names_.size());
        for (int i = 0; i < n; ++i) {
            if (!r.index_.emplace(r.names_[i], i).second)
                throw Error("DuplicateElement", r.names_[i]);
        }
        r.below_.assign(n, Bitset(n));
        r.above_.assign(n, Bitset(n));
        for (auto [a, b] : pairs) {
            r.below_[b].set(a);
            r.above_[a].set(b);
        }
        if (close) r.transitive_close(); else r.verify_transitive();
        return r;
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& names() const { return names_; }

    int index(const std::string& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) throw Error("UnknownElement", s);
        return it->second;
    }
    bool contains(const std::string& s) const { return index_.count(s) != 0; }

    bool less(int a, int b) const { return below_[static_cast<std::size_t>(b)].test(a); }
    const Bitset& below(int p) const { return below_[static_cast<std::size_t>(p)]; }
    const Bitset& above(int p) const { return above_[static_cast<std::size_t>(p)]; }

    Bitset all() const { return Bitset::full(size()); }

    /// All pairs (a, b) with a < b, sorted by index.
    std::vector<std::pair<int, int>> pairs() const {
        std::vector<std::pair<int, int>> v;
        for (int b = 0; b < size(); ++b)
            below_[static_cast<std::size_t>(b)].for_each([&](int a) { v.emplace_back(a, b); });
        std::sort(v.begin(), v.end());
        return v;
    }

    Bitset subset(const std::vector<std::string>& members) const {
        Bitset b(size());
        for (const auto& m : members) b.set(index(m));
        return b;
    }

    /// Restriction to a down-closed universe keeps all cones intact;
    /// this builds the honest sub-relation for an arbitrary universe.
    TransRel restricted(const Bitset& universe) const {
        std::vector<std::string> elems;
        std::vector<int> remap(static_cast<std::size_t>(size()), -1);
        universe.for_each([&](int i) {
            remap[static_cast<std::size_t>(i)] = static_cast<int>(elems.size());
            elems.push_back(name(i));
        });
        std::vector<std::pair<int, int>> prs;
        universe.for_each([&](int b) {
            Bitset cone = below(b) & universe;
            cone.for_each([&](int a) {
                prs.emplace_back(remap[static_cast<std::size_t>(a)],
                                 remap[static_cast<std::size_t>(b)]);
            });
        });
        return build_indexed(std::move(elems), prs, false);
    }

    bool operator==(const TransRel& o) const {
        return names_ == o.names_ && below_ == o.below_;
    }

private:
    void transitive_close() {
        // Iterated composition to fixpoint; deterministic in element order.
        const int n = size();
        bool changed = true;
        while (changed) {
            changed = false;
            for (int b = 0; b < n; ++b) {
                Bitset acc = below_[static_cast<std::size_t>(b)];
                below_[static_cast<std::size_t>(b)].for_each([&](int a) {
                    acc |= below_[static_cast<std::size_t>(a)];
                });
                if (acc != below_[static_cast<std::size_t>(b)]) {
                    below_[static_cast<std::size_t>(b)] = acc;
                    changed = true;
                }
            }
        }
        for (int a = 0; a < n; ++a) above_[static_cast<std::size_t>(a)] = Bitset(n);
        for (int b = 0; b < n; ++b)
            below_[static_cast<std::size_t>(b)].for_each([&](int a) {
                above_[static_cast<std::size_t>(a)].set(b);
            });
    }

    void verify_transitive() const {
        const int n = size();
        for (int c = 0; c < n; ++c) {
            below_[static_cast<std::size_t>(c)].for_each([&](int b) {
                below_[static_cast<std::size_t>(b)].for_each([&](int a) {
                    if (!below_[static_cast<std::size_t>(c)].test(a))
                        throw Error("NotTransitive",
                                    "witness (" + name(a) + ", " + name(b) + ", " + name(c) + ")");
                });
            });
        }
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<Bitset> below_;
    std::vector<Bitset> above_;
};

/// Q^> : everything below some member of Q.
inline Bitset cone_below(const TransRel& r, const Bitset& q) {
    Bitset out(r.size());
    q.for_each([&](int i) { out |= r.below(i); });
    return out;
}

/// Q^< : everything above some member of Q.
inline Bitset cone_above(const TransRel& r, const Bitset& q) {
    Bitset out(r.size());
    q.for_each([&](int i) { out |= r.above(i); });
    return out;
}

/// Refinement: every q in Q lies below some r in R.
inline bool refines(const TransRel& r, const Bitset& q, const Bitset& rr) {
    return q.subset_of(cone_below(r, rr));
}

/// Dense cover Q D R: everything below Q has something below it below R.
inline bool dense_cover(const TransRel& r, const Bitset& q, const Bitset& rr) {
    Bitset qb = cone_below(r, q);
    Bitset rb = cone_below(r, rr);
    bool ok = true;
    qb.for_each([&](int x) { ok = ok && r.below(x).intersects(rb); });
    return ok;
}

/// Compact cover Q C R: some finite F < R with Q D F.  On a finite
/// carrier D is monotone in its second argument, so F = R^> is the
/// maximal admissible witness and the search collapses to one check.
inline bool compact_cover(const TransRel& r, const Bitset& q, const Bitset& rr) {
    return dense_cover(r, q, cone_below(r, rr));
}

/// Exhaustive route for compact cover: tries every F contained in R^>.
/// Kept as the independent cross-check for the shortcut above.
inline bool compact_cover_exhaustive(const TransRel& r, const Bitset& q, const Bitset& rr) {
    std::vector<int> pool = cone_below(r, rr).indices();
    if (pool.size() > 20)
        throw Error("TooLarge", "exhaustive compact cover limited to |R^>| <= 20");
    const std::uint64_t total = std::uint64_t{1} << pool.size();
    for (std::uint64_t m = 0; m < total; ++m) {
        Bitset f(r.size());
        for (std::size_t k = 0; k < pool.size(); ++k)
            if ((m >> k) & 1u) f.set(pool[k]);
        if (dense_cover(r, q, f)) return true;
    }
    return false;
}

/// Q and R are disjoint when their cones do not meet.
inline bool disjoint(const TransRel& r, const Bitset& q, const Bitset& rr) {
    return !cone_below(r, q).intersects(cone_below(r, rr));
}

/// G^perp = {q : G and {q} have disjoint cones}.
inline Bitset perp_set(const TransRel& r, const Bitset& g) {
    Bitset gb = cone_below(r, g);
    Bitset out(r.size());
    for (int q = 0; q < r.size(); ++q)
        if (!r.below(q).intersects(gb)) out.set(q);
    return out;
}

/// Formal meet: intersection of the cones of Q (full carrier for empty Q).
inline Bitset formal_meet(const TransRel& r, const Bitset& q) {
    Bitset out = Bitset::full(r.size());
    q.for_each([&](int i) { out &= r.below(i); });
    return out;
}

/// Lower preorder p <= q iff p^> is contained in q^>; always reflexive
/// and transitive.
inline TransRel lower_preorder(const TransRel& r) {
    std::vector<std::pair<int, int>> prs;
    for (int p = 0; p < r.size(); ++p)
        for (int q = 0; q < r.size(); ++q)
            if (r.below(p).subset_of(r.below(q))) prs.emplace_back(p, q);
    return TransRel::build_indexed(r.names(), prs, false);
}

struct AxiomReport {
    bool round = false;
    bool pseudobasis = false;
    bool bi_pseudobasis = false;
    bool local_bi_pseudobasis = false;
    // Witness element names for each failed axiom, empty when the axiom holds.
    std::vector<std::string> round_witness;
    std::vector<std::string> pseudobasis_witness;
    std::vector<std::string> bi_witness;
    std::vector<std::string> local_witness;
};

namespace detail {

/// Elements of the pool whose cones are maximal under inclusion, one
/// representative per distinct cone.  Covers are antitone in the source,
/// so quantifiers over cone sources only need these.
inline std::vector<int> maximal_cone_elements(const TransRel& r, const Bitset& pool) {
    std::vector<int> candidates = pool.indices();
    std::vector<int> out;
    for (int x : candidates) {
        bool dominated = false;
        for (int y : candidates) {
            if (x == y) continue;
            const Bitset& cx = r.below(x);
            const Bitset& cy = r.below(y);
            if (cx == cy ? y < x : cx.subset_of(cy)) dominated = true;
        }
        if (!dominated) out.push_back(x);
    }
    return out;
}

} // namespace detail

/// Evaluates roundness and the pseudobasis / bi-pseudobasis /
/// local bi-pseudobasis axioms by direct quantifier evaluation.  The
/// local axiom is additionally evaluated through its equivalent
/// "pseudobasis + bounded meet preservation" form; any disagreement
/// between the two routes is an internal error.
inline AxiomReport classify(const TransRel& r) {
    AxiomReport rep;
    const int n = r.size();

    rep.round = true;
    for (int p = 0; p < n && rep.round; ++p) {
        if (r.below(p).empty()) {
            rep.round = false;
            rep.round_witness = {r.name(p)};
        }
    }

    // Primed sources range over maximal cones only; dominated ones follow
    // by the antitonicity of covers in the source.
    std::vector<std::vector<int>> max_below(static_cast<std::size_t>(n));
    for (int p = 0; p < n; ++p)
        max_below[static_cast<std::size_t>(p)] = detail::maximal_cone_elements(r, r.below(p));

    rep.pseudobasis = true;
    for (int p = 0; p < n && rep.pseudobasis; ++p) {
        for (int pp : max_below[static_cast<std::size_t>(p)]) {
            if (!compact_cover(r, r.below(pp), r.below(p))) {
                rep.pseudobasis = false;
                rep.pseudobasis_witness = {r.name(pp), r.name(p)};
                break;
            }
        }
    }

    rep.bi_pseudobasis = true;
    for (int p = 0; p < n && rep.bi_pseudobasis; ++p) {
        for (int q = 0; q < n && rep.bi_pseudobasis; ++q) {
            Bitset target = r.below(p) & r.below(q);
            for (int pp : max_below[static_cast<std::size_t>(p)]) {
                if (!rep.bi_pseudobasis) break;
                for (int qq : max_below[static_cast<std::size_t>(q)]) {
                    Bitset src = r.below(pp) & r.below(qq);
                    if (src.empty()) continue;
                    if (!compact_cover(r, src, target)) {
                        rep.bi_pseudobasis = false;
                        rep.bi_witness = {r.name(pp), r.name(qq), r.name(p), r.name(q)};
                        break;
                    }
                }
            }
        }
    }

    // Direct form: quantify r, s over the lower preorder below p; the
    // primed pair again ranges over maximal cones only.
    bool local = true;
    std::vector<std::string> local_wit;
    for (int p = 0; p < n && local; ++p) {
        std::vector<int> lowers;
        for (int x = 0; x < n; ++x)
            if (r.below(x).subset_of(r.below(p))) lowers.push_back(x);
        for (int a : lowers) {
            if (!local) break;
            for (int b : lowers) {
                if (!local) break;
                Bitset target = r.below(a) & r.below(b);
                for (int aa : max_below[static_cast<std::size_t>(a)]) {
                    if (!local) break;
                    for (int bb : max_below[static_cast<std::size_t>(b)]) {
                        Bitset src = r.below(aa) & r.below(bb);
                        if (src.empty()) continue;
                        if (!compact_cover(r, src, target)) {
                            local = false;
                            local_wit = {r.name(aa), r.name(bb), r.name(a), r.name(b), r.name(p)};
                            break;
                        }
                    }
                }
            }
        }
    }
    rep.local_bi_pseudobasis = local;
    rep.local_witness = local_wit;

    // Equivalent route: pseudobasis with meets preserved below a common bound.
    bool bounded_meets = true;
    for (int p = 0; p < n && bounded_meets; ++p) {
        std::vector<int> lowers = r.below(p).indices();
        for (int a : lowers) {
            if (!bounded_meets) break;
            for (int b : lowers) {
                if (!bounded_meets) break;
                for (int aa : max_below[static_cast<std::size_t>(a)]) {
                    if (!bounded_meets) break;
                    for (int bb : max_below[static_cast<std::size_t>(b)]) {
                        Bitset src = r.below(aa) & r.below(bb);
                        if (src.empty()) continue;
                        if (!compact_cover(r, src, r.below(a) & r.below(b))) {
                            bounded_meets = false;
                            break;
                        }
                    }
                }
            }
        }
    }
    if (rep.local_bi_pseudobasis != (rep.pseudobasis && bounded_meets))
        throw Error("InternalError",
                    "local bi-pseudobasis routes disagree on the same relation");

    // The implication chain bi => local => pseudo must never be contradicted.
    if ((rep.bi_pseudobasis && !rep.local_bi_pseudobasis) ||
        (rep.local_bi_pseudobasis && !rep.pseudobasis))
        throw Error("InternalError", "axiom implication chain violated");

    return rep;
}

} // namespace ltg
