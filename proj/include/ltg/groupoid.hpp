#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ltg/bitset.hpp"
#include "ltg/order.hpp"

namespace ltg {

/// Finite groupoid: partial product, total involutive inverse, with the
/// product defined exactly on composable pairs s(p) = r(q).
class FiniteGroupoid {
public:
    FiniteGroupoid() = default;

    static FiniteGroupoid build(const std::vector<std::string>& elements,
                                const std::vector<std::tuple<std::string, std::string, std::string>>& product_triples,
                                const std::vector<std::pair<std::string, std::string>>& inverse_pairs) {
        FiniteGroupoid g;
        g.names_ = elements;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (!g.index_.emplace(elements[i], static_cast<int>(i)).second)
                throw Error("DuplicateElement", elements[i]);
        const int n = g.size();
        g.prod_.assign(static_cast<std::size_t>(n) * n, -1);
        g.inv_.assign(static_cast<std::size_t>(n), -1);
        for (const auto& [a, b, ab] : product_triples) {
            int ia = g.index(a), ib = g.index(b), iab = g.index(ab);
            int& slot = g.prod_[static_cast<std::size_t>(ia) * n + ib];
            if (slot != -1 && slot != iab)
                throw Error("ProductDomainMismatch", "conflicting product for (" + a + ", " + b + ")");
            slot = iab;
        }
        for (const auto& [a, ai] : inverse_pairs) {
            int ia = g.index(a), iai = g.index(ai);
            if (g.inv_[static_cast<std::size_t>(ia)] != -1 && g.inv_[static_cast<std::size_t>(ia)] != iai)
                throw Error("BadInverse", "conflicting inverse for " + a);
            g.inv_[static_cast<std::size_t>(ia)] = iai;
        }
        g.validate();
        return g;
    }

    /// Indexed construction used by generators; same validation.
    static FiniteGroupoid build_indexed(std::vector<std::string> elements,
                                        std::vector<int> product_table,
                                        std::vector<int> inverse) {
        FiniteGroupoid g;
        g.names_ = std::move(elements);
        for (std::size_t i = 0; i < g.names_.size(); ++i)
            if (!g.index_.emplace(g.names_[i], static_cast<int>(i)).second)
                throw Error("DuplicateElement", g.names_[i]);
        g.prod_ = std::move(product_table);
        g.inv_ = std::move(inverse);
        g.validate();
        return g;
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& names() const { return names_; }
    int index(const std::string& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) throw Error("UnknownElement", s);
        return it->second;
    }

    bool composable(int a, int b) const { return prod_[static_cast<std::size_t>(a) * size() + b] != -1; }
    int product(int a, int b) const {
        int v = prod_[static_cast<std::size_t>(a) * size() + b];
        if (v == -1)
            throw Error("ProductDomainMismatch",
                        "product undefined on (" + name(a) + ", " + name(b) + ")");
        return v;
    }
    int inverse(int a) const { return inv_[static_cast<std::size_t>(a)]; }
    int range(int a) const { return r_[static_cast<std::size_t>(a)]; }
    int source(int a) const { return s_[static_cast<std::size_t>(a)]; }
    const Bitset& units() const { return units_; }
    bool is_unit(int a) const { return units_.test(a); }

    const std::vector<std::pair<int, int>>& composable_pairs() const { return g2_; }

    /// Elementwise inverse of a subset.
    Bitset inverse_set(const Bitset& a) const {
        Bitset out(size());
        a.for_each([&](int x) { out.set(inverse(x)); });
        return out;
    }

    /// Setwise product; undefined pairs contribute nothing.
    Bitset product_set(const Bitset& a, const Bitset& b) const {
        Bitset out(size());
        a.for_each([&](int x) {
            b.for_each([&](int y) {
                if (composable(x, y)) out.set(product(x, y));
            });
        });
        return out;
    }

    Bitset source_image(const Bitset& a) const {
        Bitset out(size());
        a.for_each([&](int x) { out.set(source(x)); });
        return out;
    }
    Bitset range_image(const Bitset& a) const {
        Bitset out(size());
        a.for_each([&](int x) { out.set(range(x)); });
        return out;
    }

private:
    void validate() {
        const int n = size();
        for (int a = 0; a < n; ++a) {
            if (inv_[static_cast<std::size_t>(a)] < 0)
                throw Error("BadInverse", "missing inverse for " + name(a));
            if (inv_[static_cast<std::size_t>(inv_[static_cast<std::size_t>(a)])] != a)
                throw Error("BadInverse", "inverse is not an involution at " + name(a));
        }
        r_.assign(static_cast<std::size_t>(n), -1);
        s_.assign(static_cast<std::size_t>(n), -1);
        for (int a = 0; a < n; ++a) {
            int ai = inv_[static_cast<std::size_t>(a)];
            int rr = prod_[static_cast<std::size_t>(a) * n + ai];
            int ss = prod_[static_cast<std::size_t>(ai) * n + a];
            if (rr < 0 || ss < 0)
                throw Error("ProductDomainMismatch", "p*p^-1 undefined for " + name(a));
            r_[static_cast<std::size_t>(a)] = rr;
            s_[static_cast<std::size_t>(a)] = ss;
        }
        // Product defined exactly on composable pairs.
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                bool defined = prod_[static_cast<std::size_t>(a) * n + b] != -1;
                bool should = s_[static_cast<std::size_t>(a)] == r_[static_cast<std::size_t>(b)];
                if (defined != should)
                    throw Error("ProductDomainMismatch",
                                "product on (" + name(a) + ", " + name(b) + ") " +
                                    (defined ? "defined off" : "missing on") + " the composable set");
                if (defined) g2_.emplace_back(a, b);
            }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (prod_[static_cast<std::size_t>(a) * n + b] == -1) continue;
                int ab = prod_[static_cast<std::size_t>(a) * n + b];
                for (int c = 0; c < n; ++c) {
                    int bc = prod_[static_cast<std::size_t>(b) * n + c];
                    if (bc == -1) continue;
                    int left = prod_[static_cast<std::size_t>(ab) * n + c];
                    int right = prod_[static_cast<std::size_t>(a) * n + bc];
                    if (left == -1 || right == -1 || left != right)
                        throw Error("NotAssociative",
                                    "witness (" + name(a) + ", " + name(b) + ", " + name(c) + ")");
                }
            }
        for (int a = 0; a < n; ++a) {
            int ai = inv_[static_cast<std::size_t>(a)];
            if (prod_[static_cast<std::size_t>(r_[static_cast<std::size_t>(a)]) * n + a] != a ||
                prod_[static_cast<std::size_t>(a) * n + s_[static_cast<std::size_t>(a)]] != a)
                throw Error("BadInverse", "pp^-1 or p^-1p fails to act neutrally at " + name(a));
            if (prod_[static_cast<std::size_t>(a) * n + prod_[static_cast<std::size_t>(ai) * n + a]] != a)
                throw Error("BadInverse", "p p^-1 p != p at " + name(a));
        }
        units_ = Bitset(n);
        for (int a = 0; a < n; ++a)
            if (r_[static_cast<std::size_t>(a)] == a && s_[static_cast<std::size_t>(a)] == a)
                units_.set(a);
        // Units act neutrally wherever composable.
        units_.for_each([&](int e) {
            for (int q = 0; q < n; ++q) {
                if (composable(e, q) && product(e, q) != q)
                    throw Error("BadInverse", "unit " + name(e) + " not left-neutral");
                if (composable(q, e) && product(q, e) != q)
                    throw Error("BadInverse", "unit " + name(e) + " not right-neutral");
            }
        });
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<int> prod_;
    std::vector<int> inv_;
    std::vector<int> r_, s_;
    Bitset units_;
    std::vector<std::pair<int, int>> g2_;
};

/// Report for the ordered-groupoid axioms, in both the preserve-and-reflect
/// form and the reduced primed form, plus their equivalence.
struct OrderedReport {
    bool product = false, inverse = false, support = false;
    bool product_reduced = false, inverse_reduced = false, support_reduced = false;
    bool equivalent_forms = false;   // (P & I & S) == (P' & I' & S')
    std::vector<std::string> witness;
    bool all() const { return product && inverse && support; }
};

/// Evaluates all six displayed ordered-groupoid conditions independently.
inline OrderedReport check_ordered(const FiniteGroupoid& g, const TransRel& order) {
    if (g.size() != order.size())
        throw Error("UnknownElement", "groupoid and order have different carriers");
    for (int i = 0; i < g.size(); ++i)
        if (g.name(i) != order.name(i))
            throw Error("UnknownElement", "groupoid and order disagree on element order");

    OrderedReport rep;
    const int n = g.size();
    auto witness = [&](std::initializer_list<int> xs) {
        std::vector<std::string> w;
        for (int x : xs) w.push_back(g.name(x));
        return w;
    };

    rep.product_reduced = true;
    for (auto [p, q] : g.composable_pairs()) {
        if (!rep.product_reduced) break;
        order.below(p).for_each([&](int pp) {
            if (!rep.product_reduced) return;
            order.below(q).for_each([&](int qq) {
                if (!rep.product_reduced) return;
                if (g.composable(pp, qq) && !order.less(g.product(pp, qq), g.product(p, q))) {
                    rep.product_reduced = false;
                    if (rep.witness.empty()) rep.witness = witness({pp, qq, p, q});
                }
            });
        });
    }

    rep.inverse_reduced = true;
    for (int p = 0; p < n && rep.inverse_reduced; ++p)
        order.below(p).for_each([&](int q) {
            if (rep.inverse_reduced && !order.less(g.inverse(q), g.inverse(p))) {
                rep.inverse_reduced = false;
                if (rep.witness.empty()) rep.witness = witness({q, p});
            }
        });

    rep.support_reduced = true;
    for (int p = 0; p < n && rep.support_reduced; ++p) {
        order.below(g.range(p)).for_each([&](int rr) {
            if (!rep.support_reduced) return;
            bool found = false;
            order.below(p).for_each([&](int q) { found = found || g.range(q) == rr; });
            if (!found) {
                rep.support_reduced = false;
                if (rep.witness.empty()) rep.witness = witness({rr, p});
            }
        });
    }

    // Full biconditional forms.
    rep.product = true;
    for (auto [p, q] : g.composable_pairs()) {
        if (!rep.product) break;
        int pq = g.product(p, q);
        for (int r = 0; r < n && rep.product; ++r) {
            bool lhs = order.less(r, pq);
            bool rhs = false;
            order.below(p).for_each([&](int pp) {
                if (rhs) return;
                order.below(q).for_each([&](int qq) {
                    if (!rhs && g.composable(pp, qq) && g.product(pp, qq) == r) rhs = true;
                });
            });
            if (lhs != rhs) rep.product = false;
        }
    }

    rep.inverse = true;
    for (int p = 0; p < n && rep.inverse; ++p)
        for (int r = 0; r < n && rep.inverse; ++r) {
            bool lhs = order.less(r, g.inverse(p));
            bool rhs = order.less(g.inverse(r), p);
            if (lhs != rhs) rep.inverse = false;
        }

    rep.support = true;
    for (int p = 0; p < n && rep.support; ++p)
        for (int r = 0; r < n && rep.support; ++r) {
            bool lhs = order.less(r, g.range(p));
            bool rhs = false;
            order.below(p).for_each([&](int q) { rhs = rhs || g.range(q) == r; });
            if (lhs != rhs) rep.support = false;
        }

    rep.equivalent_forms =
        (rep.product && rep.inverse && rep.support) ==
        (rep.product_reduced && rep.inverse_reduced && rep.support_reduced);
    return rep;
}

/// A groupoid paired with a transitive relation satisfying the ordered
/// groupoid axioms; validated at construction.
struct OrderedGroupoid {
    FiniteGroupoid groupoid;
    TransRel order;

    static OrderedGroupoid make(FiniteGroupoid g, TransRel rel) {
        auto rep = check_ordered(g, rel);
        if (!rep.all()) {
            std::string w;
            for (const auto& x : rep.witness) w += (w.empty() ? "" : ", ") + x;
            throw Error("AxiomViolation", "ordered groupoid axioms fail (witness: " + w + ")");
        }
        if (!rep.equivalent_forms)
            throw Error("TheoremCounterexample", "primed and unprimed axiom forms disagree");
        return OrderedGroupoid{std::move(g), std::move(rel)};
    }

    int size() const { return groupoid.size(); }
};

enum class RestrictSide { range, source };

/// The unique q < p with prescribed range (or source) unit e.
inline int restrict_element(const OrderedGroupoid& og, RestrictSide side, int e, int p) {
    const auto& g = og.groupoid;
    int target = side == RestrictSide::range ? g.range(p) : g.source(p);
    if (!og.order.less(e, target))
        throw Error("PreconditionFailed",
                    "unit " + g.name(e) + " is not below the " +
                        (side == RestrictSide::range ? "range" : "source") + " of " + g.name(p));
    int found = -1;
    bool unique = true;
    og.order.below(p).for_each([&](int q) {
        int u = side == RestrictSide::range ? g.range(q) : g.source(q);
        if (u == e) {
            if (found != -1 && found != q) unique = false;
            found = q;
        }
    });
    if (found == -1)
        throw Error("PreconditionFailed", "no restriction of " + g.name(p) + " at " + g.name(e));
    if (!unique)
        throw Error("NonUnique", "restriction of " + g.name(p) + " at " + g.name(e) + " is not unique");
    return found;
}

/// Inverse semigroup given by a full multiplication table.  The involution
/// is derived by solving gxg = g, xgx = x (unique in inverse semigroups);
/// an explicitly supplied star is cross-checked against the derived one.
class InverseSemigroup {
public:
    static InverseSemigroup build(const std::vector<std::string>& elements,
                                  const std::vector<std::vector<std::string>>& table,
                                  std::optional<std::string> zero = std::nullopt,
                                  const std::vector<std::pair<std::string, std::string>>* explicit_star = nullptr,
                                  bool strict = true) {
        InverseSemigroup s;
        s.names_ = elements;
        for (std::size_t i = 0; i < elements.size(); ++i)
            if (!s.index_.emplace(elements[i], static_cast<int>(i)).second)
                throw Error("DuplicateElement", elements[i]);
        const int n = s.size();
        if (static_cast<int>(table.size()) != n)
            throw Error("ParseError", "table must have one row per element");
        s.table_.assign(static_cast<std::size_t>(n) * n, -1);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(table[static_cast<std::size_t>(i)].size()) != n)
                throw Error("ParseError", "table row has wrong length");
            for (int j = 0; j < n; ++j)
                s.table_[static_cast<std::size_t>(i) * n + j] =
                    s.index(table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        if (zero) s.zero_ = s.index(*zero);
        s.derive_star(strict);
        if (explicit_star) {
            for (const auto& [a, ai] : *explicit_star)
                if (s.star_[static_cast<std::size_t>(s.index(a))] != s.index(ai))
                    throw Error("BadInverse", "explicit star disagrees with derived inverse at " + a);
        }
        if (strict) s.validate();
        return s;
    }

    static InverseSemigroup build_indexed(std::vector<std::string> elements,
                                          std::vector<int> table,
                                          std::optional<int> zero,
                                          bool strict = true) {
        InverseSemigroup s;
        s.names_ = std::move(elements);
        for (std::size_t i = 0; i < s.names_.size(); ++i)
            if (!s.index_.emplace(s.names_[i], static_cast<int>(i)).second)
                throw Error("DuplicateElement", s.names_[i]);
        s.table_ = std::move(table);
        s.zero_ = zero;
        s.derive_star(strict);
        if (strict) s.validate();
        return s;
    }

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
    const std::vector<std::string>& names() const { return names_; }
    int index(const std::string& s) const {
        auto it = index_.find(s);
        if (it == index_.end()) throw Error("UnknownElement", s);
        return it->second;
    }
    int product(int a, int b) const { return table_[static_cast<std::size_t>(a) * size() + b]; }
    int star(int a) const { return star_[static_cast<std::size_t>(a)]; }
    std::optional<int> zero() const { return zero_; }
    bool idempotent(int a) const { return product(a, a) == a; }

    /// p <= q iff pp^-1 = qp^-1.
    bool canonical_leq(int p, int q) const {
        int pi = star(p);
        return product(p, pi) == product(q, pi);
    }
    /// The other characterisation: p = pp^-1 q.
    bool canonical_leq_alt(int p, int q) const {
        return p == product(product(p, star(p)), q);
    }

private:
    void derive_star(bool strict) {
        const int n = size();
        star_.assign(static_cast<std::size_t>(n), -1);
        for (int g = 0; g < n; ++g) {
            int found = -1;
            for (int x = 0; x < n; ++x) {
                if (product(product(g, x), g) == g && product(product(x, g), x) == x) {
                    if (found != -1) {
                        if (strict)
                            throw Error("BadInverse", "multiple inverses for " + name(g));
                    } else {
                        found = x;
                    }
                }
            }
            if (found == -1) throw Error("BadInverse", "no inverse for " + name(g));
            star_[static_cast<std::size_t>(g)] = found;
        }
    }

    void validate() const {
        const int n = size();
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    if (product(product(a, b), c) != product(a, product(b, c)))
                        throw Error("NotAssociative",
                                    "witness (" + name(a) + ", " + name(b) + ", " + name(c) + ")");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (idempotent(a) && idempotent(b) && product(a, b) != product(b, a))
                    throw Error("BadInverse",
                                "idempotents " + name(a) + ", " + name(b) + " do not commute");
        if (zero_) {
            for (int a = 0; a < n; ++a)
                if (product(a, *zero_) != *zero_ || product(*zero_, a) != *zero_)
                    throw Error("BadInverse", "declared zero is not absorbing");
        }
    }

    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
    std::vector<int> table_;
    std::vector<int> star_;
    std::optional<int> zero_;
};

/// Canonical order pp^-1 = qp^-1 as a TransRel; the p = pp^-1 q
/// characterisation is evaluated alongside and must agree.
inline TransRel canonical_order(const InverseSemigroup& s, bool drop_zero) {
    std::vector<int> keep;
    for (int i = 0; i < s.size(); ++i)
        if (!(drop_zero && s.zero() && *s.zero() == i)) keep.push_back(i);
    std::vector<std::string> names;
    names.reserve(keep.size());
    for (int i : keep) names.push_back(s.name(i));
    std::vector<std::pair<int, int>> prs;
    for (std::size_t a = 0; a < keep.size(); ++a)
        for (std::size_t b = 0; b < keep.size(); ++b) {
            bool main = s.canonical_leq(keep[a], keep[b]);
            bool alt = s.canonical_leq_alt(keep[a], keep[b]);
            if (main != alt)
                throw Error("CharacterisationMismatch",
                            "pp^-1=qp^-1 and p=pp^-1q disagree on (" + s.name(keep[a]) + ", " +
                                s.name(keep[b]) + ")");
            if (main) prs.emplace_back(static_cast<int>(a), static_cast<int>(b));
        }
    return TransRel::build_indexed(std::move(names), prs, false);
}

/// Builds the ordered groupoid on S^> (elements with something below them)
/// from an inverse semigroup and a transitive relation satisfying the
/// strengthening / product / inverse premises.  The premises are checked on
/// instances whose semigroup products stay inside the relation's carrier;
/// products falling outside (typically onto the zero) are exempt.
inline OrderedGroupoid semigroup_to_ordered_groupoid(const InverseSemigroup& s, const TransRel& rel) {
    std::vector<int> to_s(static_cast<std::size_t>(rel.size()));
    for (int i = 0; i < rel.size(); ++i) to_s[static_cast<std::size_t>(i)] = s.index(rel.name(i));
    std::vector<int> to_rel(static_cast<std::size_t>(s.size()), -1);
    for (int i = 0; i < rel.size(); ++i) to_rel[static_cast<std::size_t>(to_s[static_cast<std::size_t>(i)])] = i;

    auto rel_pairs = rel.pairs();
    for (auto [p, q] : rel_pairs) {
        if (!s.canonical_leq(to_s[static_cast<std::size_t>(p)], to_s[static_cast<std::size_t>(q)]))
            throw Error("PremiseViolation",
                        "relation does not strengthen the canonical order at (" + rel.name(p) +
                            ", " + rel.name(q) + ")");
        int pi = s.star(to_s[static_cast<std::size_t>(p)]);
        int qi = s.star(to_s[static_cast<std::size_t>(q)]);
        int rp = to_rel[static_cast<std::size_t>(pi)], rq = to_rel[static_cast<std::size_t>(qi)];
        if (rp < 0 || rq < 0 || !rel.less(rp, rq))
            throw Error("PremiseViolation",
                        "inverses not preserved at (" + rel.name(p) + ", " + rel.name(q) + ")");
    }
    for (auto [p, p2] : rel_pairs)
        for (auto [q, q2] : rel_pairs) {
            int pq = s.product(to_s[static_cast<std::size_t>(p)], to_s[static_cast<std::size_t>(q)]);
            int p2q2 = s.product(to_s[static_cast<std::size_t>(p2)], to_s[static_cast<std::size_t>(q2)]);
            int rpq = to_rel[static_cast<std::size_t>(pq)];
            if (rpq < 0) continue;
            int rp2q2 = to_rel[static_cast<std::size_t>(p2q2)];
            if (rp2q2 < 0 || !rel.less(rpq, rp2q2))
                throw Error("PremiseViolation",
                            "products not preserved at (" + rel.name(p) + " < " + rel.name(p2) +
                                ", " + rel.name(q) + " < " + rel.name(q2) + ")");
        }

    // Carrier: elements of the relation with non-empty down cone.
    std::vector<int> keep;
    for (int i = 0; i < rel.size(); ++i)
        if (!rel.below(i).empty()) keep.push_back(i);
    std::vector<int> remap(static_cast<std::size_t>(rel.size()), -1);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        remap[static_cast<std::size_t>(keep[k])] = static_cast<int>(k);
        names.push_back(rel.name(keep[k]));
    }
    const int m = static_cast<int>(keep.size());
    std::vector<int> prod(static_cast<std::size_t>(m) * m, -1);
    std::vector<int> inv(static_cast<std::size_t>(m), -1);
    for (int a = 0; a < m; ++a) {
        int sa = to_s[static_cast<std::size_t>(keep[static_cast<std::size_t>(a)])];
        int st = s.star(sa);
        int ri = to_rel[static_cast<std::size_t>(st)];
        int rr = ri < 0 ? -1 : remap[static_cast<std::size_t>(ri)];
        if (rr < 0)
            throw Error("PremiseViolation", "carrier not closed under inverse at " + s.name(sa));
        inv[static_cast<std::size_t>(a)] = rr;
        for (int b = 0; b < m; ++b) {
            int sb = to_s[static_cast<std::size_t>(keep[static_cast<std::size_t>(b)])];
            // Restricted product: defined exactly when p^-1 p = q q^-1.
            if (s.product(s.star(sa), sa) != s.product(sb, s.star(sb))) continue;
            int ab = s.product(sa, sb);
            int ra = to_rel[static_cast<std::size_t>(ab)];
            int rp = ra < 0 ? -1 : remap[static_cast<std::size_t>(ra)];
            if (rp < 0)
                throw Error("PremiseViolation",
                            "carrier not closed under the restricted product at (" + s.name(sa) +
                                ", " + s.name(sb) + ")");
            prod[static_cast<std::size_t>(a) * m + b] = rp;
        }
    }
    FiniteGroupoid g = FiniteGroupoid::build_indexed(names, std::move(prod), std::move(inv));

    std::vector<std::pair<int, int>> prs;
    for (auto [a, b] : rel_pairs) {
        int ra = remap[static_cast<std::size_t>(a)], rb = remap[static_cast<std::size_t>(b)];
        if (ra >= 0 && rb >= 0) prs.emplace_back(ra, rb);
    }
    TransRel order = TransRel::build_indexed(names, prs, false);
    return OrderedGroupoid::make(std::move(g), std::move(order));
}

/// Downward closed bisections of an ordered groupoid with their setwise
/// inverse-semigroup structure, inclusion order and the strong order
/// B << C  iff  B < c for some single c in C.
struct BisectionSemigroup {
    std::vector<Bitset> bisections;          // non-empty, canonically sorted
    std::vector<std::string> names;          // "{a,b}" style member lists
    std::vector<std::vector<int>> product;   // index into bisections, -1 = empty product
    std::vector<int> star;
    std::vector<std::pair<int, int>> inclusion;
    std::vector<std::pair<int, int>> strong; // the << relation
    bool element_map_injective = true;       // p |-> p^> over the groupoid
    int strong_converse_failures = 0;        // p^> << q^> without p < q
};

namespace detail {

inline bool is_bisection(const FiniteGroupoid& g, const Bitset& b) {
    std::vector<int> seen_r, seen_s;
    bool ok = true;
    b.for_each([&](int x) {
        if (!ok) return;
        for (int y : seen_r) if (y == g.range(x)) { ok = false; return; }
        for (int y : seen_s) if (y == g.source(x)) { ok = false; return; }
        seen_r.push_back(g.range(x));
        seen_s.push_back(g.source(x));
    });
    return ok;
}

inline void enumerate_down_closed_bisections(const OrderedGroupoid& og,
                                             std::vector<Bitset>& out,
                                             std::uint64_t node_cap = (1ull << 22)) {
    const int n = og.size();
    // Mutual-cone classes must be included or excluded together.
    std::vector<int> cls(static_cast<std::size_t>(n), -1);
    std::vector<Bitset> class_members;
    for (int i = 0; i < n; ++i) {
        if (cls[static_cast<std::size_t>(i)] != -1) continue;
        int id = static_cast<int>(class_members.size());
        Bitset m(n);
        m.set(i);
        for (int j = i + 1; j < n; ++j)
            if (og.order.less(i, j) && og.order.less(j, i)) m.set(j);
        m.for_each([&](int j) { cls[static_cast<std::size_t>(j)] = id; });
        class_members.push_back(m);
    }
    const int k = static_cast<int>(class_members.size());
    // Topological order over classes: everything in a class's cone must be
    // decided before the class itself (Kahn, smallest index first).
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(k));
    std::vector<int> indeg(static_cast<std::size_t>(k), 0);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            if (a == b) continue;
            int ra = class_members[static_cast<std::size_t>(a)].first();
            int rb = class_members[static_cast<std::size_t>(b)].first();
            if (og.order.less(ra, rb)) {
                succ[static_cast<std::size_t>(a)].push_back(b);
                ++indeg[static_cast<std::size_t>(b)];
            }
        }
    std::vector<int> order_idx;
    order_idx.reserve(static_cast<std::size_t>(k));
    std::set<int> ready;
    for (int i = 0; i < k; ++i)
        if (indeg[static_cast<std::size_t>(i)] == 0) ready.insert(i);
    while (!ready.empty()) {
        int c = *ready.begin();
        ready.erase(ready.begin());
        order_idx.push_back(c);
        for (int d : succ[static_cast<std::size_t>(c)])
            if (--indeg[static_cast<std::size_t>(d)] == 0) ready.insert(d);
    }
    if (static_cast<int>(order_idx.size()) != k)
        throw Error("InternalError", "class condensation left a cycle");

    std::uint64_t nodes = 0;
    Bitset current(n);
    auto rec = [&](auto&& self, int pos) -> void {
        if (++nodes > node_cap) throw Error("TooLarge", "bisection enumeration exceeded node cap");
        if (pos == k) {
            if (current.any()) out.push_back(current);
            return;
        }
        int c = order_idx[static_cast<std::size_t>(pos)];
        const Bitset& mem = class_members[static_cast<std::size_t>(c)];
        // Exclude.
        self(self, pos + 1);
        // Include, if down-closure and injectivity survive.
        int rep0 = mem.first();
        Bitset need = og.order.below(rep0);
        if ((need - current).subset_of(mem)) {
            Bitset trial = current | mem;
            if (is_bisection(og.groupoid, trial)) {
                Bitset saved = current;
                current = trial;
                self(self, pos + 1);
                current = saved;
            }
        }
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
}

inline std::string member_list_name(const FiniteGroupoid& g, const Bitset& b) {
    std::vector<std::string> parts;
    b.for_each([&](int i) { parts.push_back(g.name(i)); });
    std::sort(parts.begin(), parts.end());
    std::string s = "{";
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
    return s + "}";
}

} // namespace detail

/// Enumerates B^>(G) and verifies the laws of p |-> p^>:
/// p^-1^> = (p^>)^-1, (pq)^> = p^> q^> on composable pairs, and
/// p < q implies p^> << q^>.
inline BisectionSemigroup bisection_semigroup(const OrderedGroupoid& og) {
    BisectionSemigroup bs;
    detail::enumerate_down_closed_bisections(og, bs.bisections);
    const auto& g = og.groupoid;
    const int m = static_cast<int>(bs.bisections.size());
    std::map<Bitset, int> lookup;
    for (int i = 0; i < m; ++i) {
        lookup[bs.bisections[static_cast<std::size_t>(i)]] = i;
        bs.names.push_back(detail::member_list_name(g, bs.bisections[static_cast<std::size_t>(i)]));
    }

    bs.product.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m), -1));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            Bitset p = g.product_set(bs.bisections[static_cast<std::size_t>(a)],
                                     bs.bisections[static_cast<std::size_t>(b)]);
            if (p.empty()) continue;
            auto it = lookup.find(p);
            if (it == lookup.end())
                throw Error("TheoremCounterexample",
                            "setwise product of down-closed bisections left the family");
            bs.product[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = it->second;
        }
    for (int a = 0; a < m; ++a) {
        Bitset inv = g.inverse_set(bs.bisections[static_cast<std::size_t>(a)]);
        auto it = lookup.find(inv);
        if (it == lookup.end())
            throw Error("TheoremCounterexample", "inverse of a down-closed bisection left the family");
        bs.star.push_back(it->second);
    }

    // The family with an adjoined zero must validate as an inverse semigroup.
    {
        std::vector<std::string> names = bs.names;
        names.push_back("0");
        const int nz = m;
        std::vector<int> table(static_cast<std::size_t>(m + 1) * (m + 1), nz);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                int v = bs.product[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                table[static_cast<std::size_t>(a) * (m + 1) + b] = v < 0 ? nz : v;
            }
        InverseSemigroup::build_indexed(std::move(names), std::move(table), nz);
    }

    auto leq = [&](int a, int b) {
        return bs.bisections[static_cast<std::size_t>(a)].subset_of(bs.bisections[static_cast<std::size_t>(b)]);
    };
    auto strong = [&](int a, int b) {
        bool found = false;
        bs.bisections[static_cast<std::size_t>(b)].for_each([&](int c) {
            if (found) return;
            bool all = true;
            bs.bisections[static_cast<std::size_t>(a)].for_each([&](int x) {
                all = all && og.order.less(x, c);
            });
            found = all;
        });
        return found;
    };
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (leq(a, b)) bs.inclusion.emplace_back(a, b);
            if (strong(a, b)) bs.strong.emplace_back(a, b);
        }

    // Laws of the cone map.
    std::map<Bitset, int> seen;
    for (int p = 0; p < g.size(); ++p) {
        Bitset cone = og.order.below(p);
        if (cone.any()) {
            auto [it, fresh] = seen.emplace(cone, p);
            if (!fresh) bs.element_map_injective = false;
        }
        Bitset lhs = og.order.below(g.inverse(p));
        if (lhs != g.inverse_set(cone))
            throw Error("TheoremCounterexample", "p^-1^> != (p^>)^-1 at " + g.name(p));
    }
    for (auto [p, q] : g.composable_pairs()) {
        Bitset lhs = og.order.below(g.product(p, q));
        Bitset rhs = g.product_set(og.order.below(p), og.order.below(q));
        if (lhs != rhs)
            throw Error("TheoremCounterexample",
                        "(pq)^> != p^> q^> at (" + g.name(p) + ", " + g.name(q) + ")");
    }
    for (int p = 0; p < g.size(); ++p)
        for (int q = 0; q < g.size(); ++q) {
            if (og.order.below(p).empty() || og.order.below(q).empty()) continue;
            auto ip = lookup.find(og.order.below(p));
            auto iq = lookup.find(og.order.below(q));
            if (ip == lookup.end() || iq == lookup.end())
                throw Error("TheoremCounterexample", "element cone is not a bisection");
            bool st = strong(ip->second, iq->second);
            if (og.order.less(p, q) && !st)
                throw Error("TheoremCounterexample",
                            "p < q but p^> not << q^> at (" + g.name(p) + ", " + g.name(q) + ")");
            if (st && !og.order.less(p, q)) ++bs.strong_converse_failures;
        }
    return bs;
}

} // namespace ltg
