#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ltg/bitset.hpp"
#include "ltg/groupoid.hpp"
#include "ltg/order.hpp"
#include "ltg/spectrum.hpp"

namespace ltg {

struct CosetCandidate {
    bool unit_directed = false;
    bool atlas = false;
    bool coset = false;
    bool filter = false;
};

/// Unit-directed: both unit images are directed and A is closed under
/// restricting any member to the source (resp. range) unit of another.
inline bool is_unit_directed(const OrderedGroupoid& og, const Bitset& a) {
    const auto& g = og.groupoid;
    if (!is_directed(og.order, g.range_image(a)) || !is_directed(og.order, g.source_image(a)))
        return false;
    bool ok = true;
    a.for_each([&](int x) {
        if (!ok) return;
        a.for_each([&](int y) {
            if (!ok) return;
            if (og.order.less(g.source(y), g.source(x)) &&
                !a.test(restrict_element(og, RestrictSide::source, g.source(y), x)))
                ok = false;
            if (ok && og.order.less(g.range(y), g.range(x)) &&
                !a.test(restrict_element(og, RestrictSide::range, g.range(y), x)))
                ok = false;
        });
    });
    return ok;
}

inline CosetCandidate subset_kind(const OrderedGroupoid& og, const Bitset& a) {
    const auto& g = og.groupoid;
    CosetCandidate c;
    c.unit_directed = is_unit_directed(og, a);
    Bitset aia = g.product_set(g.product_set(a, g.inverse_set(a)), a);
    c.atlas = c.unit_directed && aia.subset_of(a);
    c.coset = c.atlas && cone_above(og.order, a).subset_of(a);
    c.filter = is_filter(og.order, a);
    return c;
}

/// Up-closure of an atlas is a coset; checked, with a violation surfacing
/// as a theorem counterexample.
inline Bitset up_closure(const OrderedGroupoid& og, const Bitset& a) {
    if (!subset_kind(og, a).atlas) throw Error("NotAtlas", "up_closure needs an atlas");
    Bitset up = cone_above(og.order, a) | a;
    if (!subset_kind(og, up).coset)
        throw Error("TheoremCounterexample", "up-closure of an atlas failed to be a coset");
    return up;
}

namespace detail {

/// Joint closure under up-closure, AA^-1A products and restriction to
/// smaller source/range units.  Cosets are exactly the non-empty closed
/// sets whose unit images are directed.
inline Bitset coset_closure(const OrderedGroupoid& og, Bitset b) {
    const auto& g = og.groupoid;
    bool changed = true;
    while (changed) {
        Bitset before = b;
        b |= cone_above(og.order, b);
        b |= g.product_set(g.product_set(b, g.inverse_set(b)), b);
        Bitset adds(g.size());
        b.for_each([&](int x) {
            b.for_each([&](int y) {
                if (og.order.less(g.source(y), g.source(x)))
                    adds.set(restrict_element(og, RestrictSide::source, g.source(y), x));
                if (og.order.less(g.range(y), g.range(x)))
                    adds.set(restrict_element(og, RestrictSide::range, g.range(y), x));
            });
        });
        b |= adds;
        changed = b != before;
    }
    return b;
}

/// Ganter's next-closure enumeration of all closed sets.
template <typename Closure>
inline std::vector<Bitset> all_closed_sets(int n, Closure&& close, std::size_t cap = 1u << 20) {
    std::vector<Bitset> out;
    Bitset a = close(Bitset(n));
    out.push_back(a);
    while (true) {
        bool advanced = false;
        for (int i = n - 1; i >= 0 && !advanced; --i) {
            if (a.test(i)) continue;
            Bitset seed(n);
            for (int j = 0; j < i; ++j)
                if (a.test(j)) seed.set(j);
            seed.set(i);
            Bitset b = close(seed);
            bool lectic = true;
            for (int j = 0; j < i && lectic; ++j)
                if (b.test(j) && !a.test(j)) lectic = false;
            if (lectic) {
                a = b;
                out.push_back(a);
                advanced = true;
            }
        }
        if (!advanced) break;
        if (out.size() > cap) throw Error("TooLarge", "closed set enumeration exceeded cap");
    }
    return out;
}

} // namespace detail

/// All non-empty cosets, canonically sorted.
inline std::vector<Bitset> enumerate_cosets(const OrderedGroupoid& og) {
    auto closed = detail::all_closed_sets(
        og.size(), [&](Bitset b) { return detail::coset_closure(og, std::move(b)); });
    std::vector<Bitset> out;
    const auto& g = og.groupoid;
    for (auto& c : closed) {
        if (!c.any()) continue;
        if (is_directed(og.order, g.range_image(c)) && is_directed(og.order, g.source_image(c)))
            out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Exhaustive oracle for the coset list, usable for small carriers.
inline std::vector<Bitset> enumerate_cosets_exhaustive(const OrderedGroupoid& og) {
    if (og.size() > 16) throw Error("TooLarge", "exhaustive coset enumeration limited to 16 elements");
    std::vector<Bitset> out;
    const std::uint64_t total = std::uint64_t{1} << og.size();
    for (std::uint64_t m = 1; m < total; ++m) {
        Bitset b(og.size());
        for (int k = 0; k < og.size(); ++k)
            if ((m >> k) & 1u) b.set(k);
        if (subset_kind(og, b).coset) out.push_back(b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// The coset groupoid: product (A, B) -> (AB)^< when (A^-1A)^< = (BB^-1)^<,
/// inverse elementwise.  Also records the filter ideal F(G) and verifies
/// the unit characterisation and the ideal law.
struct CosetGroupoid {
    std::vector<Bitset> cosets;
    FiniteGroupoid groupoid;
    Bitset filters;        // F(G) as coset indices
    Bitset locally_tight;  // L(G) as coset indices
};

inline CosetGroupoid coset_groupoid(const OrderedGroupoid& og) {
    CosetGroupoid cg;
    cg.cosets = enumerate_cosets(og);
    const auto& g = og.groupoid;
    const int m = static_cast<int>(cg.cosets.size());
    std::map<Bitset, int> lookup;
    for (int i = 0; i < m; ++i) lookup[cg.cosets[static_cast<std::size_t>(i)]] = i;

    auto find = [&](const Bitset& b, const char* what) {
        auto it = lookup.find(b);
        if (it == lookup.end())
            throw Error("GroupoidLawViolation", std::string(what) + " is not a coset");
        return it->second;
    };

    std::vector<int> su(static_cast<std::size_t>(m)), ru(static_cast<std::size_t>(m)), inv(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const Bitset& a = cg.cosets[static_cast<std::size_t>(i)];
        Bitset ai = g.inverse_set(a);
        su[static_cast<std::size_t>(i)] = find(cone_above(og.order, g.product_set(ai, a)), "(A^-1 A)^<");
        ru[static_cast<std::size_t>(i)] = find(cone_above(og.order, g.product_set(a, ai)), "(A A^-1)^<");
        inv[static_cast<std::size_t>(i)] = find(ai, "A^-1");
    }

    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        names.push_back(detail::member_list_name(g, cg.cosets[static_cast<std::size_t>(i)]));
    std::vector<int> prod(static_cast<std::size_t>(m) * m, -1);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            if (su[static_cast<std::size_t>(a)] != ru[static_cast<std::size_t>(b)]) continue;
            Bitset ab = cone_above(og.order, g.product_set(cg.cosets[static_cast<std::size_t>(a)],
                                                           cg.cosets[static_cast<std::size_t>(b)]));
            prod[static_cast<std::size_t>(a) * m + b] = find(ab, "(AB)^<");
        }
    try {
        cg.groupoid = FiniteGroupoid::build_indexed(names, std::move(prod), std::move(inv));
    } catch (const Error& e) {
        throw Error("GroupoidLawViolation", e.what());
    }

    cg.filters = Bitset(m);
    cg.locally_tight = Bitset(m);
    for (int i = 0; i < m; ++i) {
        const Bitset& a = cg.cosets[static_cast<std::size_t>(i)];
        if (is_filter(og.order, a)) {
            cg.filters.set(i);
            if (is_locally_tight(og.order, a)) cg.locally_tight.set(i);
        }
        bool unit = cg.groupoid.is_unit(i);
        bool meets_units = a.intersects(g.units());
        if (unit != meets_units)
            throw Error("TheoremCounterexample",
                        "unit characterisation fails at " + names[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < m; ++i) {
        bool f = cg.filters.test(i);
        if (f != cg.filters.test(su[static_cast<std::size_t>(i)]) ||
            f != cg.filters.test(ru[static_cast<std::size_t>(i)]))
            throw Error("TheoremCounterexample",
                        "filter ideal law fails at " + names[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < m; ++i) {
        if (!cg.filters.test(i)) continue;
        bool lt = cg.locally_tight.test(i);
        if (lt != cg.locally_tight.test(su[static_cast<std::size_t>(i)]))
            throw Error("TheoremCounterexample",
                        "locally tight ideal law fails at " + names[static_cast<std::size_t>(i)]);
    }
    return cg;
}

} // namespace ltg
