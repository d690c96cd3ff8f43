#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ltg/groupoid.hpp"
#include "ltg/order.hpp"

namespace ltg {

// ---------------------------------------------------------------------------
// Order generators
// ---------------------------------------------------------------------------

inline TransRel gen_arrow() {
    return TransRel::build({"a", "p"}, {{"a", "a"}, {"a", "p"}});
}

inline TransRel gen_diamond() {
    return TransRel::build({"a", "b", "p", "q"},
                           {{"a", "a"}, {"b", "b"}, {"p", "p"}, {"q", "q"},
                            {"a", "p"}, {"a", "q"}, {"b", "p"}, {"b", "q"}});
}

namespace detail {

inline std::string digit_set_name(unsigned mask) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i)
        if ((mask >> i) & 1u) {
            if (!first) s += ",";
            s += std::to_string(i + 1);
            first = false;
        }
    return s + "}";
}

} // namespace detail

/// Non-empty subsets of {1..n} ordered by inclusion.
inline TransRel gen_powerset(int n) {
    if (n < 1 || n > 6) throw Error("ParseError", "powerset:n needs 1 <= n <= 6");
    std::vector<std::string> names;
    std::vector<unsigned> masks;
    for (unsigned m = 1; m < (1u << n); ++m) {
        masks.push_back(m);
        names.push_back(detail::digit_set_name(m));
    }
    std::vector<std::pair<int, int>> prs;
    for (std::size_t a = 0; a < masks.size(); ++a)
        for (std::size_t b = 0; b < masks.size(); ++b)
            if ((masks[a] & ~masks[b]) == 0) prs.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return TransRel::build_indexed(std::move(names), prs, false);
}

/// Total order 1 < 2 < ... < n, reflexive.
inline TransRel gen_chain(int n) {
    if (n < 1 || n > 64) throw Error("ParseError", "chain:n needs 1 <= n <= 64");
    std::vector<std::string> names;
    for (int i = 1; i <= n; ++i) names.push_back(std::to_string(i));
    std::vector<std::pair<int, int>> prs;
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) prs.emplace_back(a, b);
    return TransRel::build_indexed(std::move(names), prs, false);
}

/// Finite b-ary tree of depth d under the strict ancestor order (lower
/// nodes are deeper), with self-loops on the leaves so the truncated
/// relation stays round.
inline TransRel gen_tree(int b, int d) {
    if (b < 2 || b > 9 || d < 1) throw Error("ParseError", "tree:b:d needs 2 <= b <= 9 and d >= 1");
    std::vector<std::string> names{"e"};  // root
    std::vector<int> depth{0};
    std::vector<int> parent{-1};
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (depth[i] == d) continue;
        for (int c = 1; c <= b; ++c) {
            names.push_back(names[i] == "e" ? std::to_string(c) : names[i] + std::to_string(c));
            depth.push_back(depth[i] + 1);
            parent.push_back(static_cast<int>(i));
        }
        if (names.size() > 4096) throw Error("TooLarge", "tree generator exceeds 4096 nodes");
    }
    std::vector<std::pair<int, int>> prs;
    for (std::size_t i = 0; i < names.size(); ++i) {
        for (int a = parent[i]; a != -1; a = parent[static_cast<std::size_t>(a)])
            prs.emplace_back(static_cast<int>(i), a);
        if (depth[i] == d) prs.emplace_back(static_cast<int>(i), static_cast<int>(i));
    }
    return TransRel::build_indexed(std::move(names), prs, false);
}

// ---------------------------------------------------------------------------
// Partial bijections and the symmetric inverse monoid
// ---------------------------------------------------------------------------

/// Partial bijection on {0..n-1}; img[i] = -1 when undefined.
struct PartialBij {
    int n = 0;
    std::vector<int> img;

    static PartialBij empty(int n) { return PartialBij{n, std::vector<int>(static_cast<std::size_t>(n), -1)}; }

    bool operator==(const PartialBij& o) const { return img == o.img; }

    std::string name() const {
        std::string s;
        for (int i = 0; i < n; ++i)
            if (img[static_cast<std::size_t>(i)] >= 0) {
                if (!s.empty()) s += ",";
                s += std::to_string(i + 1) + ">" + std::to_string(img[static_cast<std::size_t>(i)] + 1);
            }
        return s.empty() ? "0" : s;
    }

    /// (pq)(x) = p(q(x)): the right factor applies first.
    PartialBij compose_after(const PartialBij& q) const {
        PartialBij out = empty(n);
        for (int x = 0; x < n; ++x) {
            int y = q.img[static_cast<std::size_t>(x)];
            if (y >= 0 && img[static_cast<std::size_t>(y)] >= 0)
                out.img[static_cast<std::size_t>(x)] = img[static_cast<std::size_t>(y)];
        }
        return out;
    }

    PartialBij inverted() const {
        PartialBij out = empty(n);
        for (int x = 0; x < n; ++x)
            if (img[static_cast<std::size_t>(x)] >= 0)
                out.img[static_cast<std::size_t>(img[static_cast<std::size_t>(x)])] = x;
        return out;
    }

    bool restriction_of(const PartialBij& o) const {
        for (int x = 0; x < n; ++x)
            if (img[static_cast<std::size_t>(x)] >= 0 && img[static_cast<std::size_t>(x)] != o.img[static_cast<std::size_t>(x)])
                return false;
        return true;
    }

    unsigned domain_mask() const {
        unsigned m = 0;
        for (int x = 0; x < n; ++x)
            if (img[static_cast<std::size_t>(x)] >= 0) m |= 1u << x;
        return m;
    }
    unsigned range_mask() const {
        unsigned m = 0;
        for (int x = 0; x < n; ++x)
            if (img[static_cast<std::size_t>(x)] >= 0) m |= 1u << img[static_cast<std::size_t>(x)];
        return m;
    }
};

inline std::vector<PartialBij> all_partial_bijections(int n) {
    std::vector<PartialBij> out;
    std::vector<PartialBij> work{PartialBij::empty(n)};
    for (int x = 0; x < n; ++x) {
        std::vector<PartialBij> next;
        for (const auto& p : work) {
            next.push_back(p);  // x stays undefined
            for (int y = 0; y < n; ++y) {
                bool taken = false;
                for (int z = 0; z < x; ++z) taken = taken || p.img[static_cast<std::size_t>(z)] == y;
                if (!taken) {
                    PartialBij q = p;
                    q.img[static_cast<std::size_t>(x)] = y;
                    next.push_back(q);
                }
            }
        }
        work = std::move(next);
    }
    std::sort(work.begin(), work.end(),
              [](const PartialBij& a, const PartialBij& b) { return a.name() < b.name(); });
    return work;
}

/// The symmetric inverse monoid on n points as a full table, zero included.
inline InverseSemigroup isym_semigroup(int n) {
    if (n < 1 || n > 4) throw Error("ParseError", "isym:n needs 1 <= n <= 4");
    auto elems = all_partial_bijections(n);
    const int m = static_cast<int>(elems.size());
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(m));
    for (const auto& e : elems) names.push_back(e.name());
    auto find = [&](const PartialBij& p) {
        const std::string nm = p.name();
        auto it = std::lower_bound(names.begin(), names.end(), nm);
        return static_cast<int>(it - names.begin());
    };
    std::vector<int> table(static_cast<std::size_t>(m) * m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            table[static_cast<std::size_t>(a) * m + b] =
                find(elems[static_cast<std::size_t>(a)].compose_after(elems[static_cast<std::size_t>(b)]));
    int zero = find(PartialBij::empty(n));
    return InverseSemigroup::build_indexed(std::move(names), std::move(table), zero);
}

/// The ordered groupoid of non-zero partial bijections: product restricted
/// to matching domain and range, order by restriction.
inline OrderedGroupoid isym_groupoid(int n) {
    if (n < 1 || n > 4) throw Error("ParseError", "isym:n needs 1 <= n <= 4");
    auto all = all_partial_bijections(n);
    std::vector<PartialBij> elems;
    for (const auto& e : all)
        if (e.domain_mask() != 0) elems.push_back(e);
    const int m = static_cast<int>(elems.size());
    std::vector<std::string> names;
    for (const auto& e : elems) names.push_back(e.name());
    auto find = [&](const PartialBij& p) -> int {
        const std::string nm = p.name();
        auto it = std::lower_bound(names.begin(), names.end(), nm);
        if (it == names.end() || *it != nm) return -1;
        return static_cast<int>(it - names.begin());
    };
    std::vector<int> prod(static_cast<std::size_t>(m) * m, -1);
    std::vector<int> inv(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) {
        inv[static_cast<std::size_t>(a)] = find(elems[static_cast<std::size_t>(a)].inverted());
        for (int b = 0; b < m; ++b)
            if (elems[static_cast<std::size_t>(a)].domain_mask() == elems[static_cast<std::size_t>(b)].range_mask())
                prod[static_cast<std::size_t>(a) * m + b] =
                    find(elems[static_cast<std::size_t>(a)].compose_after(elems[static_cast<std::size_t>(b)]));
    }
    FiniteGroupoid g = FiniteGroupoid::build_indexed(names, std::move(prod), std::move(inv));
    std::vector<std::pair<int, int>> prs;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (elems[static_cast<std::size_t>(a)].restriction_of(elems[static_cast<std::size_t>(b)]))
                prs.emplace_back(a, b);
    TransRel order = TransRel::build_indexed(names, prs, false);
    return OrderedGroupoid::make(std::move(g), std::move(order));
}

// ---------------------------------------------------------------------------
// Pair groupoids
// ---------------------------------------------------------------------------

/// Pair groupoid on {1..n}: arrows (i,j) with (i,j)(j,k) = (i,k).
inline FiniteGroupoid pair_groupoid(int n) {
    if (n < 1 || n > 9) throw Error("ParseError", "pair groupoid needs 1 <= n <= 9");
    std::vector<std::string> names;
    auto id = [&](int i, int j) { return i * n + j; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            names.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    const int m = n * n;
    std::vector<int> prod(static_cast<std::size_t>(m) * m, -1);
    std::vector<int> inv(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            inv[static_cast<std::size_t>(id(i, j))] = id(j, i);
            for (int k = 0; k < n; ++k)
                prod[static_cast<std::size_t>(id(i, j)) * m + id(j, k)] = id(i, k);
        }
    return FiniteGroupoid::build_indexed(std::move(names), std::move(prod), std::move(inv));
}

/// Pair groupoid with the discrete (equality) order.
inline OrderedGroupoid pair_groupoid_og(int n) {
    FiniteGroupoid g = pair_groupoid(n);
    std::vector<std::pair<int, int>> prs;
    for (int i = 0; i < g.size(); ++i) prs.emplace_back(i, i);
    TransRel order = TransRel::build_indexed(g.names(), prs, false);
    return OrderedGroupoid::make(std::move(g), std::move(order));
}

// ---------------------------------------------------------------------------
// Generator name parsing
// ---------------------------------------------------------------------------

struct Generated {
    std::optional<TransRel> rel;
    std::optional<OrderedGroupoid> og;
};

/// name:params with name one of arrow | diamond | powerset | chain | tree | isym.
inline Generated generate(const std::string& name) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : name) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    auto arg = [&](std::size_t i) {
        if (i >= parts.size()) throw Error("ParseError", "generator " + name + " is missing a parameter");
        try {
            return std::stoi(parts[i]);
        } catch (...) {
            throw Error("ParseError", "bad generator parameter in " + name);
        }
    };
    Generated out;
    if (parts[0] == "arrow") out.rel = gen_arrow();
    else if (parts[0] == "diamond") out.rel = gen_diamond();
    else if (parts[0] == "powerset") out.rel = gen_powerset(arg(1));
    else if (parts[0] == "chain") out.rel = gen_chain(arg(1));
    else if (parts[0] == "tree") out.rel = gen_tree(arg(1), arg(2));
    else if (parts[0] == "isym") out.og = isym_groupoid(arg(1));
    else throw Error("ParseError", "unknown generator " + parts[0]);
    return out;
}

} // namespace ltg
