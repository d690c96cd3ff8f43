#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ltg/generators.hpp"
#include "ltg/groupoid.hpp"
#include "ltg/order.hpp"
#include "ltg/spectrum.hpp"

namespace ltg {

/// Deterministic RNG: mt19937_64 is fully specified by the standard, and
/// bounded draws use rejection sampling so results are identical across
/// platforms and library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

private:
    std::mt19937_64 eng_;
};

namespace detail {

inline std::vector<std::string> harness_names(int n) {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    return names;
}

inline bool mask_transitive(int n, std::uint64_t mask) {
    auto has = [&](int a, int b) { return (mask >> (a * n + b)) & 1u; };
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (!has(a, b)) continue;
            for (int c = 0; c < n; ++c)
                if (has(b, c) && !has(a, c)) return false;
        }
    return true;
}

inline bool mask_round(int n, std::uint64_t mask) {
    for (int b = 0; b < n; ++b) {
        bool any = false;
        for (int a = 0; a < n; ++a) any = any || ((mask >> (a * n + b)) & 1u);
        if (!any) return false;
    }
    return true;
}

inline TransRel rel_from_mask(int n, std::uint64_t mask) {
    std::vector<std::pair<int, int>> prs;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if ((mask >> (a * n + b)) & 1u) prs.emplace_back(a, b);
    return TransRel::build_indexed(harness_names(n), prs, false);
}

} // namespace detail

/// Every labeled transitive round relation on n elements (exhaustive).
inline std::vector<TransRel> enumerate_transitive_round(int n) {
    if (n < 1 || n > 4) throw Error("TooLarge", "exhaustive enumeration limited to 4 elements");
    std::vector<TransRel> out;
    const std::uint64_t total = std::uint64_t{1} << (n * n);
    for (std::uint64_t m = 0; m < total; ++m)
        if (detail::mask_transitive(n, m) && detail::mask_round(n, m))
            out.push_back(detail::rel_from_mask(n, m));
    return out;
}

/// Seeded sample of transitive round relations on n elements: random pair
/// sets are transitively closed, with non-round draws rejected.
inline std::vector<TransRel> sample_transitive_round(int n, int count, Rng& rng) {
    if (n < 1 || n > 8) throw Error("TooLarge", "sampling limited to 8 elements");
    std::vector<TransRel> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > count * 1000) throw Error("TooLarge", "sampling failed to find round relations");
        std::uint64_t npairs = rng.bounded(static_cast<std::uint64_t>(n) * n + 1);
        std::vector<std::pair<int, int>> prs;
        for (std::uint64_t k = 0; k < npairs; ++k) {
            int a = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
            int b = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
            prs.emplace_back(a, b);
        }
        TransRel r = TransRel::build_indexed(detail::harness_names(n), prs, true);
        bool round = true;
        for (int i = 0; i < n; ++i) round = round && r.below(i).any();
        if (round) out.push_back(std::move(r));
    }
    return out;
}

struct HarnessResult {
    std::uint64_t enumerated = 0;  // all transitive round instances visited
    std::uint64_t checked = 0;     // instances passing the theorem's precondition
    std::vector<std::pair<TransRel, EquivalenceReport>> inconsistencies;
};

/// Runs one equivalence theorem over the exhaustive instances up to size 3
/// and seeded samples at sizes 4..max_size.
inline HarnessResult run_equivalence_harness(const std::string& theorem, int max_size, int samples,
                                             std::uint64_t seed) {
    HarnessResult res;
    Rng rng(seed);
    auto visit = [&](const TransRel& r) {
        ++res.enumerated;
        auto rep = classify(r);
        bool gate = theorem == "meet" ? (rep.round && rep.pseudobasis)
                                      : (rep.round && rep.local_bi_pseudobasis);
        if (!gate) return;
        ++res.checked;
        auto eq = verify_equivalence(r, theorem);
        if (!eq.consistent) res.inconsistencies.emplace_back(r, eq);
    };
    for (int n = 1; n <= std::min(max_size, 3); ++n)
        for (const auto& r : enumerate_transitive_round(n)) visit(r);
    for (int n = 4; n <= max_size; ++n)
        for (const auto& r : sample_transitive_round(n, samples, rng)) visit(r);
    return res;
}

/// Distinct random inverse subsemigroups of a base semigroup with zero:
/// random generator sets closed under product and star.
inline std::vector<InverseSemigroup> random_subsemigroups(const InverseSemigroup& base, int count,
                                                          std::uint64_t seed) {
    if (!base.zero()) throw Error("PreconditionFailed", "base semigroup needs a zero");
    Rng rng(seed);
    std::set<std::vector<int>> seen;
    std::vector<InverseSemigroup> out;
    int guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > count * 1000)
            throw Error("TooLarge", "could not find enough distinct subsemigroups");
        std::set<int> gen{*base.zero()};
        std::uint64_t k = 1 + rng.bounded(4);
        for (std::uint64_t i = 0; i < k; ++i)
            gen.insert(static_cast<int>(rng.bounded(static_cast<std::uint64_t>(base.size()))));
        // Closure under product and star.
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<int> cur(gen.begin(), gen.end());
            for (int a : cur) {
                if (gen.insert(base.star(a)).second) changed = true;
                for (int b : cur)
                    if (gen.insert(base.product(a, b)).second) changed = true;
            }
        }
        std::vector<int> elems(gen.begin(), gen.end());
        if (static_cast<int>(elems.size()) < 2) continue;  // zero alone
        if (!seen.insert(elems).second) continue;
        std::vector<std::string> names;
        std::vector<int> remap(static_cast<std::size_t>(base.size()), -1);
        for (std::size_t i = 0; i < elems.size(); ++i) {
            remap[static_cast<std::size_t>(elems[i])] = static_cast<int>(i);
            names.push_back(base.name(elems[i]));
        }
        const int m = static_cast<int>(elems.size());
        std::vector<int> table(static_cast<std::size_t>(m) * m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b)
                table[static_cast<std::size_t>(a) * m + b] =
                    remap[static_cast<std::size_t>(base.product(elems[static_cast<std::size_t>(a)],
                                                                elems[static_cast<std::size_t>(b)]))];
        out.push_back(InverseSemigroup::build_indexed(std::move(names), std::move(table),
                                                      remap[static_cast<std::size_t>(*base.zero())]));
    }
    return out;
}

/// Ordered groupoids for the etale/germ sweeps: semigroup bridge applied to
/// random subsemigroups of the symmetric inverse monoid.
inline std::vector<OrderedGroupoid> random_bridge_groupoids(int base_points, int count,
                                                            std::uint64_t seed) {
    auto base = isym_semigroup(base_points);
    std::vector<OrderedGroupoid> out;
    for (const auto& s : random_subsemigroups(base, count, seed)) {
        TransRel ord = canonical_order(s, true);
        out.push_back(semigroup_to_ordered_groupoid(s, ord));
    }
    return out;
}

} // namespace ltg
