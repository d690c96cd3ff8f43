#pragma once

#include <string>
#include <vector>

#include "ltg/generators.hpp"
#include "ltg/harness.hpp"
#include "ltg/order.hpp"
#include "ltg/tight_groupoid.hpp"

namespace ltgtest {

inline ltg::Bitset subset(const ltg::TransRel& r, std::initializer_list<const char*> names) {
    ltg::Bitset b(r.size());
    for (const char* n : names) b.set(r.index(n));
    return b;
}

inline std::vector<ltg::Bitset> all_subsets(int n) {
    std::vector<ltg::Bitset> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        ltg::Bitset b(n);
        for (int k = 0; k < n; ++k)
            if ((m >> k) & 1u) b.set(k);
        out.push_back(b);
    }
    return out;
}

/// Exhaustive small instances plus a few seeded samples, shared by the
/// property tests.
inline const std::vector<ltg::TransRel>& property_instances() {
    static const std::vector<ltg::TransRel> instances = [] {
        std::vector<ltg::TransRel> v;
        for (int n = 1; n <= 3; ++n)
            for (auto& r : ltg::enumerate_transitive_round(n)) v.push_back(std::move(r));
        ltg::Rng rng(0xC0FFEE);
        for (auto& r : ltg::sample_transitive_round(4, 60, rng)) v.push_back(std::move(r));
        return v;
    }();
    return instances;
}

/// Recovery fixture: the pair groupoid on n points with its discrete
/// topology and the family of all non-empty partial-injection bisections
/// under setwise product (declared when the source units of the left factor
/// equal the range units of the right one).
inline ltg::RecoveryInput pair_groupoid_recovery_input(int n) {
    ltg::RecoveryInput in;
    in.groupoid = ltg::pair_groupoid(n);
    const int m = in.groupoid.size();
    std::vector<ltg::Bitset> basis;
    for (int i = 0; i < m; ++i) {
        ltg::Bitset b(m);
        b.set(i);
        basis.push_back(b);
    }
    in.topology = ltg::FiniteSpace::from_basis(in.groupoid.names(), basis);
    for (const auto& b : all_subsets(m)) {
        if (b.empty() || !ltg::detail::is_bisection(in.groupoid, b)) continue;
        std::string name = "B";
        b.for_each([&](int i) { name += "_" + std::to_string(i); });
        in.family_names.push_back(name);
        in.family_sets.push_back(b);
    }
    auto find = [&](const ltg::Bitset& b) {
        for (std::size_t i = 0; i < in.family_sets.size(); ++i)
            if (in.family_sets[i] == b) return static_cast<int>(i);
        return -1;
    };
    for (std::size_t a = 0; a < in.family_sets.size(); ++a) {
        int ai = find(in.groupoid.inverse_set(in.family_sets[a]));
        in.family_inverse.emplace_back(static_cast<int>(a), ai);
        for (std::size_t b = 0; b < in.family_sets.size(); ++b) {
            if (in.groupoid.source_image(in.family_sets[a]) !=
                in.groupoid.range_image(in.family_sets[b]))
                continue;
            int c = find(in.groupoid.product_set(in.family_sets[a], in.family_sets[b]));
            in.family_product.emplace_back(static_cast<int>(a), static_cast<int>(b), c);
        }
    }
    return in;
}

} // namespace ltgtest
