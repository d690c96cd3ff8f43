#pragma once

#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ltg/tight_groupoid.hpp"

namespace ltg {

/// DOT rendering of a groupoid model: unit points as box nodes, non-unit
/// arrows as edges from source unit to range unit, labelled by the arrow's
/// filter name; one digraph per connected component.
inline std::string model_to_dot(const GroupoidModel& model) {
    const auto& g = model.groupoid;
    const int n = g.size();

    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    };
    for (int x = 0; x < n; ++x) {
        unite(x, g.source(x));
        unite(x, g.range(x));
        unite(x, g.inverse(x));
    }

    std::vector<int> roots;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        bool seen = false;
        for (int q : roots) seen = seen || q == r;
        if (!seen) roots.push_back(r);
    }

    std::ostringstream out;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        out << "digraph component_" << k << " {\n";
        for (int i = 0; i < n; ++i)
            if (find(i) == roots[k] && g.is_unit(i))
                out << "  \"" << g.name(i) << "\" [shape=box];\n";
        for (int i = 0; i < n; ++i)
            if (find(i) == roots[k] && !g.is_unit(i))
                out << "  \"" << g.name(g.source(i)) << "\" -> \"" << g.name(g.range(i))
                    << "\" [label=\"" << g.name(i) << "\"];\n";
        out << "}\n";
    }
    return out.str();
}

} // namespace ltg
