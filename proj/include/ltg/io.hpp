#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltg/groupoid.hpp"
#include "ltg/order.hpp"
#include "ltg/spectrum.hpp"
#include "ltg/tight_groupoid.hpp"
#include "ltg/topology.hpp"

namespace ltg {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Relation files: {"kind":"order","elements":[...],"pairs":[["a","p"],...]}
// Canonical form: elements sorted, pairs sorted lexicographically.
// ---------------------------------------------------------------------------

inline json relation_to_json(const TransRel& r) {
    std::vector<std::string> elems = r.names();
    std::sort(elems.begin(), elems.end());
    std::vector<std::pair<std::string, std::string>> prs;
    for (auto [a, b] : r.pairs()) prs.emplace_back(r.name(a), r.name(b));
    std::sort(prs.begin(), prs.end());
    json j;
    j["kind"] = "order";
    j["elements"] = elems;
    json jp = json::array();
    for (const auto& [a, b] : prs) jp.push_back(json::array({a, b}));
    j["pairs"] = jp;
    return j;
}

inline TransRel relation_from_json(const json& j, std::optional<bool> close_override = std::nullopt) {
    if (!j.contains("elements") || !j.contains("pairs"))
        throw Error("ParseError", "order file needs elements and pairs");
    std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> prs;
    for (const auto& p : j.at("pairs")) {
        if (!p.is_array() || p.size() != 2) throw Error("ParseError", "pair entries must be [a,b]");
        prs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    bool close = close_override.value_or(j.value("close", false));
    return TransRel::build(elems, prs, close);
}

// ---------------------------------------------------------------------------
// Spectrum export
// ---------------------------------------------------------------------------

inline json spectrum_to_json(const TransRel& r, const SpectrumSpace& sp) {
    json j;
    j["kind"] = "spectrum";
    j["flavor"] = sp.kind == SpectrumSpace::Kind::tight ? "tight" : "locally_tight";
    json pts = json::array();
    for (const auto& p : sp.points) {
        std::vector<std::string> names;
        p.for_each([&](int i) { names.push_back(r.name(i)); });
        std::sort(names.begin(), names.end());
        pts.push_back(names);
    }
    j["points"] = pts;
    json opens = json::object();
    for (const auto& no : sp.named) opens[no.name] = no.points.indices();
    j["opens"] = opens;
    return j;
}

// ---------------------------------------------------------------------------
// Ordered groupoid files
// ---------------------------------------------------------------------------

inline json ordered_groupoid_to_json(const OrderedGroupoid& og) {
    const auto& g = og.groupoid;
    std::vector<std::string> elems = g.names();
    std::sort(elems.begin(), elems.end());
    std::vector<std::vector<std::string>> prods;
    for (auto [a, b] : g.composable_pairs())
        prods.push_back({g.name(a), g.name(b), g.name(g.product(a, b))});
    std::sort(prods.begin(), prods.end());
    std::vector<std::vector<std::string>> invs;
    for (int a = 0; a < g.size(); ++a) invs.push_back({g.name(a), g.name(g.inverse(a))});
    std::sort(invs.begin(), invs.end());
    std::vector<std::vector<std::string>> ords;
    for (auto [a, b] : og.order.pairs()) ords.push_back({og.order.name(a), og.order.name(b)});
    std::sort(ords.begin(), ords.end());
    json j;
    j["kind"] = "ordered_groupoid";
    j["elements"] = elems;
    j["product"] = prods;
    j["inverse"] = invs;
    j["order"] = ords;
    return j;
}

inline OrderedGroupoid ordered_groupoid_from_json(const json& j) {
    std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::tuple<std::string, std::string, std::string>> prods;
    for (const auto& t : j.at("product")) {
        if (!t.is_array() || t.size() != 3) throw Error("ParseError", "product entries must be [a,b,ab]");
        prods.emplace_back(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>());
    }
    std::vector<std::pair<std::string, std::string>> invs;
    for (const auto& t : j.at("inverse")) {
        if (!t.is_array() || t.size() != 2) throw Error("ParseError", "inverse entries must be [a,ai]");
        invs.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
    }
    FiniteGroupoid g = FiniteGroupoid::build(elems, prods, invs);
    std::vector<std::pair<std::string, std::string>> ords;
    for (const auto& t : j.at("order"))
        ords.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
    // The order must share the groupoid's element indexing.
    std::vector<std::pair<int, int>> prs;
    for (const auto& [a, b] : ords) prs.emplace_back(g.index(a), g.index(b));
    TransRel order = TransRel::build_indexed(g.names(), prs, false);
    return OrderedGroupoid::make(std::move(g), std::move(order));
}

// ---------------------------------------------------------------------------
// Inverse semigroup files
// ---------------------------------------------------------------------------

inline json inverse_semigroup_to_json(const InverseSemigroup& s) {
    json j;
    j["kind"] = "inverse_semigroup";
    j["elements"] = s.names();
    json table = json::array();
    for (int a = 0; a < s.size(); ++a) {
        json row = json::array();
        for (int b = 0; b < s.size(); ++b) row.push_back(s.name(s.product(a, b)));
        table.push_back(row);
    }
    j["table"] = table;
    if (s.zero()) j["zero"] = s.name(*s.zero());
    return j;
}

inline InverseSemigroup inverse_semigroup_from_json(const json& j) {
    std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::vector<std::string>> table;
    for (const auto& row : j.at("table")) table.push_back(row.get<std::vector<std::string>>());
    std::optional<std::string> zero;
    if (j.contains("zero")) zero = j.at("zero").get<std::string>();
    return InverseSemigroup::build(elems, table, zero);
}

// ---------------------------------------------------------------------------
// Space (+ family) files
// ---------------------------------------------------------------------------

struct SpaceFile {
    FiniteSpace space;
    std::vector<std::pair<std::string, Bitset>> family;  // may be empty
};

inline SpaceFile space_from_json(const json& j) {
    std::vector<std::string> points = j.at("points").get<std::vector<std::string>>();
    std::vector<std::string> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    auto pindex = [&](const std::string& p) {
        auto it = std::find(points.begin(), points.end(), p);
        if (it == points.end()) throw Error("UnknownPoint", p);
        return static_cast<int>(it - points.begin());
    };
    std::vector<Bitset> basis;
    for (const auto& row : j.at("basis")) {
        Bitset b(static_cast<int>(points.size()));
        for (const auto& p : row) b.set(pindex(p.get<std::string>()));
        basis.push_back(b);
    }
    SpaceFile out;
    out.space = FiniteSpace::from_basis(points, basis);
    if (j.contains("family")) {
        for (const auto& [name, row] : j.at("family").items()) {
            Bitset b(static_cast<int>(points.size()));
            for (const auto& p : row) b.set(pindex(p.get<std::string>()));
            out.family.emplace_back(name, b);
        }
    }
    return out;
}

inline json space_to_json(const SpaceFile& sf) {
    json j;
    j["kind"] = "space";
    j["points"] = sf.space.point_names();
    json basis = json::array();
    for (const auto& o : sf.space.opens()) {
        std::vector<std::string> row;
        o.for_each([&](int i) { row.push_back(sf.space.point_name(i)); });
        basis.push_back(row);
    }
    j["basis"] = basis;
    if (!sf.family.empty()) {
        std::vector<std::pair<std::string, Bitset>> fam = sf.family;
        std::sort(fam.begin(), fam.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        json f = json::object();
        for (const auto& [name, b] : fam) {
            std::vector<std::string> row;
            b.for_each([&](int i) { row.push_back(sf.space.point_name(i)); });
            f[name] = row;
        }
        j["family"] = f;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Groupoid model files: groupoid data plus topology and units, optionally a
// named bisection family with its declared partial product and inverse.
// ---------------------------------------------------------------------------

inline json model_to_json(const GroupoidModel& model) {
    const auto& g = model.groupoid;
    json j;
    j["kind"] = "groupoid_model";
    j["elements"] = g.names();
    std::vector<std::vector<std::string>> prods;
    for (auto [a, b] : g.composable_pairs())
        prods.push_back({g.name(a), g.name(b), g.name(g.product(a, b))});
    std::sort(prods.begin(), prods.end());
    j["product"] = prods;
    std::vector<std::vector<std::string>> invs;
    for (int a = 0; a < g.size(); ++a) invs.push_back({g.name(a), g.name(g.inverse(a))});
    std::sort(invs.begin(), invs.end());
    j["inverse"] = invs;
    json topo = json::object();
    json opens = json::array();
    for (const auto& o : model.spectrum.topology.opens()) opens.push_back(o.indices());
    topo["opens"] = opens;
    j["topology"] = topo;
    std::vector<std::string> units;
    model.unit_space.for_each([&](int i) { units.push_back(g.name(i)); });
    std::sort(units.begin(), units.end());
    j["units"] = units;
    json named = json::object();
    for (const auto& no : model.spectrum.named) named[no.name] = no.points.indices();
    j["named_opens"] = named;
    return j;
}

inline RecoveryInput recovery_input_from_json(const json& j) {
    RecoveryInput in;
    std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
    std::vector<std::tuple<std::string, std::string, std::string>> prods;
    for (const auto& t : j.at("product"))
        prods.emplace_back(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>());
    std::vector<std::pair<std::string, std::string>> invs;
    for (const auto& t : j.at("inverse"))
        invs.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
    in.groupoid = FiniteGroupoid::build(elems, prods, invs);
    const int n = in.groupoid.size();
    std::vector<Bitset> basis;
    if (!j.contains("topology") || !j.at("topology").contains("basis"))
        throw Error("ParseError", "groupoid model needs topology.basis for recovery");
    for (const auto& row : j.at("topology").at("basis")) {
        Bitset b(n);
        for (const auto& p : row) b.set(in.groupoid.index(p.get<std::string>()));
        basis.push_back(b);
    }
    in.topology = FiniteSpace::from_basis(in.groupoid.names(), basis);
    if (!j.contains("family")) throw Error("ParseError", "recovery needs a named family");
    std::vector<std::pair<std::string, Bitset>> fam;
    for (const auto& [name, row] : j.at("family").items()) {
        Bitset b(n);
        for (const auto& p : row) b.set(in.groupoid.index(p.get<std::string>()));
        fam.emplace_back(name, b);
    }
    std::sort(fam.begin(), fam.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto famindex = [&](const std::string& s) {
        for (std::size_t i = 0; i < fam.size(); ++i)
            if (fam[i].first == s) return static_cast<int>(i);
        throw Error("UnknownElement", "family name " + s);
    };
    for (auto& [name, b] : fam) {
        in.family_names.push_back(name);
        in.family_sets.push_back(b);
    }
    if (j.contains("family_product"))
        for (const auto& t : j.at("family_product"))
            in.family_product.emplace_back(famindex(t[0].get<std::string>()),
                                           famindex(t[1].get<std::string>()),
                                           famindex(t[2].get<std::string>()));
    if (j.contains("family_inverse"))
        for (const auto& t : j.at("family_inverse"))
            in.family_inverse.emplace_back(famindex(t[0].get<std::string>()),
                                           famindex(t[1].get<std::string>()));
    return in;
}

// ---------------------------------------------------------------------------
// Coset groupoid export: plain groupoids travel in the ordered groupoid
// format with the discrete order, which any groupoid carries.
// ---------------------------------------------------------------------------

inline json plain_groupoid_to_json(const FiniteGroupoid& g) {
    std::vector<std::pair<int, int>> eq;
    for (int i = 0; i < g.size(); ++i) eq.emplace_back(i, i);
    TransRel order = TransRel::build_indexed(g.names(), eq, false);
    return ordered_groupoid_to_json(OrderedGroupoid::make(g, std::move(order)));
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

inline json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ParseError", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("ParseError", std::string("bad JSON in ") + path + ": " + e.what());
    }
    if (!j.contains("kind")) throw Error("ParseError", path + " has no kind field");
    return j;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace ltg
