#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltg/bitset.hpp"
#include "ltg/coset.hpp"
#include "ltg/groupoid.hpp"
#include "ltg/order.hpp"
#include "ltg/spectrum.hpp"
#include "ltg/topology.hpp"

namespace ltg {

/// Left action of a single element on a locally tight filter:
/// T |-> (g^> T)^<, defined when s(g) lies above some range unit of T.
inline Bitset act(const OrderedGroupoid& og, int g, const Bitset& t) {
    const auto& gpd = og.groupoid;
    if (!t.any() || !is_filter(og.order, t) || !is_locally_tight(og.order, t))
        throw Error("PreconditionFailed", "act needs a non-empty locally tight filter");
    if (!cone_above(og.order, gpd.range_image(t)).test(gpd.source(g)))
        throw Error("PreconditionFailed", "s(g) is not above the range units of the filter");
    Bitset result = cone_above(og.order, gpd.product_set(og.order.below(g), t));
    if (!is_filter(og.order, result) || !is_locally_tight(og.order, result))
        throw Error("TheoremCounterexample", "action left the locally tight filters");
    return result;
}

/// The locally tight groupoid: spectrum points with the coset product
/// (T, U) |-> (TU)^< when (T^-1 T)^< = (U U^-1)^<, carrying the spectrum
/// topology and the named basic opens.
struct GroupoidModel {
    SpectrumSpace spectrum;   // locally tight flavour over the carrier
    FiniteGroupoid groupoid;  // over spectrum point indices
    Bitset unit_space;        // points meeting the carrier's units
};

namespace detail {

inline std::string filter_point_name(const TransRel& r, const Bitset& t) {
    for (int u = 0; u < r.size(); ++u)
        if (r.less(u, u) && r.above(u) == t) return "up(" + r.name(u) + ")";
    return brace_list(r, t);
}

} // namespace detail

inline GroupoidModel locally_tight_groupoid(const OrderedGroupoid& og) {
    auto rep = classify(og.order);
    if (!rep.round || !rep.local_bi_pseudobasis)
        throw Error("AxiomViolation", "the order is not a round local bi-pseudobasis");
    GroupoidModel model;
    model.spectrum = locally_tight_spectrum(og.order);
    const auto& pts = model.spectrum.points;
    const int np = static_cast<int>(pts.size());
    const auto& gpd = og.groupoid;

    auto point_index = [&](const Bitset& b) {
        int i = model.spectrum.point_index(b);
        if (i < 0) throw Error("GroupoidLawViolation", "derived set is not a spectrum point");
        return i;
    };

    std::vector<int> inv(static_cast<std::size_t>(np)), su(static_cast<std::size_t>(np)), ru(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
        Bitset ti = gpd.inverse_set(pts[static_cast<std::size_t>(i)]);
        inv[static_cast<std::size_t>(i)] = point_index(ti);
        su[static_cast<std::size_t>(i)] = point_index(cone_above(og.order, gpd.product_set(ti, pts[static_cast<std::size_t>(i)])));
        ru[static_cast<std::size_t>(i)] = point_index(cone_above(og.order, gpd.product_set(pts[static_cast<std::size_t>(i)], ti)));
    }
    std::vector<int> prod(static_cast<std::size_t>(np) * np, -1);
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) {
            if (su[static_cast<std::size_t>(a)] != ru[static_cast<std::size_t>(b)]) continue;
            Bitset ab = cone_above(og.order, gpd.product_set(pts[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(b)]));
            prod[static_cast<std::size_t>(a) * np + b] = point_index(ab);
        }
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(np));
    for (const auto& p : pts) names.push_back(detail::filter_point_name(og.order, p));
    try {
        model.groupoid = FiniteGroupoid::build_indexed(std::move(names), std::move(prod), std::move(inv));
    } catch (const Error& e) {
        throw Error("GroupoidLawViolation", e.what());
    }
    model.unit_space = Bitset(np);
    for (int i = 0; i < np; ++i)
        if (pts[static_cast<std::size_t>(i)].intersects(gpd.units())) model.unit_space.set(i);
    for (int i = 0; i < np; ++i)
        if (model.groupoid.is_unit(i) != model.unit_space.test(i))
            throw Error("TheoremCounterexample", "unit space disagrees with the unit characterisation");
    return model;
}

// ---------------------------------------------------------------------------
// Etale verification
// ---------------------------------------------------------------------------

struct EtaleReport {
    bool inversion_homeomorphism = false;
    bool product_continuous = false;
    bool source_open = false;
    bool source_image_identity = false;
    bool locally_compact_locally_hausdorff = false;
    bool subgroupoid_laws = false;
    std::vector<std::string> witness;
    bool all() const {
        return inversion_homeomorphism && product_continuous && source_open &&
               source_image_identity && locally_compact_locally_hausdorff && subgroupoid_laws;
    }
};

namespace detail {

inline Bitset transport(const Bitset& open, const std::vector<int>& map, int size) {
    Bitset out(size);
    open.for_each([&](int i) { out.set(map[static_cast<std::size_t>(i)]); });
    return out;
}

} // namespace detail

/// The six checks behind the etale theorem: inversion is a homeomorphism,
/// the product is continuous on the composable subspace, the source map is
/// open, the displayed source-image identity holds for every named basic
/// open, the space is locally compact locally Hausdorff, and the element
/// opens form a subgroupoid of bisections.
inline EtaleReport verify_etale(const OrderedGroupoid& og, const GroupoidModel& model) {
    EtaleReport rep;
    const auto& sp = model.spectrum;
    const auto& top = sp.topology;
    const auto& g = model.groupoid;
    const auto& gpd = og.groupoid;
    const int np = static_cast<int>(sp.points.size());

    std::vector<int> invmap(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) invmap[static_cast<std::size_t>(i)] = g.inverse(i);
    rep.inversion_homeomorphism = true;
    for (const auto& o : top.opens())
        if (!top.is_open(detail::transport(o, invmap, np))) {
            rep.inversion_homeomorphism = false;
            rep.witness.push_back("inversion image of an open is not open");
            break;
        }

    // Product continuity: on the composable-pair subspace of the square,
    // minimal neighbourhoods are rectangles, so openness of each preimage
    // reduces to a rectangle check at every composable pair.
    rep.product_continuous = true;
    for (const auto& w : top.opens()) {
        for (auto [a, b] : g.composable_pairs()) {
            if (!w.test(g.product(a, b))) continue;
            bool ok = true;
            top.min_nbhd(a).for_each([&](int a2) {
                if (!ok) return;
                top.min_nbhd(b).for_each([&](int b2) {
                    if (!ok) return;
                    if (g.composable(a2, b2) && !w.test(g.product(a2, b2))) ok = false;
                });
            });
            if (!ok) {
                rep.product_continuous = false;
                rep.witness.push_back("product preimage fails to be open at (" + g.name(a) +
                                      ", " + g.name(b) + ")");
                break;
            }
        }
        if (!rep.product_continuous) break;
    }

    rep.source_open = true;
    for (const auto& o : top.opens()) {
        Bitset img(np);
        o.for_each([&](int i) { img.set(g.source(i)); });
        if (!top.is_open(img)) {
            rep.source_open = false;
            rep.witness.push_back("source image of an open is not open");
            break;
        }
    }

    rep.source_image_identity = true;
    for (const auto& po : sp.pair_opens) {
        Bitset lhs(np);
        po.points.for_each([&](int i) { lhs.set(g.source(i)); });
        int sp_el = gpd.source(po.p);
        int sq_el = gpd.source(po.q);
        Bitset sf = gpd.source_image(po.witness_f);
        Bitset rhs(np);
        for (int i = 0; i < np; ++i) {
            const Bitset& t = sp.points[static_cast<std::size_t>(i)];
            if (t.test(sp_el) && compact_cover(og.order, sf, og.order.below(sq_el) - t)) rhs.set(i);
        }
        if (lhs != rhs) {
            rep.source_image_identity = false;
            rep.witness.push_back("s-image identity fails for O^{" + gpd.name(po.p) + "," +
                                  gpd.name(po.q) + "}");
            break;
        }
    }

    auto props = space_props(top);
    rep.locally_compact_locally_hausdorff = props.locally_compact && props.locally_hausdorff;

    rep.subgroupoid_laws = true;
    auto element_open = [&](int p) {
        Bitset m(np);
        for (int i = 0; i < np; ++i)
            if (sp.points[static_cast<std::size_t>(i)].test(p)) m.set(i);
        return m;
    };
    for (int p = 0; p < gpd.size() && rep.subgroupoid_laws; ++p) {
        if (detail::transport(element_open(p), invmap, np) != element_open(gpd.inverse(p))) {
            rep.subgroupoid_laws = false;
            rep.witness.push_back("(O^p)^-1 != O^{p^-1} at " + gpd.name(p));
        }
    }
    for (auto [p, q] : gpd.composable_pairs()) {
        if (!rep.subgroupoid_laws) break;
        Bitset lhs(np);
        element_open(p).for_each([&](int a) {
            element_open(q).for_each([&](int b) {
                if (g.composable(a, b)) lhs.set(g.product(a, b));
            });
        });
        if (lhs != element_open(gpd.product(p, q))) {
            rep.subgroupoid_laws = false;
            rep.witness.push_back("O^p O^q != O^{pq} at (" + gpd.name(p) + ", " + gpd.name(q) + ")");
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Groupoid isomorphism search (oracle side of the ground-truth checks)
// ---------------------------------------------------------------------------

/// Backtracking search for a groupoid isomorphism; returns the element map
/// when one exists.
inline std::optional<std::vector<int>> find_groupoid_isomorphism(const FiniteGroupoid& a,
                                                                 const FiniteGroupoid& b) {
    if (a.size() != b.size() || a.units().count() != b.units().count()) return std::nullopt;
    const int n = a.size();
    std::vector<int> map(static_cast<std::size_t>(n), -1);
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    auto consistent = [&](int x, int y) {
        if (a.is_unit(x) != b.is_unit(y)) return false;
        if (map[static_cast<std::size_t>(a.inverse(x))] != -1 &&
            map[static_cast<std::size_t>(a.inverse(x))] != b.inverse(y))
            return false;
        if (map[static_cast<std::size_t>(a.range(x))] != -1 &&
            map[static_cast<std::size_t>(a.range(x))] != b.range(y))
            return false;
        if (map[static_cast<std::size_t>(a.source(x))] != -1 &&
            map[static_cast<std::size_t>(a.source(x))] != b.source(y))
            return false;
        for (int z = 0; z < n; ++z) {
            if (map[static_cast<std::size_t>(z)] == -1) continue;
            int mz = map[static_cast<std::size_t>(z)];
            if (a.composable(x, z) != b.composable(y, mz)) return false;
            if (a.composable(x, z)) {
                int p = a.product(x, z);
                if (map[static_cast<std::size_t>(p)] != -1 &&
                    map[static_cast<std::size_t>(p)] != b.product(y, mz))
                    return false;
            }
            if (a.composable(z, x) != b.composable(mz, y)) return false;
            if (a.composable(z, x)) {
                int p = a.product(z, x);
                if (map[static_cast<std::size_t>(p)] != -1 &&
                    map[static_cast<std::size_t>(p)] != b.product(mz, y))
                    return false;
            }
        }
        return true;
    };

    auto rec = [&](auto&& self, int x) -> bool {
        if (x == n) {
            for (auto [p, q] : a.composable_pairs())
                if (map[static_cast<std::size_t>(a.product(p, q))] !=
                    b.product(map[static_cast<std::size_t>(p)], map[static_cast<std::size_t>(q)]))
                    return false;
            return true;
        }
        for (int y = 0; y < n; ++y) {
            if (used[static_cast<std::size_t>(y)] || !consistent(x, y)) continue;
            map[static_cast<std::size_t>(x)] = y;
            used[static_cast<std::size_t>(y)] = true;
            if (self(self, x + 1)) return true;
            used[static_cast<std::size_t>(y)] = false;
            map[static_cast<std::size_t>(x)] = -1;
        }
        return false;
    };
    if (rec(rec, 0)) return map;
    return std::nullopt;
}

/// Isomorphism of models: groupoid isomorphism whose point map also
/// transports the topology.
inline bool models_isomorphic(const FiniteGroupoid& ga, const FiniteSpace& ta,
                              const FiniteGroupoid& gb, const FiniteSpace& tb) {
    auto iso = find_groupoid_isomorphism(ga, gb);
    if (!iso) return false;
    std::vector<Bitset> transported;
    for (const auto& o : ta.opens()) transported.push_back(detail::transport(o, *iso, gb.size()));
    std::sort(transported.begin(), transported.end());
    return transported == tb.opens();
}

// ---------------------------------------------------------------------------
// Germ model
// ---------------------------------------------------------------------------

struct GermModel {
    TransRel unit_order;               // the order restricted to the units
    std::vector<Bitset> unit_points;   // L of the unit order, masks over unit_order
    std::vector<std::pair<int, int>> germs;  // (element, unit point) class representatives
    FiniteGroupoid groupoid;
    FiniteSpace topology;
    bool isomorphic = false;           // to the locally tight groupoid model
    std::string failure;
};

namespace detail {

struct GermContext {
    const OrderedGroupoid* og = nullptr;
    std::vector<int> unit_elems;          // unit order index -> carrier index
    std::vector<int> carrier_to_unit;     // carrier index -> unit order index (-1)
    TransRel unit_order;
    std::vector<Bitset> unit_points;      // masks over unit order carrier

    Bitset to_carrier(const Bitset& unit_mask) const {
        Bitset out(og->size());
        unit_mask.for_each([&](int i) { out.set(unit_elems[static_cast<std::size_t>(i)]); });
        return out;
    }

    /// beta_g on a unit point: (g^> T g^-1^>)^< intersected with the units.
    int beta(int g, int t) const {
        const auto& gpd = og->groupoid;
        Bitset tc = to_carrier(unit_points[static_cast<std::size_t>(t)]);
        Bitset mid = gpd.product_set(gpd.product_set(og->order.below(g), tc),
                                     og->order.below(gpd.inverse(g)));
        Bitset up = cone_above(og->order, mid) & gpd.units();
        Bitset um(unit_order.size());
        up.for_each([&](int c) {
            int u = carrier_to_unit[static_cast<std::size_t>(c)];
            if (u >= 0) um.set(u);
        });
        for (std::size_t i = 0; i < unit_points.size(); ++i)
            if (unit_points[i] == um) return static_cast<int>(i);
        return -1;
    }

    bool germ_equivalent(int g, int h, int t) const {
        const auto& gpd = og->groupoid;
        Bitset tc = to_carrier(unit_points[static_cast<std::size_t>(t)]);
        bool equal = false;
        tc.for_each([&](int e) {
            if (equal) return;
            if (og->order.less(e, gpd.source(g)) && og->order.less(e, gpd.source(h))) {
                int ge = restrict_element(*og, RestrictSide::source, e, g);
                int he = restrict_element(*og, RestrictSide::source, e, h);
                if (ge == he) equal = true;
            }
        });
        return equal;
    }
};

} // namespace detail

/// The germ model: unit spectrum, germs [g, T] under agreement on a common
/// restriction, the product [g,T][h,U] = [gh,U] when T = beta_h(U), and the
/// topology generated by Theta(g, O).  The map [g,T] -> (g^> T)^< is
/// verified to be an isomorphism and homeomorphism onto the locally tight
/// groupoid model.
inline GermModel germ_groupoid(const OrderedGroupoid& og) {
    auto rep = classify(og.order);
    if (!rep.round || !rep.local_bi_pseudobasis)
        throw Error("AxiomViolation", "the order is not a round local bi-pseudobasis");
    const auto& gpd = og.groupoid;

    detail::GermContext cx;
    cx.og = &og;
    gpd.units().for_each([&](int u) { cx.unit_elems.push_back(u); });
    cx.carrier_to_unit.assign(static_cast<std::size_t>(og.size()), -1);
    for (std::size_t i = 0; i < cx.unit_elems.size(); ++i)
        cx.carrier_to_unit[static_cast<std::size_t>(cx.unit_elems[i])] = static_cast<int>(i);
    cx.unit_order = og.order.restricted(gpd.units());
    cx.unit_points = enumerate_points(cx.unit_order, PointKind::locally_tight_filters);

    GermModel model;
    model.unit_order = cx.unit_order;
    model.unit_points = cx.unit_points;

    // Germ classes per unit point, with lexicographically least representatives.
    struct ClassInfo {
        int rep_g, t;
        std::vector<int> members;
    };
    std::vector<ClassInfo> classes;
    std::map<std::pair<int, int>, int> class_of;  // (g, t) -> class index
    const int nt = static_cast<int>(cx.unit_points.size());
    for (int t = 0; t < nt; ++t) {
        Bitset tc = cx.to_carrier(cx.unit_points[static_cast<std::size_t>(t)]);
        for (int g = 0; g < og.size(); ++g) {
            if (!tc.test(gpd.source(g))) continue;
            int found = -1;
            for (std::size_t c = 0; c < classes.size(); ++c) {
                if (classes[c].t != t) continue;
                if (cx.germ_equivalent(g, classes[c].rep_g, t)) {
                    found = static_cast<int>(c);
                    break;
                }
            }
            if (found == -1) {
                classes.push_back({g, t, {g}});
                found = static_cast<int>(classes.size()) - 1;
            } else {
                classes[static_cast<std::size_t>(found)].members.push_back(g);
            }
            class_of[{g, t}] = found;
        }
    }
    const int ng = static_cast<int>(classes.size());
    for (const auto& c : classes) model.germs.emplace_back(c.rep_g, c.t);

    // Product surgery: [g,T][h,U] with T = beta_h(U) picks h' < h with
    // s(h') in U and r(h') < s(g); the product germ is [g|_{r(h')} h', U].
    auto germ_product = [&](int a, int b) -> int {
        int g = classes[static_cast<std::size_t>(a)].rep_g;
        int t = classes[static_cast<std::size_t>(a)].t;
        int h = classes[static_cast<std::size_t>(b)].rep_g;
        int u = classes[static_cast<std::size_t>(b)].t;
        if (cx.beta(h, u) != t) return -1;
        Bitset uc = cx.to_carrier(cx.unit_points[static_cast<std::size_t>(u)]);
        int result = -1;
        og.order.below(h).for_each([&](int h2) {
            if (!uc.test(gpd.source(h2))) return;
            if (!og.order.less(gpd.range(h2), gpd.source(g))) return;
            int gr = restrict_element(og, RestrictSide::source, gpd.range(h2), g);
            int prod = gpd.product(gr, h2);
            auto it = class_of.find({prod, u});
            if (it == class_of.end())
                throw Error("GroupoidLawViolation", "germ product left the germ set");
            if (result != -1 && result != it->second)
                throw Error("TheoremCounterexample", "germ product depends on the representative");
            result = it->second;
        });
        return result;
    };

    std::vector<int> prod(static_cast<std::size_t>(ng) * ng, -1);
    std::vector<int> inv(static_cast<std::size_t>(ng), -1);
    for (int a = 0; a < ng; ++a) {
        int g = classes[static_cast<std::size_t>(a)].rep_g;
        int t = classes[static_cast<std::size_t>(a)].t;
        int bt = cx.beta(g, t);
        if (bt < 0) throw Error("GroupoidLawViolation", "beta_g left the unit spectrum");
        auto it = class_of.find({gpd.inverse(g), bt});
        if (it == class_of.end()) throw Error("GroupoidLawViolation", "germ inverse missing");
        inv[static_cast<std::size_t>(a)] = it->second;
    }
    for (int a = 0; a < ng; ++a)
        for (int b = 0; b < ng; ++b) prod[static_cast<std::size_t>(a) * ng + b] = germ_product(a, b);

    std::vector<std::string> names;
    for (int a = 0; a < ng; ++a)
        names.push_back("[" + gpd.name(classes[static_cast<std::size_t>(a)].rep_g) + ";" +
                        std::to_string(classes[static_cast<std::size_t>(a)].t) + "]");
    try {
        model.groupoid = FiniteGroupoid::build_indexed(names, std::move(prod), std::move(inv));
    } catch (const Error& e) {
        throw Error("GroupoidLawViolation", e.what());
    }

    // Topology from Theta(g, O) for opens O of the unit spectrum inside O^{s(g)}.
    auto unit_spectrum = locally_tight_spectrum(cx.unit_order);
    std::vector<Bitset> basis;
    for (int g = 0; g < og.size(); ++g) {
        Bitset dom(nt);
        for (int t = 0; t < nt; ++t)
            if (cx.to_carrier(cx.unit_points[static_cast<std::size_t>(t)]).test(gpd.source(g))) dom.set(t);
        for (const auto& o : unit_spectrum.topology.opens()) {
            if (!o.subset_of(dom)) continue;
            Bitset theta(ng);
            o.for_each([&](int t) {
                auto it = class_of.find({g, t});
                if (it != class_of.end()) theta.set(it->second);
            });
            basis.push_back(theta);
        }
    }
    model.topology = FiniteSpace::from_basis(names, basis);

    // Isomorphism [g,T] -> (g^> T)^< onto the locally tight groupoid.
    auto target = locally_tight_groupoid(og);
    const int np = static_cast<int>(target.spectrum.points.size());
    std::vector<int> phi(static_cast<std::size_t>(ng), -1);
    model.isomorphic = true;
    for (int a = 0; a < ng && model.isomorphic; ++a) {
        int t = classes[static_cast<std::size_t>(a)].t;
        Bitset tc = cx.to_carrier(cx.unit_points[static_cast<std::size_t>(t)]);
        int image = -1;
        for (int gm : classes[static_cast<std::size_t>(a)].members) {
            Bitset img = cone_above(og.order, gpd.product_set(og.order.below(gm), tc));
            int idx = target.spectrum.point_index(img);
            if (idx < 0) {
                model.isomorphic = false;
                model.failure = "germ image is not a spectrum point";
                break;
            }
            if (image != -1 && image != idx) {
                model.isomorphic = false;
                model.failure = "germ image depends on the representative";
                break;
            }
            image = idx;
        }
        phi[static_cast<std::size_t>(a)] = image;
    }
    if (model.isomorphic) {
        std::vector<bool> hit(static_cast<std::size_t>(np), false);
        for (int a = 0; a < ng; ++a) {
            if (phi[static_cast<std::size_t>(a)] < 0 || hit[static_cast<std::size_t>(phi[static_cast<std::size_t>(a)])]) {
                model.isomorphic = false;
                model.failure = "germ map is not a bijection";
            } else {
                hit[static_cast<std::size_t>(phi[static_cast<std::size_t>(a)])] = true;
            }
        }
        if (ng != np) {
            model.isomorphic = false;
            model.failure = "germ count differs from the spectrum";
        }
    }
    if (model.isomorphic) {
        for (int a = 0; a < ng && model.isomorphic; ++a) {
            if (target.groupoid.inverse(phi[static_cast<std::size_t>(a)]) !=
                phi[static_cast<std::size_t>(model.groupoid.inverse(a))]) {
                model.isomorphic = false;
                model.failure = "inverse not preserved";
            }
            for (int b = 0; b < ng && model.isomorphic; ++b) {
                bool ca = model.groupoid.composable(a, b);
                bool cb = target.groupoid.composable(phi[static_cast<std::size_t>(a)], phi[static_cast<std::size_t>(b)]);
                if (ca != cb) {
                    model.isomorphic = false;
                    model.failure = "composability not preserved";
                } else if (ca && phi[static_cast<std::size_t>(model.groupoid.product(a, b))] !=
                                     target.groupoid.product(phi[static_cast<std::size_t>(a)],
                                                             phi[static_cast<std::size_t>(b)])) {
                    model.isomorphic = false;
                    model.failure = "product not preserved";
                }
            }
        }
    }
    if (model.isomorphic) {
        std::vector<Bitset> transported;
        for (const auto& o : model.topology.opens())
            transported.push_back(detail::transport(o, phi, np));
        std::sort(transported.begin(), transported.end());
        if (transported != target.spectrum.topology.opens()) {
            model.isomorphic = false;
            model.failure = "topologies disagree under the germ map";
        }
    }
    if (model.isomorphic) {
        // Basic-open transport: Theta(g, O^{d,e}_F) maps onto O^{g|_d, g|_e}
        // with witness (g|_f), for unit data d, F < e < s(g).
        for (int g = 0; g < og.size() && model.isomorphic; ++g) {
            for (const auto& po : unit_spectrum.pair_opens) {
                int d = cx.unit_elems[static_cast<std::size_t>(po.p)];
                int e = cx.unit_elems[static_cast<std::size_t>(po.q)];
                if (!og.order.less(e, gpd.source(g))) continue;
                Bitset theta_img(np);
                po.points.for_each([&](int t) {
                    auto it = class_of.find({g, t});
                    if (it != class_of.end()) theta_img.set(phi[static_cast<std::size_t>(it->second)]);
                });
                int gd = restrict_element(og, RestrictSide::source, d, g);
                int ge = restrict_element(og, RestrictSide::source, e, g);
                Bitset gf(og.size());
                po.witness_f.for_each([&](int f) {
                    gf.set(restrict_element(og, RestrictSide::source,
                                            cx.unit_elems[static_cast<std::size_t>(f)], g));
                });
                Bitset rhs(np);
                for (int i = 0; i < np; ++i) {
                    const Bitset& t = target.spectrum.points[static_cast<std::size_t>(i)];
                    if (t.test(gd) && compact_cover(og.order, gf, og.order.below(ge) - t)) rhs.set(i);
                }
                if (theta_img != rhs) {
                    model.isomorphic = false;
                    model.failure = "basic open transport fails at Theta(" + gpd.name(g) + ", ...)";
                    break;
                }
            }
        }
    }
    return model;
}

// ---------------------------------------------------------------------------
// Groupoid recovery
// ---------------------------------------------------------------------------

/// Input for the recovery theorem: a topological groupoid together with a
/// declared ordered subgroupoid of open bisections.
struct RecoveryInput {
    FiniteGroupoid groupoid;  // the space's points are the groupoid elements
    FiniteSpace topology;
    std::vector<std::string> family_names;
    std::vector<Bitset> family_sets;
    // Declared partial product and inverse on family indices.
    std::vector<std::tuple<int, int, int>> family_product;
    std::vector<std::pair<int, int>> family_inverse;
};

struct RecoveryVerdict {
    bool ok = false;
    std::string failure;
    ClbpReport clbp;
};

inline RecoveryVerdict groupoid_recovery(const RecoveryInput& in) {
    RecoveryVerdict v;
    const auto& x = in.groupoid;
    const int n = x.size();
    const int m = static_cast<int>(in.family_sets.size());

    // Open bisections, pairwise distinct.
    for (int i = 0; i < m; ++i) {
        const Bitset& b = in.family_sets[static_cast<std::size_t>(i)];
        if (b.empty() || !in.topology.is_open(b))
            throw Error("AxiomViolation",
                        "family member " + in.family_names[static_cast<std::size_t>(i)] +
                            " is not a non-empty open");
        if (!detail::is_bisection(x, b))
            throw Error("AxiomViolation",
                        "family member " + in.family_names[static_cast<std::size_t>(i)] +
                            " is not a bisection");
        for (int j = i + 1; j < m; ++j)
            if (b == in.family_sets[static_cast<std::size_t>(j)])
                throw Error("AxiomViolation", "family members coincide");
    }

    // Declared product must agree with setwise composition wherever declared.
    std::vector<int> fprod(static_cast<std::size_t>(m) * m, -1);
    for (auto [a, b, c] : in.family_product) {
        Bitset setwise = x.product_set(in.family_sets[static_cast<std::size_t>(a)],
                                       in.family_sets[static_cast<std::size_t>(b)]);
        if (setwise != in.family_sets[static_cast<std::size_t>(c)])
            throw Error("PreconditionFailed",
                        "declared product disagrees with setwise composition at (" +
                            in.family_names[static_cast<std::size_t>(a)] + ", " +
                            in.family_names[static_cast<std::size_t>(b)] + ")");
        fprod[static_cast<std::size_t>(a) * m + b] = c;
    }
    std::vector<int> finv(static_cast<std::size_t>(m), -1);
    for (auto [a, ai] : in.family_inverse) {
        if (x.inverse_set(in.family_sets[static_cast<std::size_t>(a)]) != in.family_sets[static_cast<std::size_t>(ai)])
            throw Error("PreconditionFailed",
                        "declared inverse disagrees with the setwise inverse at " +
                            in.family_names[static_cast<std::size_t>(a)]);
        finv[static_cast<std::size_t>(a)] = ai;
    }

    // Concrete local bi-pseudobasis of the topology.
    std::vector<std::pair<std::string, Bitset>> named;
    for (int i = 0; i < m; ++i)
        named.emplace_back(in.family_names[static_cast<std::size_t>(i)], in.family_sets[static_cast<std::size_t>(i)]);
    ConcreteFamily fam = ConcreteFamily::make(in.topology, named);
    v.clbp = check_concrete_clbp(fam);
    if (!v.clbp.all()) throw Error("AxiomViolation", "family is not a concrete local bi-pseudobasis");

    // Everything downstream uses the family's canonical ordering.
    std::vector<int> to_fam(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < fam.count(); ++k)
            if (fam.sets[static_cast<std::size_t>(k)] == in.family_sets[static_cast<std::size_t>(i)])
                to_fam[static_cast<std::size_t>(i)] = k;
        if (to_fam[static_cast<std::size_t>(i)] < 0)
            throw Error("InternalError", "family member lost in canonicalisation");
    }
    std::vector<int> cprod(static_cast<std::size_t>(m) * m, -1);
    std::vector<int> cinv(static_cast<std::size_t>(m), -1);
    for (int a = 0; a < m; ++a) {
        cinv[static_cast<std::size_t>(to_fam[static_cast<std::size_t>(a)])] =
            to_fam[static_cast<std::size_t>(finv[static_cast<std::size_t>(a)])];
        for (int b = 0; b < m; ++b) {
            int c = fprod[static_cast<std::size_t>(a) * m + b];
            if (c >= 0)
                cprod[static_cast<std::size_t>(to_fam[static_cast<std::size_t>(a)]) * m +
                      to_fam[static_cast<std::size_t>(b)]] = to_fam[static_cast<std::size_t>(c)];
        }
    }

    FiniteGroupoid fg;
    try {
        fg = FiniteGroupoid::build_indexed(fam.names, std::move(cprod), std::move(cinv));
    } catch (const Error& e) {
        throw Error("AxiomViolation", std::string("family is not a groupoid: ") + e.what());
    }
    TransRel order = induced_relation(fam);
    OrderedGroupoid og = OrderedGroupoid::make(std::move(fg), std::move(order));
    GroupoidModel model = locally_tight_groupoid(og);
    const int np = static_cast<int>(model.spectrum.points.size());

    // x -> T_x must be a bijection onto the spectrum points.
    std::vector<int> phi(static_cast<std::size_t>(n), -1);
    for (int p = 0; p < n; ++p) {
        Bitset tx(m);
        for (int k = 0; k < fam.count(); ++k)
            if (fam.sets[static_cast<std::size_t>(k)].test(p)) tx.set(k);
        int idx = model.spectrum.point_index(tx);
        if (idx < 0) {
            v.failure = "T_x is not a locally tight filter for " + x.name(p);
            return v;
        }
        phi[static_cast<std::size_t>(p)] = idx;
    }
    std::vector<bool> hit(static_cast<std::size_t>(np), false);
    for (int p = 0; p < n; ++p) {
        if (hit[static_cast<std::size_t>(phi[static_cast<std::size_t>(p)])]) {
            v.failure = "point map is not injective";
            return v;
        }
        hit[static_cast<std::size_t>(phi[static_cast<std::size_t>(p)])] = true;
    }
    if (n != np) {
        v.failure = "point map is not surjective";
        return v;
    }

    // Homeomorphism by transporting the open family.
    std::vector<Bitset> transported;
    for (const auto& o : in.topology.opens()) transported.push_back(detail::transport(o, phi, np));
    std::sort(transported.begin(), transported.end());
    if (transported != model.spectrum.topology.opens()) {
        v.failure = "topologies disagree under x -> T_x";
        return v;
    }

    // Composability criterion and the product law, plus inverses.
    for (int p = 0; p < n; ++p) {
        if (model.groupoid.inverse(phi[static_cast<std::size_t>(p)]) != phi[static_cast<std::size_t>(x.inverse(p))]) {
            v.failure = "inverse law fails at " + x.name(p);
            return v;
        }
        for (int q = 0; q < n; ++q) {
            bool cx2 = x.composable(p, q);
            bool cm = model.groupoid.composable(phi[static_cast<std::size_t>(p)], phi[static_cast<std::size_t>(q)]);
            if (cx2 != cm) {
                v.failure = "composability criterion fails at (" + x.name(p) + ", " + x.name(q) + ")";
                return v;
            }
            if (cx2 && model.groupoid.product(phi[static_cast<std::size_t>(p)], phi[static_cast<std::size_t>(q)]) !=
                           phi[static_cast<std::size_t>(x.product(p, q))]) {
                v.failure = "product law fails at (" + x.name(p) + ", " + x.name(q) + ")";
                return v;
            }
        }
    }
    v.ok = true;
    return v;
}

} // namespace ltg
