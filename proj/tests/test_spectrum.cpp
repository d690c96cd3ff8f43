#include <catch2/catch_amalgamated.hpp>

#include "ltg/generators.hpp"
#include "ltg/harness.hpp"
#include "ltg/spectrum.hpp"

#include "support.hpp"

using namespace ltg;
using ltgtest::all_subsets;
using ltgtest::property_instances;
using ltgtest::subset;

TEST_CASE("subset classification on the diamond") {
    auto d = gen_diamond();

    auto up_a = subset(d, {"a", "p", "q"});
    auto ca = subset_class(d, up_a);
    CHECK(ca.filter);
    CHECK(ca.ultrafilter);
    CHECK(ca.tight);
    CHECK(ca.locally_tight);

    auto pq = subset(d, {"p", "q"});
    auto cpq = subset_class(d, pq);
    CHECK(cpq.round_upset);
    CHECK_FALSE(cpq.directed);
    CHECK_FALSE(cpq.filter);

    auto empty = Bitset(d.size());
    auto ce = subset_class(d, empty);
    CHECK(ce.round_upset);
    CHECK_FALSE(ce.filter);
}

TEST_CASE("tightness on the diamond and the one-point relation") {
    auto d = gen_diamond();
    CHECK(is_tight(d, subset(d, {"a", "p", "q"})));
    CHECK_FALSE(is_tight(d, subset(d, {"p"})));

    auto single = TransRel::build({"x"}, {{"x", "x"}});
    Bitset x(1);
    x.set(0);
    CHECK(is_tight(single, x));
}

TEST_CASE("local tightness") {
    auto d = gen_diamond();
    CHECK(is_locally_tight(d, subset(d, {"a", "p", "q"})));

    auto og = isym_groupoid(2);
    Bitset up_id = og.order.above(og.order.index("1>1,2>2"));
    CHECK_FALSE(is_locally_tight(og.order, up_id));

    auto single = TransRel::build({"x"}, {{"x", "x"}});
    CHECK(is_locally_tight(single, Bitset::full(1)));
}

TEST_CASE("point enumeration ground truths") {
    auto d = gen_diamond();
    auto lt = enumerate_points(d, PointKind::locally_tight_filters);
    REQUIRE(lt.size() == 2);
    CHECK(lt[0] == subset(d, {"a", "p", "q"}));
    CHECK(lt[1] == subset(d, {"b", "p", "q"}));

    auto p3 = gen_powerset(3);
    auto ltp = enumerate_points(p3, PointKind::locally_tight_filters);
    CHECK(ltp.size() == 3);
    for (const auto& t : ltp) {
        // Each point is the up-closure of an atom.
        int atom = -1;
        t.for_each([&](int i) {
            if (p3.below(i).count() == 1) atom = i;
        });
        REQUIRE(atom != -1);
        CHECK(t == p3.above(atom));
    }

    auto t22 = gen_tree(2, 2);
    auto ltt = enumerate_points(t22, PointKind::locally_tight_filters);
    auto ult = enumerate_points(t22, PointKind::ultrafilters);
    CHECK(ltt.size() == 4);
    CHECK(ltt == ult);

    auto bad = TransRel::build({"x", "y"}, {{"x", "y"}});
    CHECK_THROWS_AS(enumerate_points(bad, PointKind::filters), Error);
}

TEST_CASE("filter enumeration matches the brute-force subset scan") {
    for (const auto& r : property_instances()) {
        if (r.size() > 4) continue;
        std::vector<Bitset> expect_f, expect_t;
        for (const auto& t : all_subsets(r.size())) {
            if (is_filter(r, t)) expect_f.push_back(t);
            if (is_tight(r, t)) expect_t.push_back(t);
        }
        CHECK(all_filters(r) == expect_f);
        CHECK(enumerate_points(r, PointKind::tight_subsets) == expect_t);
    }
}

TEST_CASE("spectra of the worked examples") {
    auto d = gen_diamond();
    auto lsp = locally_tight_spectrum(d);
    CHECK(lsp.points.size() == 2);
    CHECK(lsp.topology.opens().size() == 4);  // discrete on two points

    auto single = TransRel::build({"x"}, {{"x", "x"}});
    auto ssp = locally_tight_spectrum(single);
    CHECK(ssp.points.size() == 1);
    CHECK(ssp.topology.opens().size() == 2);

    auto t22 = gen_tree(2, 2);
    auto tsp = locally_tight_spectrum(t22);
    CHECK(tsp.points.size() == 4);
    CHECK(tsp.topology.opens().size() == 16);  // discrete on four points
    // O^{leaf} is a singleton for every leaf.
    for (int p = 0; p < t22.size(); ++p) {
        if (!t22.less(p, p)) continue;  // leaves are the self-looped nodes
        int count = 0;
        for (const auto& t : tsp.points)
            if (t.test(p)) ++count;
        CHECK(count == 1);
    }
}

TEST_CASE("equivalence reports on the worked examples") {
    auto mr = verify_meet_equivalence(gen_diamond());
    CHECK(mr.consistent);
    for (const auto& [name, v] : mr.conditions) CHECK(v);

    auto hr = verify_hausdorff_equivalence(gen_powerset(3));
    CHECK(hr.consistent);
    for (const auto& [name, v] : hr.conditions) CHECK(v);

    auto tr = verify_trapping_equivalence(gen_tree(2, 2));
    CHECK(tr.consistent);
    for (const auto& [name, v] : tr.conditions) CHECK(v);

    CHECK_THROWS_AS(verify_equivalence(TransRel::build({"x", "y"}, {{"x", "y"}}), "meet"), Error);
    CHECK_THROWS_AS(verify_equivalence(gen_diamond(), "nonsense"), Error);
}

TEST_CASE("equivalence conditions agree on every small instance") {
    for (const auto& r : property_instances()) {
        auto rep = classify(r);
        if (rep.pseudobasis) {
            auto eq = verify_meet_equivalence(r);
            INFO("meet on carrier of size " << r.size());
            CHECK(eq.consistent);
        }
        if (rep.local_bi_pseudobasis) {
            CHECK(verify_trapping_equivalence(r).consistent);
            CHECK(verify_hausdorff_equivalence(r).consistent);
        }
    }
}

TEST_CASE("reduced quantifier sweeps match the full ones") {
    for (const auto& r : property_instances()) {
        if (r.size() > 3) continue;
        detail::MaskRel m(r);
        CHECK(detail::verify_ctrapping_reduced(m) == detail::verify_ctrapping_full(m));
    }
}

TEST_CASE("family meet condition matches direct family enumeration on tiny carriers") {
    for (const auto& r : property_instances()) {
        if (r.size() > 3) continue;
        detail::MaskRel m(r);

        // Direct route: families are sets of subsets of the carrier.
        const std::uint32_t nmasks = m.nmasks;
        bool direct = true;
        for (std::uint64_t psi_bits = 1; psi_bits < (std::uint64_t{1} << nmasks) && direct; ++psi_bits) {
            for (std::uint64_t phi_bits = 1; phi_bits < (std::uint64_t{1} << nmasks) && direct; ++phi_bits) {
                bool hyp = true;
                std::uint64_t lhs = m.full, rhs = m.full;
                for (std::uint32_t rmask = 0; rmask < nmasks; ++rmask) {
                    if (!((psi_bits >> rmask) & 1u)) continue;
                    rhs &= m.below[rmask];
                    bool covered = false;
                    for (std::uint32_t qmask = 0; qmask < nmasks; ++qmask)
                        if (((phi_bits >> qmask) & 1u) && m.C(qmask, rmask)) covered = true;
                    hyp = hyp && covered;
                }
                for (std::uint32_t qmask = 0; qmask < nmasks; ++qmask)
                    if ((phi_bits >> qmask) & 1u) lhs &= m.below[qmask];
                if (hyp && !m.C(static_cast<std::uint32_t>(lhs), static_cast<std::uint32_t>(rhs)))
                    direct = false;
            }
        }

        auto eq = verify_meet_equivalence(r);
        bool closure_route = false;
        for (const auto& [name, v] : eq.conditions)
            if (name == "family_c_meet_preserving") closure_route = v;
        CHECK(direct == closure_route);
    }
}

TEST_CASE("ultrafilters are locally tight and dense") {
    for (const auto& r : property_instances()) {
        auto rep = classify(r);
        if (!rep.local_bi_pseudobasis) continue;
        for (const auto& u : enumerate_points(r, PointKind::ultrafilters))
            CHECK(is_locally_tight(r, u));

        auto sp = locally_tight_spectrum(r);
        auto ultra = enumerate_points(r, PointKind::ultrafilters);
        std::vector<int> ultra_idx;
        for (const auto& u : ultra) ultra_idx.push_back(sp.point_index(u));
        for (const auto& no : sp.named) {
            if (no.points.empty()) continue;
            bool contains_ultra = false;
            for (int i : ultra_idx) contains_ultra = contains_ultra || no.points.test(i);
            INFO("open " << no.name);
            CHECK(contains_ultra);
        }
    }
}

TEST_CASE("element opens form a neighbourhood base at every ultrafilter") {
    for (const auto& r : property_instances()) {
        if (!classify(r).local_bi_pseudobasis) continue;
        auto sp = locally_tight_spectrum(r);
        const int np = static_cast<int>(sp.points.size());
        auto element_open = [&](int p) {
            Bitset m(np);
            for (int i = 0; i < np; ++i)
                if (sp.points[static_cast<std::size_t>(i)].test(p)) m.set(i);
            return m;
        };
        for (const auto& u : enumerate_points(r, PointKind::ultrafilters)) {
            int ui = sp.point_index(u);
            REQUIRE(ui >= 0);
            for (const auto& open : sp.topology.opens()) {
                if (!open.test(ui)) continue;
                bool base = false;
                u.for_each([&](int p) {
                    if (base) return;
                    Bitset eo = element_open(p);
                    if (eo.test(ui) && eo.subset_of(open)) base = true;
                });
                CHECK(base);
            }
        }
    }
}

TEST_CASE("pair opens form a basis refining the generating opens") {
    for (const auto& r : property_instances()) {
        if (r.size() > 3 || !classify(r).local_bi_pseudobasis) continue;
        auto sp = locally_tight_spectrum(r);
        const int np = static_cast<int>(sp.points.size());

        // Every O^p_R is a union of pair opens.
        for (int p = 0; p < r.size(); ++p) {
            Bitset pm(r.size());
            pm.set(p);
            for (const auto& rr : all_subsets(r.size())) {
                if (!compact_cover(r, rr, pm)) continue;
                Bitset open(np);
                for (int i = 0; i < np; ++i)
                    if (sp.points[static_cast<std::size_t>(i)].test(p) &&
                        compact_cover(r, rr, r.below(p) - sp.points[static_cast<std::size_t>(i)]))
                        open.set(i);
                Bitset covered(np);
                for (const auto& po : sp.pair_opens)
                    if (po.points.subset_of(open)) covered |= po.points;
                CHECK(covered == open);
            }
        }

        // Neighbourhood base: every open around T refines to a pair open
        // O^{p,t}_F with t in T.
        for (const auto& open : sp.topology.opens()) {
            for (int i = 0; i < np; ++i) {
                if (!open.test(i)) continue;
                bool refined = false;
                for (const auto& po : sp.pair_opens) {
                    if (!po.points.test(i) || !po.points.subset_of(open)) continue;
                    if (sp.points[static_cast<std::size_t>(i)].test(po.q)) refined = true;
                    if (refined) break;
                }
                CHECK(refined);
            }
        }
    }
}

TEST_CASE("pair opens are the doubleton case of the general opens") {
    for (const auto& r : property_instances()) {
        if (r.size() > 3 || !classify(r).local_bi_pseudobasis) continue;
        auto sp = locally_tight_spectrum(r);
        for (const auto& po : sp.pair_opens) {
            Bitset g(r.size());
            g.set(po.p);
            g.set(po.q);
            CHECK(po.points == general_open(r, sp, g, po.witness_f));
        }
    }
}

TEST_CASE("each element open is the tight spectrum of its cone") {
    // T -> T intersect p^> identifies O^p with the tight subsets of the
    // restricted relation, as spaces.
    for (const auto& r : property_instances()) {
        if (r.size() > 3 || !classify(r).local_bi_pseudobasis) continue;
        auto sp = locally_tight_spectrum(r);
        const int np = static_cast<int>(sp.points.size());
        for (int p = 0; p < r.size(); ++p) {
            auto sub = r.restricted(r.below(p));
            auto tight = tight_spectrum(sub);
            // Point sets correspond.
            std::vector<Bitset> images;
            std::vector<int> open_points;
            for (int i = 0; i < np; ++i) {
                if (!sp.points[static_cast<std::size_t>(i)].test(p)) continue;
                open_points.push_back(i);
                Bitset img(sub.size());
                for (int k = 0; k < sub.size(); ++k)
                    if (sp.points[static_cast<std::size_t>(i)].test(r.index(sub.name(k)))) img.set(k);
                images.push_back(img);
            }
            std::vector<Bitset> sorted_images = images;
            std::sort(sorted_images.begin(), sorted_images.end());
            REQUIRE(sorted_images == tight.points);
            // Topologies correspond: the subspace opens of O^p transport to
            // the tight spectrum's opens.
            std::set<Bitset> subspace;
            for (const auto& open : sp.topology.opens()) {
                Bitset img(static_cast<int>(tight.points.size()));
                for (std::size_t k = 0; k < open_points.size(); ++k)
                    if (open.test(open_points[k]))
                        img.set(tight.point_index(images[k]));
                subspace.insert(img);
            }
            std::set<Bitset> expected(tight.topology.opens().begin(), tight.topology.opens().end());
            CHECK(subspace == expected);
        }
    }
}

TEST_CASE("compact containment transfers between the order and the spectrum") {
    for (const auto& r : property_instances()) {
        if (!classify(r).local_bi_pseudobasis) continue;
        auto sp = locally_tight_spectrum(r);
        const int np = static_cast<int>(sp.points.size());
        auto element_open = [&](int p) {
            Bitset m(np);
            for (int i = 0; i < np; ++i)
                if (sp.points[static_cast<std::size_t>(i)].test(p)) m.set(i);
            return m;
        };
        for (int p = 0; p < r.size(); ++p) {
            // Each O^p is a Hausdorff subspace.
            CHECK(hausdorff_subspace(sp.topology, element_open(p)));
            r.below(p).for_each([&](int q) {
                r.below(p).for_each([&](int rr) {
                    Bitset qm(r.size()), rm(r.size());
                    qm.set(q);
                    rm.set(rr);
                    bool order_side = compact_cover(r, qm, rm);
                    bool spectrum_side =
                        compact_containment(sp.topology, element_open(q), element_open(rr));
                    CHECK(order_side == spectrum_side);
                });
            });
        }
        auto props = space_props(sp.topology);
        CHECK(props.locally_compact);
        CHECK(props.locally_hausdorff);
    }
}

TEST_CASE("maximal centred filters are dense in the tight spectrum") {
    for (const auto& r : property_instances()) {
        if (!classify(r).pseudobasis) continue;
        auto sp = tight_spectrum(r);
        auto mc = enumerate_points(r, PointKind::max_centred_filters);
        std::vector<int> mc_idx;
        for (const auto& t : mc) {
            int i = sp.point_index(t);
            if (i >= 0) mc_idx.push_back(i);
        }
        for (const auto& no : sp.named) {
            if (no.points.empty()) continue;
            bool hit = false;
            for (int i : mc_idx) hit = hit || no.points.test(i);
            INFO("open " << no.name);
            CHECK(hit);
        }
    }
}

TEST_CASE("local tightness glues along initial segments") {
    for (const auto& r : property_instances()) {
        auto rep = classify(r);
        // On bi-pseudobases a set tight in a cone extends to a tight up-set.
        if (rep.bi_pseudobasis && r.size() <= 4) {
            for (int p = 0; p < r.size(); ++p) {
                for (const auto& t : all_subsets(r.size())) {
                    if (t.empty() || !t.subset_of(r.below(p))) continue;
                    if (!is_tight_in(r, t, r.below(p))) continue;
                    CHECK(is_tight(r, cone_above(r, t)));
                }
            }
        }
        // For filters, one initial segment decides local tightness.
        if (rep.local_bi_pseudobasis) {
            for (const auto& f : all_filters(r)) {
                bool whole = is_locally_tight(r, f);
                f.for_each([&](int t) {
                    CHECK(is_tight_in(r, f & r.below(t), r.below(t)) == whole);
                });
            }
        }
    }
}
