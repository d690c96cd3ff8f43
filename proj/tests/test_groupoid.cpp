#include <catch2/catch_amalgamated.hpp>

#include "ltg/coset.hpp"
#include "ltg/generators.hpp"
#include "ltg/groupoid.hpp"

#include "support.hpp"

using namespace ltg;
using ltgtest::all_subsets;

TEST_CASE("groupoid construction and validation") {
    auto pg = pair_groupoid(2);
    CHECK(pg.size() == 4);
    CHECK(pg.units().count() == 2);
    CHECK(pg.is_unit(pg.index("(1,1)")));
    CHECK(pg.is_unit(pg.index("(2,2)")));

    auto e = FiniteGroupoid::build({"e"}, {{"e", "e", "e"}}, {{"e", "e"}});
    CHECK(e.units().count() == 1);

    // (1,2)(1,2) is not composable: declaring it must fail.
    CHECK_THROWS_MATCHES(
        FiniteGroupoid::build({"(1,1)", "(1,2)", "(2,1)", "(2,2)"},
                              {{"(1,1)", "(1,1)", "(1,1)"},
                               {"(2,2)", "(2,2)", "(2,2)"},
                               {"(1,2)", "(2,1)", "(1,1)"},
                               {"(2,1)", "(1,2)", "(2,2)"},
                               {"(1,2)", "(1,2)", "(1,1)"}},
                              {{"(1,1)", "(1,1)"}, {"(2,2)", "(2,2)"}, {"(1,2)", "(2,1)"},
                               {"(2,1)", "(1,2)"}}),
        Error,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("ProductDomainMismatch")));
}

TEST_CASE("ordered groupoid conditions") {
    auto og = isym_groupoid(2);
    auto rep = check_ordered(og.groupoid, og.order);
    CHECK(rep.all());
    CHECK(rep.product_reduced);
    CHECK(rep.inverse_reduced);
    CHECK(rep.support_reduced);
    CHECK(rep.equivalent_forms);

    auto pg = pair_groupoid_og(2);
    auto prep = check_ordered(pg.groupoid, pg.order);
    CHECK(prep.all());

    // The full relation is transitive but breaks the support condition.
    std::vector<std::pair<int, int>> full;
    for (int a = 0; a < og.size(); ++a)
        for (int b = 0; b < og.size(); ++b) full.emplace_back(a, b);
    TransRel full_rel = TransRel::build_indexed(og.groupoid.names(), full, false);
    auto frep = check_ordered(og.groupoid, full_rel);
    CHECK_FALSE(frep.support_reduced);
    CHECK(frep.equivalent_forms);
    CHECK_FALSE(frep.witness.empty());
}

TEST_CASE("restrictions") {
    auto og = isym_groupoid(2);
    const auto& g = og.groupoid;
    int swap = g.index("1>2,2>1");
    int id1 = g.index("1>1");

    CHECK(restrict_element(og, RestrictSide::range, id1, swap) == g.index("2>1"));
    CHECK(restrict_element(og, RestrictSide::source, id1, swap) == g.index("1>2"));
    // Identity case: restricting to the full range gives the element back.
    CHECK(restrict_element(og, RestrictSide::range, g.range(swap), swap) == swap);

    CHECK_THROWS_AS(restrict_element(og, RestrictSide::range, g.index("2>2"), g.index("1>1")), Error);

    // Restriction uniqueness: for all e < r(p) exactly one q < p has r(q) = e.
    for (int p = 0; p < g.size(); ++p)
        og.order.below(g.range(p)).for_each([&](int e) {
            int count = 0;
            og.order.below(p).for_each([&](int q) {
                if (g.range(q) == e) ++count;
            });
            CHECK(count == 1);
        });
}

TEST_CASE("canonical order") {
    auto s = isym_semigroup(2);
    auto ord = canonical_order(s, true);
    CHECK(ord.size() == 6);
    CHECK(ord.pairs().size() == 10);  // six loops plus atoms below id and swap
    CHECK(ord.less(ord.index("1>1"), ord.index("1>1,2>2")));
    CHECK(ord.less(ord.index("1>2"), ord.index("1>2,2>1")));
    CHECK_FALSE(ord.less(ord.index("1>1"), ord.index("1>2,2>1")));

    // Semilattice {0, e}: dropping the zero leaves a single self-loop.
    auto sl = InverseSemigroup::build({"0", "e"}, {{"0", "0"}, {"0", "e"}}, std::string("0"));
    auto slo = canonical_order(sl, true);
    CHECK(slo.pairs() == std::vector<std::pair<int, int>>{{0, 0}});

    // A left-zero table is not an inverse semigroup; the two canonical
    // order characterisations disagree on it.
    auto broken = InverseSemigroup::build({"a", "b"}, {{"a", "a"}, {"b", "b"}}, std::nullopt,
                                          nullptr, false);
    CHECK_THROWS_MATCHES(canonical_order(broken, false), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("CharacterisationMismatch")));

    // The canonical order is a partial order: reflexive and antisymmetric.
    for (int n : {2, 3}) {
        auto so = canonical_order(isym_semigroup(n), true);
        for (int a = 0; a < so.size(); ++a) {
            CHECK(so.less(a, a));
            for (int b = 0; b < so.size(); ++b)
                if (a != b) CHECK_FALSE((so.less(a, b) && so.less(b, a)));
        }
    }
}

TEST_CASE("inverse semigroup validation") {
    CHECK_THROWS_AS(InverseSemigroup::build({"a", "b"}, {{"a", "a"}, {"b", "b"}}), Error);
    auto s = isym_semigroup(2);
    CHECK(s.size() == 7);
    CHECK(s.zero().has_value());
    CHECK(s.idempotent(s.index("1>1")));
    CHECK(s.star(s.index("1>2")) == s.index("2>1"));
}

TEST_CASE("semigroup bridge") {
    auto s = isym_semigroup(2);
    auto og = semigroup_to_ordered_groupoid(s, canonical_order(s, true));
    auto direct = isym_groupoid(2);
    CHECK(og.groupoid.names() == direct.groupoid.names());
    for (int a = 0; a < og.size(); ++a)
        for (int b = 0; b < og.size(); ++b) {
            CHECK(og.groupoid.composable(a, b) == direct.groupoid.composable(a, b));
            if (og.groupoid.composable(a, b))
                CHECK(og.groupoid.product(a, b) == direct.groupoid.product(a, b));
        }
    CHECK(og.order == direct.order);

    // All idempotents: the bridge yields a groupoid of units only.
    auto p2 = gen_powerset(2);
    std::vector<std::string> names = p2.names();
    std::vector<std::string> with_zero = names;
    with_zero.push_back("0");
    const int m = static_cast<int>(with_zero.size());
    std::vector<int> table(static_cast<std::size_t>(m) * m, m - 1);
    for (int a = 0; a + 1 < m; ++a)
        for (int b = 0; b + 1 < m; ++b) {
            Bitset meet = p2.below(a) & p2.below(b);
            // Meet of two subsets in the inclusion order; empty falls to 0.
            int best = -1;
            meet.for_each([&](int c) {
                if (meet.subset_of(p2.below(c))) best = c;
            });
            table[static_cast<std::size_t>(a) * m + b] = best < 0 ? m - 1 : best;
        }
    auto lattice = InverseSemigroup::build_indexed(std::move(with_zero), std::move(table), m - 1);
    auto latt_og = semigroup_to_ordered_groupoid(lattice, canonical_order(lattice, true));
    CHECK(latt_og.groupoid.units().count() == latt_og.size());

    // Equality order gives the discrete ordered groupoid.
    std::vector<std::pair<int, int>> eq;
    auto full_ord = canonical_order(s, true);
    for (int i = 0; i < full_ord.size(); ++i) eq.emplace_back(i, i);
    auto eq_rel = TransRel::build_indexed(full_ord.names(), eq, false);
    auto eq_og = semigroup_to_ordered_groupoid(s, eq_rel);
    CHECK(eq_og.size() == 6);
    CHECK(eq_og.order.pairs().size() == 6);

    // An order that is not contained in the canonical one is refused.
    std::vector<std::pair<int, int>> bad = eq;
    bad.emplace_back(full_ord.index("1>1,2>2"), full_ord.index("1>1"));
    auto bad_rel = TransRel::build_indexed(full_ord.names(), bad, true);
    CHECK_THROWS_MATCHES(semigroup_to_ordered_groupoid(s, bad_rel), Error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("PremiseViolation")));
}

TEST_CASE("downward closed bisections") {
    auto pg = pair_groupoid_og(2);
    auto bs = bisection_semigroup(pg);
    CHECK(bs.bisections.size() == 6);  // the non-empty partial injections

    auto single = OrderedGroupoid::make(
        FiniteGroupoid::build({"e"}, {{"e", "e", "e"}}, {{"e", "e"}}),
        TransRel::build({"e"}, {{"e", "e"}}));
    CHECK(bisection_semigroup(single).bisections.size() == 1);

    // The cone-map laws are verified during construction on isym:2.
    auto og = isym_groupoid(2);
    auto ibs = bisection_semigroup(og);
    CHECK(ibs.bisections.size() == 8);
    CHECK(ibs.element_map_injective);
}

TEST_CASE("source image laws on isym:2") {
    auto og = isym_groupoid(2);
    const auto& g = og.groupoid;
    for (int p = 0; p < g.size(); ++p) {
        auto bounded = all_subsets(g.size());
        for (const auto& q : bounded) {
            if (!q.subset_of(og.order.below(p))) continue;
            Bitset sq = g.source_image(q);
            Bitset pm(g.size());
            pm.set(p);
            // s[Q] = Q^-1 Q = Q^-1 p^> = (p^-1)^> Q.
            CHECK(sq == g.product_set(g.inverse_set(q), q));
            CHECK(sq == g.product_set(g.inverse_set(q), og.order.below(p)));
            CHECK(sq == g.product_set(og.order.below(g.inverse(p)), q));
            // s[p^> \ Q] = s(p)^> \ s[Q].
            CHECK(g.source_image(og.order.below(p) - q) ==
                  og.order.below(g.source(p)) - sq);
            // s[Q^>] = s[Q]^>.
            CHECK(g.source_image(cone_below(og.order, q)) == cone_below(og.order, sq));
            for (const auto& rr : bounded) {
                if (!rr.subset_of(og.order.below(p))) continue;
                Bitset sr = g.source_image(rr);
                CHECK(disjoint(og.order, q, rr) == disjoint(og.order, sq, sr));
                CHECK(dense_cover(og.order, q, rr) == dense_cover(og.order, sq, sr));
                CHECK(compact_cover(og.order, q, rr) == compact_cover(og.order, sq, sr));
            }
        }
    }
}

TEST_CASE("units are downward closed") {
    for (auto n : {2, 3}) {
        auto og = isym_groupoid(n);
        Bitset below_units = cone_below(og.order, og.groupoid.units());
        CHECK(below_units.subset_of(og.groupoid.units()));
    }
}
