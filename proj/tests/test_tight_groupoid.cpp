#include <catch2/catch_amalgamated.hpp>

#include "ltg/dot.hpp"
#include "ltg/generators.hpp"
#include "ltg/harness.hpp"
#include "ltg/tight_groupoid.hpp"

#include "support.hpp"

using namespace ltg;

namespace {

const OrderedGroupoid& isym2() {
    static const OrderedGroupoid og = isym_groupoid(2);
    return og;
}

Bitset up_of(const OrderedGroupoid& og, const char* name) {
    return og.order.above(og.order.index(name));
}

OrderedGroupoid single_unit() {
    return OrderedGroupoid::make(FiniteGroupoid::build({"e"}, {{"e", "e", "e"}}, {{"e", "e"}}),
                                 TransRel::build({"e"}, {{"e", "e"}}));
}

} // namespace

TEST_CASE("single elements act on locally tight filters") {
    const auto& og = isym2();
    int swap = og.groupoid.index("1>2,2>1");

    CHECK(act(og, swap, up_of(og, "1>1")) == up_of(og, "1>2"));
    CHECK(act(og, swap, up_of(og, "1>2")) == up_of(og, "1>1"));

    // A unit inside the filter acts as the identity.
    int e1 = og.groupoid.index("1>1");
    CHECK(act(og, e1, up_of(og, "1>1")) == up_of(og, "1>1"));

    CHECK_THROWS_AS(act(og, og.groupoid.index("1>1"), up_of(og, "2>2")), Error);
}

TEST_CASE("action composes along groupoid products") {
    const auto& og = isym2();
    const auto& g = og.groupoid;
    auto points = enumerate_points(og.order, PointKind::locally_tight_filters);
    for (auto [a, b] : g.composable_pairs())
        for (const auto& t : points) {
            bool inner_ok = cone_above(og.order, g.range_image(t)).test(g.source(b));
            if (!inner_ok) continue;
            Bitset bt = act(og, b, t);
            bool outer_ok = cone_above(og.order, g.range_image(bt)).test(g.source(a));
            bool direct_ok = cone_above(og.order, g.range_image(t)).test(g.source(g.product(a, b)));
            if (!outer_ok || !direct_ok) continue;
            CHECK(act(og, a, bt) == act(og, g.product(a, b), t));
        }
}

TEST_CASE("locally tight groupoid models") {
    auto model = locally_tight_groupoid(isym2());
    CHECK(model.spectrum.points.size() == 4);
    CHECK(model.unit_space.count() == 2);
    CHECK(find_groupoid_isomorphism(model.groupoid, pair_groupoid(2)).has_value());
    CHECK(models_isomorphic(model.groupoid, model.spectrum.topology, pair_groupoid(2),
                            ltgtest::pair_groupoid_recovery_input(2).topology));

    auto trivial = locally_tight_groupoid(single_unit());
    CHECK(trivial.spectrum.points.size() == 1);
    CHECK(trivial.unit_space.count() == 1);
}

TEST_CASE("etale verification") {
    const auto& og = isym2();
    auto model = locally_tight_groupoid(og);
    auto rep = verify_etale(og, model);
    CHECK(rep.inversion_homeomorphism);
    CHECK(rep.product_continuous);
    CHECK(rep.source_open);
    CHECK(rep.source_image_identity);
    CHECK(rep.locally_compact_locally_hausdorff);
    CHECK(rep.subgroupoid_laws);
    CHECK(rep.all());

    auto trivial = locally_tight_groupoid(single_unit());
    CHECK(verify_etale(single_unit(), trivial).all());

    // Corrupted model: replace the topology with the indiscrete one; the
    // source map is no longer open.
    GroupoidModel corrupted = model;
    const int np = static_cast<int>(model.spectrum.points.size());
    corrupted.spectrum.topology =
        FiniteSpace::from_basis(model.spectrum.topology.point_names(), {Bitset::full(np)});
    auto bad = verify_etale(og, corrupted);
    CHECK_FALSE(bad.all());
    CHECK_FALSE(bad.source_open);
    CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("germ model matches the spectrum model") {
    const auto& og = isym2();
    auto germ = germ_groupoid(og);
    CHECK(germ.unit_points.size() == 2);
    CHECK(germ.germs.size() == 4);
    CHECK(germ.isomorphic);

    // The explicit map: [swap, up(1>1)] lands on up(1>2), and a unit germ
    // [e, T] with e in T lands back on T.
    const auto& g = og.groupoid;
    int swap = g.index("1>2,2>1");
    Bitset t = up_of(og, "1>1");
    CHECK(cone_above(og.order, g.product_set(og.order.below(swap), t)) == up_of(og, "1>2"));
    int e = g.index("1>1");
    CHECK(cone_above(og.order, g.product_set(og.order.below(e), t)) == t);

    CHECK(germ_groupoid(single_unit()).isomorphic);
}

TEST_CASE("germ model on isym:3") {
    auto og = isym_groupoid(3);
    auto germ = germ_groupoid(og);
    CHECK(germ.unit_points.size() == 3);
    CHECK(germ.germs.size() == 9);
    CHECK(germ.isomorphic);
}

TEST_CASE("groupoid recovery on pair groupoids") {
    auto v2 = groupoid_recovery(ltgtest::pair_groupoid_recovery_input(2));
    INFO(v2.failure);
    CHECK(v2.ok);

    auto v3 = groupoid_recovery(ltgtest::pair_groupoid_recovery_input(3));
    INFO(v3.failure);
    CHECK(v3.ok);

    // One-unit groupoid with the single bisection {e}.
    RecoveryInput in;
    in.groupoid = FiniteGroupoid::build({"e"}, {{"e", "e", "e"}}, {{"e", "e"}});
    Bitset full(1);
    full.set(0);
    in.topology = FiniteSpace::from_basis({"e"}, {full});
    in.family_names = {"E"};
    in.family_sets = {full};
    in.family_product = {{0, 0, 0}};
    in.family_inverse = {{0, 0}};
    CHECK(groupoid_recovery(in).ok);

    // A declared product that disagrees with setwise composition surfaces.
    auto broken = ltgtest::pair_groupoid_recovery_input(2);
    REQUIRE(broken.family_product.size() > 1);
    std::get<2>(broken.family_product[0]) = std::get<2>(broken.family_product[1]);
    CHECK_THROWS_AS(groupoid_recovery(broken), Error);
}

TEST_CASE("ideal chain through the model") {
    const auto& og = isym2();
    auto model = locally_tight_groupoid(og);
    const auto& g = og.groupoid;
    // Every spectrum point is a locally tight filter whose source and range
    // cosets are again spectrum points.
    for (const auto& t : model.spectrum.points) {
        CHECK(is_filter(og.order, t));
        CHECK(is_locally_tight(og.order, t));
        Bitset su = cone_above(og.order, g.product_set(g.inverse_set(t), t));
        CHECK(model.spectrum.point_index(su) >= 0);
    }
}

TEST_CASE("unit space of the model is Hausdorff for inverse semigroup orders") {
    for (int n : {2, 3}) {
        auto og = isym_groupoid(n);
        auto model = locally_tight_groupoid(og);
        // The units form a bi-pseudobasis, so the unit subspace is Hausdorff.
        CHECK(classify(og.order.restricted(og.groupoid.units())).bi_pseudobasis);
        CHECK(hausdorff_subspace(model.spectrum.topology, model.unit_space));
    }
}

TEST_CASE("a non-reflexive order drives the same pipeline") {
    // isym:2 ordered by restriction with the lower element forced to have
    // rank one: transitive and round but not reflexive.
    auto base = isym_groupoid(2);
    const auto& g = base.groupoid;
    std::vector<std::pair<int, int>> prs;
    for (int a = 0; a < g.size(); ++a) {
        if (base.order.below(a).count() > 1) continue;  // keep rank-one sources
        base.order.above(a).for_each([&](int b) { prs.emplace_back(a, b); });
    }
    TransRel sparse = TransRel::build_indexed(g.names(), prs, false);
    auto og = OrderedGroupoid::make(g, sparse);
    int id = og.order.index("1>1,2>2");
    CHECK_FALSE(og.order.less(id, id));  // genuinely non-reflexive
    CHECK(classify(og.order).round);

    auto model = locally_tight_groupoid(og);
    CHECK(model.spectrum.points.size() == 4);
    CHECK(find_groupoid_isomorphism(model.groupoid, pair_groupoid(2)).has_value());
    CHECK(verify_etale(og, model).all());
    CHECK(germ_groupoid(og).isomorphic);
}

TEST_CASE("random bridge groupoids pass the full pipeline") {
    auto ogs = random_bridge_groupoids(3, 12, 0xFEED);
    for (const auto& og : ogs) {
        auto model = locally_tight_groupoid(og);
        CHECK(verify_etale(og, model).all());
        CHECK(germ_groupoid(og).isomorphic);
    }
}

TEST_CASE("dot export shape") {
    auto model = locally_tight_groupoid(isym2());
    auto dot = model_to_dot(model);
    CHECK(dot.find("digraph component_0") != std::string::npos);
    CHECK(dot.find("digraph component_1") == std::string::npos);  // connected
    CHECK(dot.find("[shape=box]") != std::string::npos);
    CHECK(dot.find("->") != std::string::npos);
}
