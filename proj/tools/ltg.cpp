#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>

#include "ltg/dot.hpp"
#include "ltg/generators.hpp"
#include "ltg/harness.hpp"
#include "ltg/io.hpp"
#include "ltg/recovery.hpp"
#include "ltg/tight_groupoid.hpp"

namespace {

using namespace ltg;

int error_exit_code(const Error& e) {
    static const std::set<std::string> input_errors = {
        "ParseError", "DuplicateElement", "UnknownElement", "NotTransitive",
        "UnknownPoint", "TooLarge", "NotAssociative", "BadInverse", "ProductDomainMismatch"};
    return input_errors.count(e.code()) ? 2 : 1;
}

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("ParseError", "cannot write " + out_path);
    out << text;
}

const char* flag(bool b) { return b ? "true" : "false"; }

int run_check(const std::string& path, std::optional<bool> close) {
    json j = parse_file(path);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "order") {
        TransRel r = relation_from_json(j, close);
        AxiomReport rep = classify(r);
        std::cout << "round: " << flag(rep.round) << "\n";
        std::cout << "pseudobasis: " << flag(rep.pseudobasis) << "\n";
        std::cout << "bi_pseudobasis: " << flag(rep.bi_pseudobasis) << "\n";
        std::cout << "local_bi_pseudobasis: " << flag(rep.local_bi_pseudobasis) << "\n";
        auto witness = [](const char* label, const std::vector<std::string>& w) {
            if (w.empty()) return;
            std::cout << label << " witness:";
            for (const auto& x : w) std::cout << " " << x;
            std::cout << "\n";
        };
        witness("round", rep.round_witness);
        witness("pseudobasis", rep.pseudobasis_witness);
        witness("bi_pseudobasis", rep.bi_witness);
        witness("local_bi_pseudobasis", rep.local_witness);
        return (rep.round && rep.pseudobasis && rep.bi_pseudobasis && rep.local_bi_pseudobasis) ? 0 : 1;
    }
    if (kind == "ordered_groupoid") {
        // Report the six conditions even when construction-level validation
        // would reject, so build the parts separately.
        std::vector<std::string> elems = j.at("elements").get<std::vector<std::string>>();
        std::vector<std::tuple<std::string, std::string, std::string>> prods;
        for (const auto& t : j.at("product"))
            prods.emplace_back(t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>());
        std::vector<std::pair<std::string, std::string>> invs;
        for (const auto& t : j.at("inverse"))
            invs.emplace_back(t[0].get<std::string>(), t[1].get<std::string>());
        FiniteGroupoid g = FiniteGroupoid::build(elems, prods, invs);
        std::vector<std::pair<int, int>> prs;
        for (const auto& t : j.at("order"))
            prs.emplace_back(g.index(t[0].get<std::string>()), g.index(t[1].get<std::string>()));
        TransRel order = TransRel::build_indexed(g.names(), prs, false);
        OrderedReport rep = check_ordered(g, order);
        std::cout << "product: " << flag(rep.product) << "\n";
        std::cout << "inverse: " << flag(rep.inverse) << "\n";
        std::cout << "support: " << flag(rep.support) << "\n";
        std::cout << "product_reduced: " << flag(rep.product_reduced) << "\n";
        std::cout << "inverse_reduced: " << flag(rep.inverse_reduced) << "\n";
        std::cout << "support_reduced: " << flag(rep.support_reduced) << "\n";
        std::cout << "equivalent_forms: " << flag(rep.equivalent_forms) << "\n";
        if (!rep.witness.empty()) {
            std::cout << "witness:";
            for (const auto& x : rep.witness) std::cout << " " << x;
            std::cout << "\n";
        }
        return rep.all() && rep.equivalent_forms ? 0 : 1;
    }
    if (kind == "inverse_semigroup") {
        InverseSemigroup s = inverse_semigroup_from_json(j);
        TransRel order = canonical_order(s, false);
        std::cout << "inverse_semigroup: valid\n";
        std::cout << "canonical_order_characterisations: consistent\n";
        std::cout << "elements: " << s.size() << "\n";
        std::cout << "order_pairs: " << order.pairs().size() << "\n";
        return 0;
    }
    if (kind == "space") {
        SpaceFile sf = space_from_json(j);
        if (sf.family.empty()) {
            auto props = space_props(sf.space);
            std::cout << "hausdorff: " << flag(props.hausdorff) << "\n";
            std::cout << "locally_hausdorff: " << flag(props.locally_hausdorff) << "\n";
            std::cout << "locally_compact: " << flag(props.locally_compact) << "\n";
            return 0;
        }
        ConcreteFamily fam = ConcreteFamily::make(sf.space, sf.family);
        ClbpReport rep = check_concrete_clbp(fam);
        std::cout << "locally_hausdorff: " << flag(rep.locally_hausdorff) << "\n";
        std::cout << "cover: " << flag(rep.cover) << "\n";
        std::cout << "point_filter: " << flag(rep.point_filter) << "\n";
        std::cout << "dense: " << flag(rep.dense) << "\n";
        std::cout << "separating: " << flag(rep.separating) << "\n";
        if (!rep.witness.empty()) {
            std::cout << "witness:";
            for (const auto& x : rep.witness) std::cout << " " << x;
            std::cout << "\n";
        }
        return rep.all() ? 0 : 1;
    }
    throw Error("ParseError", "check does not support kind " + kind);
}

int run_spectrum(const std::string& path, const std::string& kind_flag, const std::string& out,
                 std::optional<bool> close) {
    json j = parse_file(path);
    if (j.at("kind").get<std::string>() != "order")
        throw Error("ParseError", "spectrum needs an order file");
    TransRel r = relation_from_json(j, close);
    SpectrumSpace sp = kind_flag == "tight" ? tight_spectrum(r) : locally_tight_spectrum(r);
    write_output(out, dump(spectrum_to_json(r, sp)));
    return 0;
}

OrderedGroupoid load_ordered_groupoid(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "ordered_groupoid") return ordered_groupoid_from_json(j);
    if (kind == "inverse_semigroup") {
        InverseSemigroup s = inverse_semigroup_from_json(j);
        return semigroup_to_ordered_groupoid(s, canonical_order(s, true));
    }
    throw Error("ParseError", "expected an ordered_groupoid or inverse_semigroup file");
}

int run_groupoid(const std::string& path, bool dot, const std::string& out) {
    OrderedGroupoid og = load_ordered_groupoid(parse_file(path));
    GroupoidModel model = locally_tight_groupoid(og);
    write_output(out, dot ? model_to_dot(model) : dump(model_to_json(model)));
    return 0;
}

int run_germs(const std::string& path) {
    OrderedGroupoid og = load_ordered_groupoid(parse_file(path));
    GermModel germ = germ_groupoid(og);
    std::cout << "germs: " << germ.germs.size() << "\n";
    std::cout << "unit_points: " << germ.unit_points.size() << "\n";
    std::cout << "isomorphic: " << flag(germ.isomorphic) << "\n";
    if (!germ.isomorphic) std::cout << "failure: " << germ.failure << "\n";
    return germ.isomorphic ? 0 : 1;
}

int run_recover(const std::string& path) {
    json j = parse_file(path);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "space") {
        SpaceFile sf = space_from_json(j);
        if (sf.family.empty()) throw Error("ParseError", "recovery needs a named family");
        ConcreteFamily fam = ConcreteFamily::make(sf.space, sf.family);
        TopRecoveryResult res = recovery(fam);
        std::cout << "recovered: " << flag(res.ok) << "\n";
        if (!res.ok) std::cout << "failure: " << res.failure << "\n";
        return res.ok ? 0 : 1;
    }
    if (kind == "groupoid_model") {
        RecoveryInput in = recovery_input_from_json(j);
        RecoveryVerdict v = groupoid_recovery(in);
        std::cout << "recovered: " << flag(v.ok) << "\n";
        if (!v.ok) std::cout << "failure: " << v.failure << "\n";
        return v.ok ? 0 : 1;
    }
    throw Error("ParseError", "recover needs a space or groupoid_model file");
}

int run_equiv(const std::string& theorem, int max_size, int samples, std::uint64_t seed) {
    HarnessResult res = run_equivalence_harness(theorem, max_size, samples, seed);
    if (res.inconsistencies.empty()) {
        std::cout << "checked " << res.checked << " instances, 0 inconsistencies\n";
        return 0;
    }
    std::cout << "checked " << res.checked << " instances, " << res.inconsistencies.size()
              << " inconsistencies\n";
    for (const auto& [rel, rep] : res.inconsistencies) {
        std::cout << rep.witness << "\n";
        std::cout << dump(relation_to_json(rel));
    }
    return 1;
}

int run_example(const std::string& name, const std::string& emit) {
    if (emit.empty()) throw Error("ParseError", "example needs --emit PATH");
    Generated gen = generate(name);
    std::string text;
    if (gen.rel) text = dump(relation_to_json(*gen.rel));
    else text = dump(ordered_groupoid_to_json(*gen.og));
    write_output(emit, text);
    return 0;
}

int run_export(const std::string& path, const std::string& out, std::optional<bool> close) {
    json j = parse_file(path);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "order") {
        write_output(out, dump(relation_to_json(relation_from_json(j, close))));
        return 0;
    }
    if (kind == "ordered_groupoid") {
        write_output(out, dump(ordered_groupoid_to_json(ordered_groupoid_from_json(j))));
        return 0;
    }
    if (kind == "inverse_semigroup") {
        write_output(out, dump(inverse_semigroup_to_json(inverse_semigroup_from_json(j))));
        return 0;
    }
    if (kind == "space") {
        write_output(out, dump(space_to_json(space_from_json(j))));
        return 0;
    }
    throw Error("ParseError", "export does not support kind " + kind);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Finite-scale checker for cover relations, tight and locally tight filter spectra,\n"
        "ordered and coset groupoids, the locally tight etale groupoid and its germ model.\n"
        "Exit codes: 0 all checks hold, 1 a property or axiom fails, 2 parse or input errors.\n"
        "Note: tree:b:d puts self-loops on the leaves so the truncated ancestor relation\n"
        "stays round."};
    app.require_subcommand(1);

    std::string input, out_path, kind = "locally_tight", theorem = "meet", name, emit;
    bool dot = false, close_flag = false;
    int max_size = 5, samples = 500;
    std::uint64_t seed = 0xC0FFEE;

    auto* c_check = app.add_subcommand("check", "classify a structure file against its axioms");
    c_check->add_option("input", input)->required();
    c_check->add_flag("--close", close_flag, "transitively close the pair list before checking");

    auto* c_spec = app.add_subcommand("spectrum", "emit a spectrum of an order file as JSON");
    c_spec->add_option("input", input)->required();
    c_spec->add_option("--kind", kind, "tight | locally_tight")
        ->check(CLI::IsMember({"tight", "locally_tight"}));
    c_spec->add_option("--out", out_path);
    c_spec->add_flag("--close", close_flag);

    auto* c_gpd = app.add_subcommand("groupoid", "emit the locally tight groupoid model");
    c_gpd->add_option("input", input)->required();
    c_gpd->add_flag("--dot", dot, "emit DOT instead of JSON");
    c_gpd->add_option("--out", out_path);

    auto* c_germ = app.add_subcommand("germs", "build the germ model and verify the isomorphism");
    c_germ->add_option("input", input)->required();

    auto* c_rec = app.add_subcommand("recover", "run a recovery theorem on a space or model file");
    c_rec->add_option("input", input)->required();

    auto* c_eq = app.add_subcommand("equiv", "fuzz one equivalence theorem over small instances");
    c_eq->add_option("--theorem", theorem, "meet | trapping | hausdorff")
        ->check(CLI::IsMember({"meet", "trapping", "hausdorff"}));
    c_eq->add_option("--max-size", max_size)->check(CLI::Range(1, 6));
    c_eq->add_option("--samples", samples)->check(CLI::Range(0, 100000));
    c_eq->add_option("--seed", seed);

    auto* c_ex = app.add_subcommand("example", "write a built-in example structure file");
    c_ex->add_option("--name", name, "arrow | diamond | powerset:n | chain:n | tree:b:d | isym:n")
        ->required();
    c_ex->add_option("--emit", emit)->required();

    auto* c_exp = app.add_subcommand("export", "re-emit a structure file in canonical form");
    c_exp->add_option("input", input)->required();
    c_exp->add_option("--out", out_path);
    c_exp->add_flag("--close", close_flag);

    CLI11_PARSE(app, argc, argv);

    std::optional<bool> close;
    if (close_flag) close = true;

    try {
        if (c_check->parsed()) return run_check(input, close);
        if (c_spec->parsed()) return run_spectrum(input, kind, out_path, close);
        if (c_gpd->parsed()) return run_groupoid(input, dot, out_path);
        if (c_germ->parsed()) return run_germs(input);
        if (c_rec->parsed()) return run_recover(input);
        if (c_eq->parsed()) return run_equiv(theorem, max_size, samples, seed);
        if (c_ex->parsed()) return run_example(name, emit);
        if (c_exp->parsed()) return run_export(input, out_path, close);
    } catch (const ltg::Error& e) {
        std::cerr << e.what() << "\n";
        return error_exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
