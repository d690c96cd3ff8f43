#pragma once

#include <string>
#include <vector>

#include "ltg/spectrum.hpp"
#include "ltg/topology.hpp"

namespace ltg {

struct TopRecoveryResult {
    TransRel induced;
    std::vector<int> point_map;  // space point -> spectrum point index
    bool ok = false;
    std::string failure;
};

/// Recovery for spaces: a concrete local bi-pseudobasis induces an abstract
/// one under compact containment, and x -> T_x = {O : x in O} is a
/// homeomorphism onto the locally tight spectrum of the induced relation.
/// The homeomorphism check transports the open family through the explicit
/// map; there is no search.
inline TopRecoveryResult recovery(const ConcreteFamily& f) {
    auto clbp = check_concrete_clbp(f);
    if (!clbp.all()) throw Error("AxiomViolation", "family is not a concrete local bi-pseudobasis");
    TopRecoveryResult res;
    res.induced = induced_relation(f);
    auto rep = classify(res.induced);
    if (!rep.round || !rep.local_bi_pseudobasis)
        throw Error("TheoremCounterexample",
                    "induced relation of a concrete local bi-pseudobasis is not an abstract one");
    auto spectrum = locally_tight_spectrum(res.induced);
    const int n = f.space.size();
    const int np = static_cast<int>(spectrum.points.size());

    res.point_map.assign(static_cast<std::size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
        Bitset tx(f.count());
        for (int i = 0; i < f.count(); ++i)
            if (f.sets[static_cast<std::size_t>(i)].test(x)) tx.set(i);
        int idx = spectrum.point_index(tx);
        if (idx < 0) {
            res.failure = "T_x is not a locally tight filter at " + f.space.point_name(x);
            return res;
        }
        res.point_map[static_cast<std::size_t>(x)] = idx;
    }
    std::vector<bool> hit(static_cast<std::size_t>(np), false);
    for (int x = 0; x < n; ++x) {
        int i = res.point_map[static_cast<std::size_t>(x)];
        if (hit[static_cast<std::size_t>(i)]) {
            res.failure = "x -> T_x is not injective";
            return res;
        }
        hit[static_cast<std::size_t>(i)] = true;
    }
    if (n != np) {
        res.failure = "x -> T_x is not surjective";
        return res;
    }
    std::vector<Bitset> transported;
    for (const auto& o : f.space.opens()) {
        Bitset img(np);
        o.for_each([&](int x) { img.set(res.point_map[static_cast<std::size_t>(x)]); });
        transported.push_back(img);
    }
    std::sort(transported.begin(), transported.end());
    if (transported != spectrum.topology.opens()) {
        res.failure = "open families disagree under x -> T_x";
        return res;
    }
    res.ok = true;
    return res;
}

struct AbstractConcreteReport {
    ClbpReport clbp;
    ConcreteFamily family;  // the element opens over the locally tight spectrum
};

/// The element opens (O^p) of a local bi-pseudobasis form a concrete local
/// bi-pseudobasis of its locally tight spectrum; all five axioms checked.
inline AbstractConcreteReport abstract_to_concrete_check(const TransRel& r) {
    auto rep = classify(r);
    if (!rep.round || !rep.local_bi_pseudobasis)
        throw Error("AxiomViolation", "not a round local bi-pseudobasis");
    auto spectrum = locally_tight_spectrum(r);
    const int np = static_cast<int>(spectrum.points.size());
    std::vector<std::pair<std::string, Bitset>> named;
    for (int p = 0; p < r.size(); ++p) {
        Bitset open(np);
        for (int i = 0; i < np; ++i)
            if (spectrum.points[static_cast<std::size_t>(i)].test(p)) open.set(i);
        named.emplace_back("O^{" + r.name(p) + "}", open);
    }
    AbstractConcreteReport out{ClbpReport{}, ConcreteFamily::make(spectrum.topology, named)};
    out.clbp = check_concrete_clbp(out.family);
    if (!out.clbp.all())
        throw Error("TheoremCounterexample",
                    "element opens fail the concrete local bi-pseudobasis axioms");
    return out;
}

} // namespace ltg
