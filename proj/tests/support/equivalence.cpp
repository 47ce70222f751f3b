#include "support/equivalence.hpp"

#include <algorithm>
#include <sstream>

#include "kif/codec.hpp"
#include "kif/sexpr.hpp"

namespace kif::test {

Backends make_backends(const Fixture& data, const StoreOptions& options) {
    Backends b;
    auto graph = std::make_shared<rdf::Graph>(codec::encode_dataset(data.statements, data.descriptors));
    b.graph = graph;
    b.endpoint = std::make_unique<rdf::Endpoint>(graph);
    b.memory = memory_store(data, options);
    b.rdf = rdf_store(graph, options);
    b.sparql = sparql_store(b.endpoint->url(), options);
    return b;
}

std::vector<Statement> filter_sorted(const Store& s, const FilterPattern& p) {
    auto out = s.filter(p).collect();
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::string show(const std::vector<Statement>& xs) {
    std::ostringstream o;
    for (const auto& x : xs) o << "\n    " << sexpr::print(x);
    return o.str();
}

} // namespace

std::string compare_stores(const std::vector<StorePtr>& stores, const FilterPattern& p,
                           const std::vector<Statement>& probes, const std::vector<Entity>& entities,
                           const std::vector<std::string>& languages) {
    const Store& ref = *stores.front();
    auto expected = filter_sorted(ref, p);
    std::vector<Statement> asked = expected;
    asked.insert(asked.end(), probes.begin(), probes.end());
    auto where = [&](std::size_t i, const std::string& what) {
        return "store " + std::to_string(i) + " differs on " + what + " for " + sexpr::print(p);
    };
    for (std::size_t i = 1; i < stores.size(); ++i) {
        const Store& s = *stores[i];
        auto got = filter_sorted(s, p);
        if (got != expected) return where(i, "filter") + "\n  expected:" + show(expected) + "\n  got:" + show(got);
        if (s.count(p) != expected.size()) return where(i, "count");
        for (const auto& x : asked)
            if (s.contains(x) != ref.contains(x)) return where(i, "contains " + sexpr::print(x));
        if (s.get_annotations(asked) != ref.get_annotations(asked)) return where(i, "get_annotations");
        for (const auto& lang : languages)
            if (s.get_descriptor(entities, lang) != ref.get_descriptor(entities, lang))
                return where(i, "get_descriptor(" + lang + ")");
    }
    return {};
}

} // namespace kif::test
