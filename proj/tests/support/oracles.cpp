#include "support/oracles.hpp"

#include <map>

namespace kif::test {

namespace {

using Binding = std::map<std::string, rdf::Term>;

bool unify(Binding& b, const rdf::PatternTerm& pt, const rdf::Term& t) {
    if (const auto* v = std::get_if<rdf::Variable>(&pt)) {
        auto [it, inserted] = b.emplace(v->name, t);
        return inserted || it->second == t;
    }
    return std::get<rdf::Term>(pt) == t;
}

} // namespace

rdf::ResultSet brute_force_bgp(const rdf::Graph& g, const rdf::SelectQuery& q) {
    auto triples = g.triples();
    std::vector<Binding> starts;
    if (q.values) {
        for (const auto& row : q.values->rows) {
            Binding b;
            bool ok = true;
            for (std::size_t i = 0; i < row.size(); ++i)
                if (row[i]) ok = ok && unify(b, rdf::Variable{q.values->variables[i]}, *row[i]);
            if (ok) starts.push_back(b);
        }
    } else {
        starts.emplace_back();
    }
    std::vector<rdf::Row> rows;
    const std::size_t k = q.where.size();
    for (const auto& start : starts) {
        std::vector<std::size_t> choice(k, 0);
        if (k > 0 && triples.empty()) continue;
        for (;;) {
            Binding b = start;
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i) {
                const auto& t = triples[choice[i]];
                const auto& tp = q.where[i];
                ok = unify(b, tp.subject, rdf::Term(t.subject)) && unify(b, tp.predicate, rdf::Term(t.predicate)) &&
                     unify(b, tp.object, t.object);
            }
            if (ok) {
                rdf::Row row;
                for (const auto& v : q.projection) {
                    auto it = b.find(v);
                    row.push_back(it == b.end() ? std::nullopt : std::optional<rdf::Term>(it->second));
                }
                rows.push_back(std::move(row));
            }
            // Next assignment in odometer order.
            std::size_t i = 0;
            while (i < k && ++choice[i] == triples.size()) choice[i++] = 0;
            if (i == k) break;
        }
    }
    rdf::finalize_rows(rows, q.distinct, q.offset, q.limit);
    return {q.projection, std::move(rows)};
}

} // namespace kif::test
