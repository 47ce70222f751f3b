#include "kif/codec.hpp"

#include "kif/digest.hpp"
#include "kif/errors.hpp"
#include "kif/namespaces.hpp"

namespace kif::codec {

namespace {

using rdf::PatternTerm;
using rdf::Variable;

std::string in(std::string_view base, std::string_view local) { return ns::expand(base, local); }

std::string pid_of(const Entity& property) {
    auto local = ns::local_in(property.iri().str(), ns::wd);
    if (!local || !ns::is_safe_local(*local)) throw EncodeError("property outside the wd: namespace: " + property.iri().str());
    return std::string(*local);
}

PatternTerm term(const std::string& iri) { return rdf::iri(iri); }

class QueryBuilder {
public:
    explicit QueryBuilder(Level level) : level_(level) {}

    rdf::SelectQuery& query() { return q_; }

    void add(PatternTerm s, PatternTerm p, PatternTerm o) { q_.where.push_back({std::move(s), std::move(p), std::move(o)}); }

    Variable fresh() { return Variable{"f" + std::to_string(aux_++)}; }

    // Constrains `x` to satisfy every snak in `snaks`.
    void fingerprint(const PatternTerm& x, const SnakSet& snaks) {
        for (const auto& snak : snaks) {
            auto pid = pid_of(snak.property());
            const Value& w = *snak.value();
            if (level_ == Level::truthy) {
                add(x, term(in(ns::wdt, pid)), simple_value(w));
                continue;
            }
            Variable f = fresh();
            add(x, term(in(ns::p, pid)), f);
            if (is_deep(w))
                add(f, term(in(ns::psv, pid)), rdf::iri(in(ns::wdv, content_digest(Object(w)))));
            else
                add(f, term(in(ns::ps, pid)), simple_value(w));
        }
    }

    void project(const PatternTerm& t) {
        if (const auto* v = std::get_if<Variable>(&t)) q_.projection.push_back(v->name);
    }

private:
    Level level_;
    rdf::SelectQuery q_;
    int aux_ = 0;
};

} // namespace

rdf::SelectQuery compile_filter(const FilterPattern& p, Level level, std::optional<std::size_t> limit,
                                std::optional<std::size_t> offset) {
    p.check_supported();
    QueryBuilder b(level);

    PatternTerm subject = Variable{"s"};
    if (p.subject())
        if (const Entity* e = p.subject()->as_entity()) subject = rdf::iri(e->iri().str());

    std::optional<std::string> pid;
    if (p.property()) pid = pid_of(*p.property()->as_entity());

    PatternTerm value = Variable{"v"};
    if (p.value())
        if (const Value* c = p.value()->as_constant()) value = simple_value(*c);

    if (level == Level::truthy) {
        PatternTerm predicate = pid ? term(in(ns::wdt, *pid)) : PatternTerm(Variable{"p"});
        b.add(subject, predicate, value);
        b.project(subject);
        b.project(predicate);
        b.project(value);
    } else {
        PatternTerm link = pid ? term(in(ns::p, *pid)) : PatternTerm(Variable{"p"});
        Variable wds{"wds"};
        b.add(subject, link, wds);
        if (!pid) b.add(wds, term(in(ns::wikibase, "rank")), Variable{"r"});
        bool value_needed = p.value().has_value();
        if (value_needed) {
            PatternTerm ps = pid ? term(in(ns::ps, *pid)) : PatternTerm(Variable{"ps"});
            b.add(wds, ps, value);
        }
        b.project(subject);
        b.project(link);
        b.project(wds);
        if (value_needed) b.project(value);
    }

    if (p.subject()) b.fingerprint(subject, p.subject()->required_snaks());
    if (p.value()) b.fingerprint(value, p.value()->required_snaks());

    auto& q = b.query();
    if (q.projection.empty()) {
        // Fully constant truthy pattern: bind the subject through VALUES so
        // that the query still projects a variable.
        q.values = rdf::ValuesBlock{{"s"}, {{std::get<rdf::Term>(subject)}}};
        q.where.front().subject = Variable{"s"};
        q.projection.push_back("s");
    }
    q.distinct = true;
    q.limit = limit;
    q.offset = offset;
    return q;
}

rdf::SelectQuery compile_annotations(const Statement& s) {
    rdf::SelectQuery q;
    q.projection = {"wds"};
    q.distinct = true;
    auto pid = pid_of(s.snak.property());
    Variable wds{"wds"};
    q.where.push_back({rdf::iri(s.subject.iri().str()), term(in(ns::p, pid)), wds});
    switch (s.snak.kind()) {
    case SnakKind::value:
        q.where.push_back({wds, term(in(ns::ps, pid)), simple_value(*s.snak.value())});
        break;
    case SnakKind::some_value:
        q.where.push_back({wds, term(in(ns::ps, pid)), rdf::iri(some_value_node(s))});
        break;
    case SnakKind::no_value:
        q.where.push_back({wds, term(std::string(rdf::rdf_type)), rdf::iri(in(ns::wdno, pid))});
        break;
    }
    return q;
}

rdf::SelectQuery node_query(const std::vector<std::string>& nodes) {
    rdf::SelectQuery q;
    q.projection = {"n", "pred", "obj"};
    q.where.push_back({Variable{"n"}, Variable{"pred"}, Variable{"obj"}});
    rdf::ValuesBlock v{{"n"}, {}};
    for (const auto& n : nodes) v.rows.push_back({rdf::iri(n)});
    q.values = std::move(v);
    return q;
}

rdf::SelectQuery descriptor_query(const std::vector<Entity>& entities) {
    rdf::SelectQuery q;
    q.projection = {"e", "pred", "o"};
    q.where.push_back({Variable{"e"}, Variable{"pred"}, Variable{"o"}});
    rdf::ValuesBlock v{{"e", "pred"}, {}};
    for (const auto& e : entities)
        for (auto pred : {in(ns::rdfs, "label"), in(ns::schema, "description"), in(ns::skos, "altLabel")})
            v.rows.push_back({rdf::iri(e.iri().str()), rdf::iri(pred)});
    q.values = std::move(v);
    return q;
}

} // namespace kif::codec
