#include "kif/sparqldecoder.hpp"

#include <set>

#include "kif/codec.hpp"
#include "kif/errors.hpp"
#include "kif/namespaces.hpp"

namespace kif::decoder {

namespace {

using rdf::PatternTerm;
using rdf::SourcePosition;
using rdf::Term;
using rdf::TriplePattern;
using rdf::Variable;

const Variable* as_var(const PatternTerm& t) { return std::get_if<Variable>(&t); }
const Term* as_term(const PatternTerm& t) { return std::get_if<Term>(&t); }

std::optional<std::string> iri_of(const PatternTerm& t) {
    const Term* term = as_term(t);
    if (!term || !rdf::is_iri(*term)) return std::nullopt;
    return rdf::iri_value(*term);
}

// Property for a local name under wdt: or wdno:.
std::optional<Entity> property_under(const std::string& iri, std::string_view base) {
    auto local = ns::local_in(iri, base);
    if (!local || !ns::is_property_id(*local)) return std::nullopt;
    return Entity::property(ns::expand(ns::wd, *local));
}

bool is_type(const PatternTerm& t) { return iri_of(t) == std::string(rdf::rdf_type); }

bool is_wdno(const PatternTerm& t) {
    auto i = iri_of(t);
    return i && property_under(*i, ns::wdno).has_value();
}

bool is_wdt(const PatternTerm& t) {
    auto i = iri_of(t);
    return i && property_under(*i, ns::wdt).has_value();
}

bool aux_shaped(const TriplePattern& t) {
    if (!as_var(t.subject) || !as_term(t.object)) return false;
    return is_wdt(t.predicate) || (is_type(t.predicate) && is_wdno(t.object));
}

// Value whose truthy term is exactly `t`, for pushing to the store.
std::optional<Value> exact_value(const Term& t) {
    if (rdf::is_iri(t)) {
        const auto& i = rdf::iri_value(t);
        if (ns::local_in(i, ns::wdno) || ns::local_in(i, ns::wdgenid)) return std::nullopt;
        auto v = codec::lift(t);
        if (v && std::holds_alternative<Iri>(*v) && ns::local_in(i, ns::wd)) return std::nullopt;
        return v;
    }
    const auto& l = std::get<rdf::Literal>(t);
    if (!l.language.empty() || l.datatype == rdf::xsd_string) return codec::lift(t);
    return std::nullopt;
}

// Value snak whose truthy rendering on any subject is `?x predicate object`.
std::optional<Snak> exact_snak(const Auxiliary& a) {
    if (a.predicate.value == rdf::rdf_type) return std::nullopt;
    auto v = exact_value(a.object);
    if (!v) return std::nullopt;
    return Snak::value_snak(*property_under(a.predicate.value, ns::wdt), *v);
}

class Decoder {
public:
    Decoder(const rdf::SelectQuery& q, const std::vector<SourcePosition>& positions) : q_(q), positions_(positions) {}

    DecodedQuery run() {
        if (q_.values) reject(0, "VALUES unsupported");
        if (q_.where.empty()) throw UnsupportedQuery("empty graph pattern unsupported", 1, 1);
        std::size_t main = 0;
        for (std::size_t i = 0; i < q_.where.size(); ++i)
            if (!aux_shaped(q_.where[i])) {
                main = i;
                break;
            }
        DecodedQuery out;
        out.main = q_.where[main];
        out.columns = q_.projection;
        out.distinct = q_.distinct;
        out.limit = q_.limit;
        out.offset = q_.offset;

        std::optional<Fingerprint> subject, property, value;
        SnakMask mask = main_pattern(main, subject, property, value);

        std::vector<Snak> on_subject, on_value;
        for (std::size_t i = 0; i < q_.where.size(); ++i) {
            if (i == main) continue;
            const auto& t = q_.where[i];
            if (!as_var(t.subject)) reject(i, "triple pattern not joined to the main pattern by its subject");
            if (!as_term(t.object)) reject(i, "auxiliary pattern needs a constant object");
            if (!aux_shaped(t)) reject(i, "auxiliary pattern needs a wdt: predicate or rdf:type wdno:");
            Auxiliary a;
            const auto& var = *as_var(t.subject);
            if (as_var(out.main.subject) && *as_var(out.main.subject) == var) a.on = Role::subject;
            else if (as_var(out.main.object) && *as_var(out.main.object) == var) a.on = Role::value;
            else reject(i, "triple pattern not joined to the main pattern by its subject");
            a.predicate = rdf::IriTerm{*iri_of(t.predicate)};
            a.object = *as_term(t.object);
            // Fingerprints take value snaks only; the rest is checked on answers.
            if (auto s = exact_snak(a); s && s->kind() == SnakKind::value)
                (a.on == Role::subject ? on_subject : on_value).push_back(*s);
            out.auxiliaries.push_back(std::move(a));
        }
        auto fingerprint = [](std::vector<Snak>& snaks) {
            return snaks.size() == 1 ? Fingerprint::snak(snaks.front()) : Fingerprint::snaks(SnakSet(std::move(snaks)));
        };
        if (!on_subject.empty()) subject = fingerprint(on_subject);
        if (!on_value.empty() && mask.has(SnakKind::value)) {
            value = fingerprint(on_value);
            mask = SnakMask::only(SnakKind::value);
        }
        out.pattern = FilterPattern(subject, property, value, mask);
        try {
            out.pattern.check_supported();
        } catch (const UnsupportedFingerprint& e) {
            reject(main, e.what());
        }

        for (const auto& c : out.columns) out.projection.emplace(c, role_of(out.main, c, main));
        return out;
    }

private:
    [[noreturn]] void reject(std::size_t i, const std::string& msg) const {
        SourcePosition at = i < positions_.size() ? positions_[i] : SourcePosition{};
        throw UnsupportedQuery(msg, at.line, at.column);
    }

    Role role_of(const TriplePattern& t, const std::string& name, std::size_t main) const {
        Variable v{name};
        if (as_var(t.subject) && *as_var(t.subject) == v) return Role::subject;
        if (as_var(t.predicate) && *as_var(t.predicate) == v) return Role::property;
        if (as_var(t.object) && *as_var(t.object) == v) return Role::value;
        reject(main, "projected variable ?" + name + " is not in the main pattern");
    }

    SnakMask main_pattern(std::size_t i, std::optional<Fingerprint>& subject, std::optional<Fingerprint>& property,
                          std::optional<Fingerprint>& value) const {
        const auto& t = q_.where[i];
        std::set<std::string> vars;
        for (const auto* pt : {&t.subject, &t.predicate, &t.object})
            if (const auto* v = as_var(*pt); v && !vars.insert(v->name).second)
                reject(i, "repeated variable ?" + v->name + " in the main pattern");

        if (auto s = iri_of(t.subject)) {
            auto e = codec::entity_for(*s);
            if (!e) reject(i, "subject must be a variable or a wd: entity");
            subject = Fingerprint::entity(*e);
        }

        SnakMask mask = SnakMask::all();
        if (is_type(t.predicate)) {
            mask = SnakMask::only(SnakKind::no_value);
            if (auto o = iri_of(t.object)) {
                auto p = property_under(*o, ns::wdno);
                if (!p) reject(i, "rdf:type object must be a wdno: property or a variable");
                property = Fingerprint::entity(*p);
            } else if (!as_var(t.object)) {
                reject(i, "rdf:type object must be a wdno: property or a variable");
            }
            return mask;
        }
        if (auto p = iri_of(t.predicate)) {
            auto e = property_under(*p, ns::wdt);
            if (!e) reject(i, "predicate must be a variable, a wdt: property or rdf:type");
            property = Fingerprint::entity(*e);
            mask = SnakMask::of({SnakKind::value, SnakKind::some_value});
        } else if (!as_var(t.predicate)) {
            reject(i, "predicate must be a variable, a wdt: property or rdf:type");
        }
        if (const Term* o = as_term(t.object))
            if (auto v = exact_value(*o)) {
                value = Fingerprint::constant(*v);
                mask = SnakMask::only(SnakKind::value);
            }
        return mask;
    }

    const rdf::SelectQuery& q_;
    const std::vector<SourcePosition>& positions_;
};

bool term_matches(const PatternTerm& p, const Term& t) {
    const Term* c = as_term(p);
    return !c || *c == t;
}

bool triple_matches(const TriplePattern& p, const rdf::Triple& t) {
    return term_matches(p.subject, t.subject) && term_matches(p.predicate, t.predicate) &&
           term_matches(p.object, t.object);
}

bool visible(const AnnotationRecordSet& records) {
    for (const auto& r : records)
        if (r.rank != Rank::deprecated) return true;
    return false;
}

// Truthy triples of `statements` that some non-deprecated record backs.
std::set<rdf::Triple> truthy_of(const Store& store, const std::vector<Statement>& statements) {
    std::set<rdf::Triple> out;
    if (statements.empty()) return out;
    for (const auto& [s, records] : store.get_annotations(statements))
        if (visible(records)) out.insert(codec::truthy_triple(s));
    return out;
}

class AuxiliaryChecker {
public:
    explicit AuxiliaryChecker(const Store& store) : store_(store) {}

    bool holds(const Term& node, const Auxiliary& a) {
        if (!rdf::is_iri(node)) return false;
        auto e = codec::entity_for(rdf::iri_value(node));
        if (!e) return false;
        rdf::Triple want{rdf::IriTerm{rdf::iri_value(node)}, a.predicate, a.object};
        auto key = rdf::to_ntriples(want);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;

        bool no_value = a.predicate.value == rdf::rdf_type;
        auto property = no_value ? property_under(rdf::iri_value(a.object), ns::wdno)
                                 : property_under(a.predicate.value, ns::wdt);
        SnakMask mask = no_value ? SnakMask::only(SnakKind::no_value)
                                 : SnakMask::of({SnakKind::value, SnakKind::some_value});
        auto found = store_.filter(FilterPattern(Fingerprint::entity(*e), Fingerprint::entity(*property), std::nullopt, mask))
                         .collect();
        std::vector<Statement> candidates;
        for (const auto& s : found)
            if (codec::truthy_triple(s) == want) candidates.push_back(s);
        bool ok = !truthy_of(store_, candidates).empty();
        cache_.emplace(key, ok);
        return ok;
    }

private:
    const Store& store_;
    std::map<std::string, bool> cache_;
};

} // namespace

DecodedQuery decode(std::string_view query) {
    std::vector<SourcePosition> positions;
    auto q = rdf::parse_sparql(query, positions);
    return Decoder(q, positions).run();
}

rdf::ResultSet answer_rows(const Store& store, const DecodedQuery& q) {
    // No limit is pushed: rendered triples are filtered again below.
    std::vector<Statement> matched;
    for (const auto& s : store.filter(q.pattern).collect())
        if (triple_matches(q.main, codec::truthy_triple(s))) matched.push_back(s);

    AuxiliaryChecker aux(store);
    std::vector<rdf::Row> rows;
    for (const auto& t : truthy_of(store, matched)) {
        bool ok = true;
        for (const auto& a : q.auxiliaries) {
            ok = aux.holds(a.on == Role::subject ? Term(t.subject) : t.object, a);
            if (!ok) break;
        }
        if (!ok) continue;
        rdf::Row row;
        for (const auto& c : q.columns) {
            switch (q.projection.at(c)) {
            case Role::subject: row.emplace_back(t.subject); break;
            case Role::property: row.emplace_back(t.predicate); break;
            case Role::value: row.emplace_back(t.object); break;
            }
        }
        rows.push_back(std::move(row));
    }
    rdf::finalize_rows(rows, q.distinct, q.offset, q.limit);
    return rdf::ResultSet{q.columns, std::move(rows)};
}

std::string answer(const Store& store, std::string_view query) {
    return rdf::to_results_json(answer_rows(store, decode(query)));
}

} // namespace kif::decoder
