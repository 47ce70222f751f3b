#include "support/generators.hpp"

#include <algorithm>
#include <string>

#include "kif/codec.hpp"

namespace kif::test {

namespace {

const std::vector<std::string> kLanguages = {"en", "pt", "de"};
const std::vector<std::string> kWords = {"benzene", "water", "Marie Curie", "caf\xc3\xa9",
                                          "a \"quoted\" word", "line\nbreak", "back\\slash", ""};

} // namespace

Entity Generator::item() {
    return Entity::item("http://www.wikidata.org/entity/Q" + std::to_string(uniform(1, opt_.items)));
}

Entity Generator::property() {
    return Entity::property("http://www.wikidata.org/entity/P" + std::to_string(uniform(1, opt_.properties)));
}

Iri Generator::iri() {
    switch (uniform(0, 2)) {
    case 0: return Iri("http://example.org/thing/" + std::to_string(uniform(1, 5)));
    case 1: return Iri("https://www.nobelprize.org/nobel_prizes/about/amounts/");
    default: return Iri("urn:x:" + std::to_string(uniform(1, 3)));
    }
}

Text Generator::text() { return Text(pick(kWords), pick(kLanguages)); }

String Generator::string() {
    return chance(0.5) ? String(pick(kWords)) : String(std::to_string(uniform(0, 99)));
}

Decimal Generator::decimal() {
    std::string s;
    if (chance(0.2)) s += '-';
    s += std::to_string(uniform(0, 120));
    if (chance(0.5)) {
        s += '.';
        int digits = uniform(1, 4);
        for (int i = 0; i < digits; ++i) s += static_cast<char>('0' + uniform(0, 9));
    }
    return Decimal::parse(s);
}

Quantity Generator::quantity() {
    Decimal amount = decimal();
    std::optional<Entity> unit;
    if (chance(0.5)) unit = item();
    std::optional<Decimal> lower, upper;
    if (chance(0.4)) {
        Decimal d = decimal();
        if (d <= amount) lower = d;
    }
    if (chance(0.4)) {
        Decimal d = decimal();
        if (amount <= d) upper = d;
    }
    return Quantity(amount, unit, lower, upper);
}

Time Generator::time() {
    Timestamp ts;
    ts.year = uniform(-500, 2100);
    ts.month = uniform(1, 12);
    ts.day = uniform(1, 28);
    ts.hour = uniform(0, 23);
    ts.minute = uniform(0, 59);
    ts.second = uniform(0, 59);
    int prec = pick(std::vector<int>{precision::year, 10, precision::day, 14, uniform(0, 14)});
    int tz = chance(0.8) ? 0 : uniform(-720, 720);
    std::optional<Entity> cal;
    if (chance(0.6)) cal = Entity::item("http://www.wikidata.org/entity/Q1985727");
    return Time(ts, prec, tz, cal);
}

Value Generator::value() {
    int hi = opt_.deep_values ? 5 : 3;
    switch (uniform(0, hi)) {
    case 0: return item();
    case 1: return iri();
    case 2: return text();
    case 3: return string();
    case 4: return quantity();
    default: return time();
    }
}

Snak Generator::value_snak() { return Snak::value_snak(property(), value()); }

Snak Generator::snak() {
    if (!opt_.non_value_snaks) return value_snak();
    int r = uniform(0, 9);
    if (r == 0) return Snak::some_value(property());
    if (r == 1) return Snak::no_value(property());
    return value_snak();
}

Statement Generator::statement() { return Statement{item(), snak()}; }

ReferenceRecord Generator::reference() {
    std::vector<Snak> snaks;
    int n = uniform(1, 3);
    for (int i = 0; i < n; ++i) snaks.push_back(snak());
    return ReferenceRecord(SnakSet(std::move(snaks)));
}

Rank Generator::rank() { return static_cast<Rank>(uniform(0, 2)); }

AnnotationRecord Generator::annotation() {
    AnnotationRecord a;
    int nq = uniform(0, 3);
    for (int i = 0; i < nq; ++i) a.qualifiers.insert(snak());
    int nr = uniform(0, 2);
    for (int i = 0; i < nr; ++i) a.references.insert(reference());
    a.rank = chance(0.6) ? Rank::normal : rank();
    return a;
}

Descriptor Generator::descriptor() {
    Descriptor d;
    if (chance(0.7)) d.label = text();
    if (chance(0.5)) d.description = text();
    int na = uniform(0, 3);
    for (int i = 0; i < na; ++i) d.aliases.insert(text());
    return d;
}

Fingerprint Generator::fingerprint() {
    switch (uniform(0, 2)) {
    case 0: return Fingerprint::entity(item());
    case 1: return Fingerprint::snak(value_snak());
    default: {
        SnakSet s;
        int n = uniform(1, 2);
        for (int i = 0; i < n; ++i) s.insert(value_snak());
        return Fingerprint::snaks(std::move(s));
    }
    }
}

Object Generator::object() {
    switch (uniform(0, 12)) {
    case 0: return value();
    case 1: return snak();
    case 2: return statement();
    case 3: return reference();
    case 4: return rank();
    case 5: return annotation();
    case 6: {
        SnakSet s;
        for (int i = uniform(0, 3); i > 0; --i) s.insert(snak());
        return s;
    }
    case 7: {
        AnnotationRecordSet s;
        for (int i = uniform(0, 2); i > 0; --i) s.insert(annotation());
        return s;
    }
    case 8: return descriptor();
    case 9: {
        std::optional<Fingerprint> s, p, v;
        if (chance(0.5)) s = fingerprint();
        if (chance(0.5)) p = Fingerprint::entity(property());
        if (chance(0.5)) v = chance(0.5) ? Fingerprint::constant(value()) : fingerprint();
        SnakMask mask = pick(std::vector<SnakMask>{SnakMask::all(), SnakMask::only(SnakKind::value),
                                                  SnakMask::of({SnakKind::some_value, SnakKind::no_value})});
        if (v) mask = SnakMask::all();
        return FilterPattern(s, p, v, mask);
    }
    case 10: {
        AnnotatedStatement a{statement(), {}};
        for (int i = uniform(0, 2); i > 0; --i) a.annotations.insert(annotation());
        return a;
    }
    case 11: return EntityDescriptor{item(), descriptor()};
    default: {
        ReferenceRecordSet s;
        for (int i = uniform(0, 2); i > 0; --i) s.insert(reference());
        return s;
    }
    }
}

Dataset random_dataset(Generator& g, int max_statements) {
    Dataset d;
    int n = g.uniform(0, max_statements);
    std::vector<Statement> seen;
    for (int i = 0; i < n; ++i) {
        // Reuse an earlier statement now and then so some carry two records.
        Statement s = (!seen.empty() && g.chance(0.1)) ? g.pick(seen) : g.statement();
        seen.push_back(s);
        auto it = std::find_if(d.statements.begin(), d.statements.end(),
                               [&](const AnnotatedStatement& a) { return a.statement == s; });
        if (it == d.statements.end()) {
            d.statements.push_back({s, {}});
            it = d.statements.end() - 1;
        }
        it->annotations.insert(g.annotation());
    }
    for (int i = 1; i <= 12; ++i) {
        if (!g.chance(0.5)) continue;
        d.descriptors.push_back(
            {Entity::item("http://www.wikidata.org/entity/Q" + std::to_string(i)), g.descriptor()});
    }
    return d;
}

FilterPattern random_pattern(Generator& g, const Dataset& d) {
    auto from_data = [&]() -> std::optional<Statement> {
        if (d.statements.empty() || g.chance(0.2)) return std::nullopt;
        return g.pick(d.statements).statement;
    };
    std::optional<Fingerprint> s, p, v;
    auto base = from_data();
    if (g.chance(0.4)) {
        if (base && g.chance(0.7)) s = Fingerprint::entity(base->subject);
        else s = Fingerprint::entity(g.item());
    } else if (g.chance(0.25)) {
        // Snak fingerprint taken from some value statement in the data.
        auto other = from_data();
        if (other && other->snak.kind() == SnakKind::value) s = Fingerprint::snak(other->snak);
        else s = Fingerprint::snak(g.value_snak());
    }
    if (g.chance(0.5)) p = Fingerprint::entity(base ? base->snak.property() : g.property());
    if (g.chance(0.3)) {
        if (base && base->snak.kind() == SnakKind::value && g.chance(0.8))
            v = Fingerprint::constant(*base->snak.value());
        else
            v = Fingerprint::constant(g.value());
    } else if (g.chance(0.1)) {
        auto other = from_data();
        if (other && other->snak.kind() == SnakKind::value && other->snak.value() &&
            std::holds_alternative<Entity>(*other->snak.value()))
            v = Fingerprint::snak(other->snak);
    }
    SnakMask mask = SnakMask::all();
    if (g.chance(0.2))
        mask = g.pick(std::vector<SnakMask>{SnakMask::only(SnakKind::value), SnakMask::only(SnakKind::some_value),
                                           SnakMask::only(SnakKind::no_value),
                                           SnakMask::of({SnakKind::some_value, SnakKind::no_value})});
    if (v && !(mask.has(SnakKind::value))) mask = SnakMask::all();
    return FilterPattern(s, p, v, mask);
}

namespace {

rdf::Term pool_resource(Generator& g) {
    return rdf::iri("http://example.org/r" + std::to_string(g.uniform(1, 5)));
}

rdf::Term pool_predicate(Generator& g) {
    return rdf::iri("http://example.org/p" + std::to_string(g.uniform(1, 3)));
}

rdf::Term pool_object(Generator& g) {
    switch (g.uniform(0, 4)) {
    case 0: return rdf::plain(std::to_string(g.uniform(1, 2)));
    case 1: return rdf::lang("x", g.chance(0.5) ? "en" : "pt");
    case 2: return rdf::typed(std::to_string(g.uniform(1, 2)), rdf::xsd_decimal);
    default: return pool_resource(g);
    }
}

} // namespace

rdf::Graph random_graph(Generator& g, int max_triples) {
    rdf::Graph graph;
    int n = g.uniform(0, max_triples);
    for (int i = 0; i < n; ++i)
        graph.insert({std::get<rdf::IriTerm>(pool_resource(g)), std::get<rdf::IriTerm>(pool_predicate(g)),
                      pool_object(g)});
    return graph;
}

rdf::SelectQuery random_bgp_query(Generator& g, int max_patterns) {
    static const std::vector<std::string> kVars = {"a", "b", "c", "d"};
    rdf::SelectQuery q;
    std::vector<std::string> used;
    auto var_or = [&](rdf::Term constant, double p_var) -> rdf::PatternTerm {
        if (g.chance(p_var)) {
            std::string v = g.pick(kVars);
            if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
            return rdf::Variable{v};
        }
        return constant;
    };
    int k = g.uniform(1, max_patterns);
    for (int i = 0; i < k; ++i) {
        rdf::TriplePattern tp{var_or(pool_resource(g), 0.7), var_or(pool_predicate(g), 0.4),
                              var_or(pool_object(g), 0.7)};
        q.where.push_back(std::move(tp));
    }
    if (g.chance(0.25)) {
        rdf::ValuesBlock b;
        std::string v = g.pick(kVars);
        b.variables.push_back(v);
        if (std::find(used.begin(), used.end(), v) == used.end()) used.push_back(v);
        for (int r = g.uniform(0, 3); r > 0; --r) {
            if (g.chance(0.15)) b.rows.push_back({std::nullopt});
            else b.rows.push_back({g.chance(0.5) ? pool_resource(g) : pool_object(g)});
        }
        q.values = std::move(b);
    }
    if (used.empty()) {
        q.where.front().subject = rdf::Variable{"a"};
        used.push_back("a");
    }
    for (const auto& v : used)
        if (g.chance(0.7)) q.projection.push_back(v);
    if (q.projection.empty()) q.projection.push_back(used.front());
    q.distinct = g.chance(0.5);
    if (g.chance(0.3)) q.limit = static_cast<std::size_t>(g.uniform(0, 5));
    if (g.chance(0.3)) q.offset = static_cast<std::size_t>(g.uniform(0, 5));
    return q;
}

} // namespace kif::test

namespace kif::test {

std::string random_truthy_query(Generator& g, const Dataset& d) {
    auto triple = [&]() {
        Statement s = (d.statements.empty() || g.chance(0.15)) ? g.statement() : g.pick(d.statements).statement;
        return codec::truthy_triple(s);
    };
    auto text = [](const rdf::Term& t) { return rdf::to_ntriples(t); };
    const std::string type = "<" + std::string(rdf::rdf_type) + ">";

    auto main = triple();
    std::string subject = g.chance(0.6) ? "?s" : text(main.subject);
    std::string predicate = g.chance(0.75) ? text(main.predicate) : "?p";
    std::string object = g.chance(0.6) ? "?v" : text(main.object);
    if (predicate == type && object != "?v" && g.chance(0.5)) object = "?v";
    if (subject != "?s" && predicate != "?p" && object != "?v") subject = "?s";

    std::string body = subject + " " + predicate + " " + object + " .";
    auto aux = [&](const std::string& var) {
        auto t = triple();
        body += " " + var + " " + text(t.predicate) + " " + text(t.object) + " .";
    };
    if (subject == "?s")
        for (int n = g.uniform(0, 2); n > 0; --n) aux("?s");
    if (object == "?v" && g.chance(0.3)) aux("?v");

    std::vector<std::string> vars;
    for (const auto& v : {subject, predicate, object})
        if (v.front() == '?' && (vars.empty() || g.chance(0.8))) vars.push_back(v);


    std::string q = "SELECT ";
    if (g.chance(0.3)) q += "DISTINCT ";
    for (const auto& v : vars) q += v + " ";
    q += "WHERE { " + body + " }";
    if (g.chance(0.2)) q += " LIMIT " + std::to_string(g.uniform(0, 5));
    if (g.chance(0.1)) q += " OFFSET " + std::to_string(g.uniform(0, 3));
    return q;
}

} // namespace kif::test
