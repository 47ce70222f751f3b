#include <doctest.h>

#include <set>

#include "kif/codec.hpp"
#include "kif/digest.hpp"
#include "kif/errors.hpp"
#include "kif/namespaces.hpp"
#include "kif/rdf/ntriples.hpp"
#include "kif/sexpr.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace kif;
using namespace kif::test;
using kif::codec::EncodedStatement;

namespace {

std::string wd(std::string_view base, std::string_view local) { return ns::expand(base, local); }

rdf::Triple triple(std::string s, std::string p, rdf::Term o) {
    return {rdf::IriTerm{std::move(s)}, rdf::IriTerm{std::move(p)}, std::move(o)};
}

std::set<rdf::Triple> as_set(const std::vector<rdf::Triple>& ts) { return {ts.begin(), ts.end()}; }

rdf::Graph graph_of(const std::vector<rdf::Triple>& ts) {
    rdf::Graph g;
    g.insert_all(ts);
    return g;
}

EncodedStatement prize_money_encoded() {
    auto a = curie_prize_money();
    return {a.statement, *a.annotations.begin(), true};
}

} // namespace

TEST_CASE("simple values") {
    CHECK(codec::simple_value(wd_item("Q38104")) == rdf::iri("http://www.wikidata.org/entity/Q38104"));
    CHECK(codec::simple_value(Value(String("0049"))) == rdf::plain("0049"));
    CHECK(codec::simple_value(Value(Text("benzene", "en"))) == rdf::lang("benzene", "en"));
    CHECK(codec::simple_value(Value(Quantity(Decimal::parse("0.07"), wd_item("Q21127659")))) ==
          rdf::typed("0.07", rdf::xsd_decimal));
    Time t(Timestamp::parse("1903-01-01T00:00:00Z"), precision::year, 0, wd_item("Q1985727"));
    CHECK(codec::simple_value(Value(t)) == rdf::typed("1903-01-01T00:00:00Z", rdf::xsd_date_time));
}

TEST_CASE("prize-money statement encodes to exactly the eleven relations") {
    auto es = prize_money_encoded();
    auto node = codec::statement_node(es.statement, es.annotation);
    auto amount = Value(Quantity(Decimal::parse("35339"), wd_item("Q122922")));
    auto wdv = wd(ns::wdv, content_digest(Object(amount)));
    auto wdref = wd(ns::wdref, content_digest(Object(*es.annotation.references.begin())));
    const std::string q7286 = "http://www.wikidata.org/entity/Q7286";
    const std::string amounts = "https://www.nobelprize.org/nobel_prizes/about/amounts/";

    std::set<rdf::Triple> expected = {
        triple(q7286, wd(ns::wdt, "P166"), rdf::iri(wd(ns::wd, "Q38104"))),
        triple(q7286, wd(ns::p, "P166"), rdf::iri(node)),
        triple(node, wd(ns::ps, "P166"), rdf::iri(wd(ns::wd, "Q38104"))),
        triple(node, wd(ns::wikibase, "rank"), rdf::iri(wd(ns::wikibase, "NormalRank"))),
        triple(node, std::string(rdf::rdf_type), rdf::iri(wd(ns::wikibase, "BestRank"))),
        triple(node, wd(ns::pq, "P2121"), rdf::typed("35339", rdf::xsd_decimal)),
        triple(node, wd(ns::pqv, "P2121"), rdf::iri(wdv)),
        triple(wdv, wd(ns::wikibase, "quantityAmount"), rdf::typed("35339", rdf::xsd_decimal)),
        triple(wdv, wd(ns::wikibase, "quantityUnit"), rdf::iri(wd(ns::wd, "Q122922"))),
        triple(node, wd(ns::prov, "wasDerivedFrom"), rdf::iri(wdref)),
        triple(wdref, wd(ns::pr, "P854"), rdf::iri(amounts)),
    };
    auto triples = codec::encode(es);
    CHECK(triples.size() == 11);
    CHECK(as_set(triples) == expected);

    // Written as N-Triples, the encoding parses back to a graph of 11 triples.
    auto g = rdf::parse_ntriples(rdf::serialize_ntriples(graph_of(triples)));
    CHECK(g.size() == 11);
}

TEST_CASE("decoding the prize-money graph restores the statement") {
    auto es = prize_money_encoded();
    auto d = codec::decode(graph_of(codec::encode(es)));
    REQUIRE(d.statements.size() == 1);
    CHECK(d.diagnostics.empty());
    CHECK(d.statements[0] == es);
    const auto& q = *d.statements[0].annotation.qualifiers.begin();
    CHECK(q.property() == wd_property("P2121"));
    CHECK(*q.value() == Value(Quantity(Decimal::parse("35339"), wd_item("Q122922"))));
    REQUIRE(d.statements[0].annotation.references.size() == 1);
    CHECK(d.statements[0].annotation.references.begin()->snaks().size() == 1);
}

TEST_CASE("statement with an empty annotation has the minimal encoding") {
    EncodedStatement es{value_statement(wd_item("Q7286"), wd_property("P166"), wd_item("Q902788")), {}, false};
    auto triples = codec::encode(es);
    CHECK(triples.size() == 4);  // truthy, p:, ps:, rank
    int links = 0, values = 0;
    for (const auto& t : triples) {
        if (ns::local_in(t.predicate.value, ns::p)) ++links;
        if (ns::local_in(t.predicate.value, ns::ps)) ++values;
        CHECK_FALSE(t.subject.value.starts_with(ns::wdv));
        CHECK_FALSE(t.subject.value.starts_with(ns::wdref));
    }
    CHECK(links == 1);
    CHECK(values == 1);
    es.best = true;
    CHECK(codec::encode(es).size() == 5);
}

TEST_CASE("some-value and no-value snaks") {
    auto subject = wd_item("Q7286");
    auto p = wd_property("P22");
    EncodedStatement some{Statement{subject, Snak::some_value(p)}, {}, true};
    auto node = codec::statement_node(some.statement, some.annotation);
    auto g = graph_of(codec::encode(some));
    auto genid = codec::some_value_node(some.statement);
    CHECK(genid.starts_with(ns::wdgenid));
    CHECK(g.contains(triple(node, wd(ns::ps, "P22"), rdf::iri(genid))));
    CHECK(g.contains(triple(subject.iri().str(), wd(ns::wdt, "P22"), rdf::iri(genid))));
    CHECK(codec::decode(g).statements == std::vector<EncodedStatement>{some});

    EncodedStatement none{Statement{subject, Snak::no_value(p)}, {}, true};
    node = codec::statement_node(none.statement, none.annotation);
    g = graph_of(codec::encode(none));
    CHECK(g.contains(triple(node, std::string(rdf::rdf_type), rdf::iri(wd(ns::wdno, "P22")))));
    CHECK(codec::decode(g).statements == std::vector<EncodedStatement>{none});

    // Qualifier no-value and some-value snaks.
    EncodedStatement qualified{value_statement(subject, p, wd_item("Q1")), {}, true};
    qualified.annotation.qualifiers.insert(Snak::no_value(wd_property("P580")));
    qualified.annotation.qualifiers.insert(Snak::some_value(wd_property("P582")));
    qualified.annotation.references.insert(ReferenceRecord{Snak::no_value(wd_property("P248"))});
    CHECK(codec::decode(graph_of(codec::encode(qualified))).statements == std::vector<EncodedStatement>{qualified});
}

TEST_CASE("lone truthy triples lift to default-annotation statements") {
    rdf::Graph g;
    g.insert(triple("http://www.wikidata.org/entity/Q2270", wd(ns::wdt, "P2177"), rdf::typed("0.07", rdf::xsd_decimal)));
    auto d = codec::decode(g);
    REQUIRE(d.statements.size() == 1);
    auto expected = value_statement(wd_item("Q2270"), wd_property("P2177"), Quantity(Decimal::parse("0.07")));
    CHECK(d.statements[0].statement == expected);
    CHECK(d.statements[0].annotation == AnnotationRecord{});
    CHECK(d.nodes[0].empty());

    // The same as encoding the unit-less statement and keeping only its truthy triple.
    auto truthy = codec::truthy_subgraph(graph_of(codec::encode({expected, {}, true})));
    CHECK(truthy.triples() == g.triples());

    rdf::Graph times;
    times.insert(triple("http://www.wikidata.org/entity/Q1", wd(ns::wdt, "P585"),
                        rdf::typed("1903-01-01T00:00:00Z", rdf::xsd_date_time)));
    auto t = codec::decode(times).statements.at(0).statement.snak.value();
    CHECK(*t == Value(Time(Timestamp::parse("1903-01-01T00:00:00Z"), precision::day, 0)));
}

TEST_CASE("unknown literal datatypes are diagnosed and skipped") {
    rdf::Graph g;
    g.insert(triple("http://www.wikidata.org/entity/Q1", wd(ns::wdt, "P1"), rdf::typed("1", rdf::xsd_boolean)));
    auto d = codec::decode(g);
    CHECK(d.statements.empty());
    CHECK(d.diagnostics.size() == 1);
}

TEST_CASE("a statement node without a main value is skipped with a diagnostic") {
    rdf::Graph g;
    std::string node = wd(ns::wds, "broken");
    g.insert(triple("http://www.wikidata.org/entity/Q1", wd(ns::p, "P1"), rdf::iri(node)));
    g.insert(triple(node, wd(ns::wikibase, "rank"), rdf::iri(wd(ns::wikibase, "NormalRank"))));
    auto ok = prize_money_encoded();
    g.insert_all(codec::encode(ok));
    auto d = codec::decode(g);
    CHECK(d.statements == std::vector<EncodedStatement>{ok});
    REQUIRE(d.diagnostics.size() == 1);
    CHECK(d.diagnostics[0].find("has no ps: value") != std::string::npos);
}

TEST_CASE("encode rejects data outside the dialect") {
    auto outside = Entity::item("http://example.org/x");
    CHECK_THROWS_AS(codec::encode({value_statement(outside, wd_property("P1"), wd_item("Q1")), {}, true}), EncodeError);
    auto misnamed = Entity::item("http://www.wikidata.org/entity/P5");
    CHECK_THROWS_AS(codec::encode({value_statement(misnamed, wd_property("P1"), wd_item("Q1")), {}, true}), EncodeError);
    CHECK_THROWS_AS(codec::encode({value_statement(wd_item("Q1"), wd_property("P1"), Iri(wd(ns::wdgenid, "x"))), {}, true}),
                    EncodeError);
}

TEST_CASE("property: decode inverts encode on random statements") {
    Generator g(20240611);
    int deep = 0, non_value = 0;
    for (int i = 0; i < 1000; ++i) {
        EncodedStatement es{g.statement(), g.annotation(), false};
        es.best = es.annotation.rank != Rank::deprecated && g.chance(0.7);
        if (es.statement.snak.kind() != SnakKind::value) ++non_value;
        else if (is_deep(*es.statement.snak.value())) ++deep;
        auto d = codec::decode(graph_of(codec::encode(es)));
        INFO(sexpr::print(es.statement), " ", sexpr::print(es.annotation));
        REQUIRE(d.statements == std::vector<EncodedStatement>{es});
        CHECK(d.diagnostics.empty());
    }
    CHECK(deep > 100);
    CHECK(non_value > 50);
}

TEST_CASE("property: every predicate lies in the namespace table") {
    Generator g(7);
    for (int i = 0; i < 300; ++i) {
        EncodedStatement es{g.statement(), g.annotation(), g.chance(0.5)};
        for (const auto& t : codec::encode(es)) {
            auto split = ns::split(t.predicate.value);
            INFO(t.predicate.value);
            CHECK(split.has_value());
        }
    }
}

TEST_CASE("property: deprecated statements have no truthy triple") {
    Generator g(8);
    for (int i = 0; i < 300; ++i) {
        EncodedStatement es{g.statement(), g.annotation(), false};
        es.best = es.annotation.rank != Rank::deprecated;
        auto g1 = graph_of(codec::encode(es));
        bool has_truthy = g1.contains(codec::truthy_triple(es.statement));
        CHECK(has_truthy == (es.annotation.rank != Rank::deprecated));
        CHECK(codec::truthy_subgraph(g1).size() == (has_truthy ? 1u : 0u));
    }
}

TEST_CASE("property: lifting then simplifying is idempotent") {
    Generator g(9);
    for (int i = 0; i < 500; ++i) {
        Value v = g.value();
        auto simple = codec::simple_value(v);
        auto lifted = codec::lift(simple);
        REQUIRE(lifted.has_value());
        CHECK(codec::simple_value(*lifted) == simple);
        CHECK(codec::lift(codec::simple_value(*lifted)) == lifted);
    }
}

TEST_CASE("rank batch marks the best statements") {
    auto s = wd_item("Q1");
    auto p = wd_property("P1");
    AnnotationRecord preferred{{}, {}, Rank::preferred}, normal{}, deprecated{{}, {}, Rank::deprecated};
    std::vector<AnnotatedStatement> data = {
        {value_statement(s, p, wd_item("Q2")), {preferred}},
        {value_statement(s, p, wd_item("Q3")), {normal}},
        {value_statement(s, wd_property("P2"), wd_item("Q3")), {deprecated}},
        {value_statement(s, wd_property("P3"), wd_item("Q3")), {normal}},
    };
    auto batch = codec::rank_batch(data);
    REQUIRE(batch.size() == 4);
    CHECK(batch[0].best);
    CHECK_FALSE(batch[1].best);
    CHECK_FALSE(batch[2].best);
    CHECK(batch[3].best);
}

TEST_CASE("a statement encoded twice with different references decodes to two records") {
    auto s = benzene_solubility();
    AnnotationRecord a1 = benzene_solubility_annotation();
    AnnotationRecord a2 = a1;
    a2.references = ReferenceRecordSet{ReferenceRecord{Snak::value_snak(wd_property("P248"), wd_item("Q7"))}};
    auto g = codec::encode_dataset({{s, {a1, a2}}});
    auto d = codec::decode(g);
    REQUIRE(d.statements.size() == 2);
    std::set<AnnotationRecord> records;
    for (const auto& es : d.statements) {
        CHECK(es.statement == s);
        records.insert(es.annotation);
    }
    CHECK(records == std::set<AnnotationRecord>{a1, a2});
}

TEST_CASE("descriptors are encoded and decoded") {
    Descriptor desc{Text("Marie Curie"), Text("Polish-French physicist and chemist"),
                    TextSet{Text("Madame Curie"), Text("Maria Skłodowska-Curie")}};
    auto g = codec::encode_dataset({}, {{wd_item("Q7286"), desc}});
    CHECK(g.size() == 4);
    auto d = codec::decode(g);
    CHECK(d.descriptors.at(wd_item("Q7286")) == desc);
}

// ---------------------------------------------------------------------------
// Query compilation

TEST_CASE("truthy filter for subject and property") {
    FilterPattern p(Fingerprint::entity(wd_item("Q2270")), Fingerprint::entity(wd_property("P2177")), std::nullopt);
    auto q = codec::compile_filter(p, codec::Level::truthy, 10);
    REQUIRE(q.where.size() == 1);
    CHECK(q.where[0].subject == rdf::PatternTerm(rdf::iri("http://www.wikidata.org/entity/Q2270")));
    CHECK(q.where[0].predicate == rdf::PatternTerm(rdf::iri(wd(ns::wdt, "P2177"))));
    CHECK(q.where[0].object == rdf::PatternTerm(rdf::Variable{"v"}));
    CHECK(q.limit == std::optional<std::size_t>(10));
    CHECK(q.projection == std::vector<std::string>{"v"});
    CHECK(rdf::parse_sparql(rdf::serialize(q)) == q);
}

TEST_CASE("snak fingerprint on the subject adds a joined pattern") {
    FilterPattern p(Fingerprint::snak(Snak::value_snak(wd_property("P234"), String(kBenzeneInchi))),
                    Fingerprint::entity(wd_property("P2067")), std::nullopt);
    auto q = codec::compile_filter(p, codec::Level::truthy);
    REQUIRE(q.where.size() == 2);
    CHECK(q.where[0].subject == rdf::PatternTerm(rdf::Variable{"s"}));
    CHECK(q.where[1].subject == rdf::PatternTerm(rdf::Variable{"s"}));
    CHECK(q.where[1].predicate == rdf::PatternTerm(rdf::iri(wd(ns::wdt, "P234"))));
    CHECK(q.where[1].object == rdf::PatternTerm(rdf::plain(kBenzeneInchi)));

    auto full = codec::compile_filter(p, codec::Level::full);
    CHECK(full.where.size() == 3);
    CHECK(full.distinct);
}

TEST_CASE("wildcard filter uses a predicate variable") {
    auto q = codec::compile_filter(FilterPattern::any(), codec::Level::truthy);
    REQUIRE(q.where.size() == 1);
    CHECK(std::holds_alternative<rdf::Variable>(q.where[0].predicate));
    CHECK(q.projection == std::vector<std::string>{"s", "p", "v"});
}

TEST_CASE("property snak fingerprints are unsupported") {
    FilterPattern p(std::nullopt, Fingerprint::snak(Snak::value_snak(wd_property("P1"), wd_item("Q1"))),
                    std::nullopt);
    CHECK_THROWS_AS(codec::compile_filter(p, codec::Level::truthy), UnsupportedFingerprint);
}

TEST_CASE("full-level filter and annotation queries over an encoded graph") {
    auto s = benzene_solubility();
    auto a = benzene_solubility_annotation();
    auto g = codec::encode_dataset({{s, {a}}, {benzene_mass(), {AnnotationRecord{}}}});

    FilterPattern p(Fingerprint::entity(wd_item("Q2270")), Fingerprint::entity(wd_property("P2177")), std::nullopt);
    auto rows = rdf::match_bgp(g, codec::compile_filter(p, codec::Level::full));
    REQUIRE(rows.rows.size() == 1);
    auto node = codec::statement_node(s, a);
    CHECK(rows.rows[0][0] == std::optional<rdf::Term>(rdf::iri(node)));

    auto ann = rdf::match_bgp(g, codec::compile_annotations(s));
    REQUIRE(ann.rows.size() == 1);
    CHECK(ann.rows[0][0] == std::optional<rdf::Term>(rdf::iri(node)));

    // Closure of the node decodes to the annotation record.
    rdf::Graph closure;
    closure.insert(triple(s.subject.iri().str(), wd(ns::p, "P2177"), rdf::iri(node)));
    std::vector<std::string> frontier{node};
    while (!frontier.empty()) {
        auto r = rdf::match_bgp(g, codec::node_query(frontier));
        frontier.clear();
        for (const auto& row : r.rows) {
            auto t = triple(rdf::iri_value(*row[0]), rdf::iri_value(*row[1]), *row[2]);
            if (!closure.insert(t)) continue;
            if (rdf::is_iri(t.object)) {
                const auto& o = rdf::iri_value(t.object);
                if (o.starts_with(ns::wdv) || o.starts_with(ns::wdref)) frontier.push_back(o);
            }
        }
    }
    auto d = codec::decode(closure);
    REQUIRE(d.statements.size() == 1);
    CHECK(d.statements[0].statement == s);
    CHECK(d.statements[0].annotation == a);

    CHECK(rdf::match_bgp(g, codec::compile_annotations(pubchem_mass())).rows.empty());
}

TEST_CASE("descriptor query selects label, description and aliases") {
    Descriptor desc{Text("benzene"), Text("chemical compound"), TextSet{Text("benzol")}};
    auto g = codec::encode_dataset({{benzene_mass(), {AnnotationRecord{}}}}, {{wd_item("Q2270"), desc}});
    auto r = rdf::match_bgp(g, codec::descriptor_query({wd_item("Q2270"), wd_item("Q1")}));
    CHECK(r.rows.size() == 3);
}
