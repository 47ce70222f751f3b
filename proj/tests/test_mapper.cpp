#include <doctest.h>

#include <algorithm>

#include "kif/errors.hpp"
#include "kif/mapper.hpp"
#include "kif/rdf/ntriples.hpp"
#include "kif/sexpr.hpp"
#include "support/equivalence.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace kif;
using namespace kif::test;
using kif::mapper::MappingSpec;

namespace {

const std::string kVocab = "http://rdf.ncbi.nlm.nih.gov/pubchem/vocabulary#";
const std::string kCompound = "http://rdf.ncbi.nlm.nih.gov/pubchem/compound/CID";

MappingSpec pubchem_spec() { return MappingSpec::load(data_path("pubchem-mapping.json")); }

std::shared_ptr<const rdf::Graph> pubchem_graph() {
    return std::make_shared<rdf::Graph>(rdf::read_ntriples_file(data_path("pubchem.nt")));
}

FilterPattern by_inchi_mass() {
    return FilterPattern(Fingerprint::snak(Snak::value_snak(wd_property("P234"), String(kBenzeneInchi))),
                         Fingerprint::entity(wd_property("P2067")), std::nullopt);
}

bool uses_predicate(const rdf::SelectQuery& q, const std::string& iri) {
    return std::any_of(q.where.begin(), q.where.end(),
                       [&](const rdf::TriplePattern& t) { return t.predicate == rdf::PatternTerm(rdf::iri(iri)); });
}

} // namespace

TEST_CASE("entity rules rewrite between templates") {
    mapper::EntityRule r(kCompound + "{n}", "http://www.wikidata.org/entity/Q_PUBCHEM_CID{n}");
    CHECK(r.to_target(kCompound + "241") == "http://www.wikidata.org/entity/Q_PUBCHEM_CID241");
    CHECK(r.to_source("http://www.wikidata.org/entity/Q_PUBCHEM_CID241") == kCompound + "241");
    CHECK_FALSE(r.to_target(kCompound).has_value());
    CHECK_FALSE(r.to_target(kCompound + "1/2").has_value());
    CHECK_FALSE(r.to_target("http://example.org/CID241").has_value());
    CHECK_THROWS_AS(mapper::EntityRule("http://a/{n}{n}", "http://b/{n}"), InvalidValue);
    CHECK_THROWS_AS(mapper::EntityRule("http://a/", "http://b/{n}"), InvalidValue);
}

TEST_CASE("property: entity rewriting is a bijection on template instances") {
    mapper::EntityRule r("http://src.example/item-{n}.ttl", "http://www.wikidata.org/entity/Q_SRC_{n}");
    Generator g(3);
    const std::string alphabet = "abcXYZ0123456789_-.";
    for (int i = 0; i < 500; ++i) {
        std::string capture;
        for (int k = g.uniform(1, 12); k > 0; --k) capture += alphabet[static_cast<std::size_t>(g.uniform(0, 18))];
        auto source = "http://src.example/item-" + capture + ".ttl";
        auto target = r.to_target(source);
        REQUIRE(target.has_value());
        CHECK(r.to_source(*target) == source);
        CHECK(r.to_target(*r.to_source(*target)) == target);
    }
}

TEST_CASE("mapping specs load from JSON") {
    auto spec = pubchem_spec();
    CHECK(spec.name == "pubchem-like");
    REQUIRE(spec.property_rules.size() == 2);
    CHECK(spec.rule_for(wd_property("P234"))->source == kVocab + "inchi");
    const auto* mass = spec.rule_for(wd_property("P2067"));
    REQUIRE(mass != nullptr);
    CHECK(mass->codec.kind == mapper::ValueCodec::Kind::decimal_quantity);
    CHECK(mass->codec.unit == wd_item("Q28924752"));
    CHECK(spec.rule_for(wd_property("P2177")) == nullptr);

    CHECK_THROWS_AS(MappingSpec::from_json(R"({"property_rules": [
        {"property": "wd:P1", "source": "http://x/a"}, {"property": "wd:P1", "source": "http://x/b"}]})"),
                    InvalidValue);
    CHECK_THROWS_AS(MappingSpec::from_json(R"({"property_rules": [
        {"property": "wd:P1", "source": "http://x/a", "codec": "float"}]})"),
                    InvalidValue);
    CHECK_THROWS_AS(MappingSpec::from_json(R"({"property_rules": [
        {"property": "wd:P1", "source": "http://x/a", "codec": "decimal-quantity"}]})"),
                    InvalidValue);
    CHECK_THROWS_AS(MappingSpec::from_json("{"), InvalidValue);
}

TEST_CASE("patterns translate to source vocabulary") {
    auto spec = pubchem_spec();
    auto q = mapper::translate_pattern(spec, by_inchi_mass());
    REQUIRE(q.has_value());
    CHECK(q->where.size() == 2);
    CHECK(uses_predicate(*q, kVocab + "inchi"));
    REQUIRE(q->values.has_value());
    CHECK(q->values->rows.size() == 1);
    CHECK(q->values->rows[0][0] == std::optional<rdf::Term>(rdf::iri(kVocab + "monoisotopicMass")));

    FilterPattern solubility(std::nullopt, Fingerprint::entity(wd_property("P2177")), std::nullopt);
    CHECK_FALSE(mapper::translate_pattern(spec, solubility).has_value());

    auto any = mapper::translate_pattern(spec, FilterPattern::any());
    REQUIRE(any.has_value());
    CHECK(any->values->rows.size() == 2);

    FilterPattern no_values(std::nullopt, std::nullopt, std::nullopt, SnakMask::only(SnakKind::no_value));
    CHECK_FALSE(mapper::translate_pattern(spec, no_values).has_value());

    FilterPattern foreign(Fingerprint::entity(wd_item("Q2270")), std::nullopt, std::nullopt);
    CHECK_FALSE(mapper::translate_pattern(spec, foreign).has_value());
}

TEST_CASE("results translate back to Wikidata vocabulary") {
    auto spec = pubchem_spec();
    rdf::ResultSet rows{{"s", "p", "v"},
                        {{rdf::iri(kCompound + "241"), rdf::iri(kVocab + "monoisotopicMass"),
                          rdf::typed("78.0469970703125", rdf::xsd_decimal)},
                         {rdf::iri(kCompound + "241"), rdf::iri(kVocab + "monoisotopicMass"),
                          rdf::typed("about 78", rdf::xsd_decimal)},
                         {rdf::iri("http://example.org/other"), rdf::iri(kVocab + "inchi"), rdf::plain("x")}}};
    auto t = mapper::translate_results(spec, rows);
    CHECK(t.statements == std::vector<Statement>{pubchem_mass()});
    CHECK(t.diagnostics.size() == 2);
}

TEST_CASE("mapper store answers the mass-by-InChI query") {
    auto exec = local_executor(pubchem_graph());
    auto store = mapper::mapper_store(exec, pubchem_spec());
    CHECK(store->filter(by_inchi_mass()).collect() == std::vector<Statement>{pubchem_mass()});
    CHECK(store->count(FilterPattern::any()) == 6);
    CHECK(store->contains(pubchem_mass()));
    CHECK_FALSE(store->contains(benzene_mass()));

    auto ann = store->get_annotations({pubchem_mass(), benzene_mass()});
    CHECK(ann[0].second == AnnotationRecordSet{AnnotationRecord{}});
    CHECK(ann[1].second.empty());

    auto desc = store->get_descriptor({wd_item("Q_PUBCHEM_CID241"), wd_item("Q2270")}, "en");
    CHECK(desc[0].second.label == Text("benzene"));
    CHECK_FALSE(desc[0].second.description.has_value());
    CHECK(desc[1].second.empty());
}

TEST_CASE("value constants are compared after decoding") {
    auto store = mapper::mapper_store(local_executor(pubchem_graph()), pubchem_spec());
    FilterPattern exact(std::nullopt, std::nullopt,
                        Fingerprint::constant(Quantity(Decimal::parse("78.04699707031250"), wd_item("Q28924752"))));
    CHECK(store->filter(exact).collect() == std::vector<Statement>{pubchem_mass()});
    FilterPattern other_unit(std::nullopt, std::nullopt,
                             Fingerprint::constant(Quantity(Decimal::parse("78.0469970703125"), wd_item("Q483261"))));
    CHECK(store->count(other_unit) == 0);
}

TEST_CASE("unmapped properties issue no source query") {
    auto exec = local_executor(pubchem_graph());
    auto store = mapper::mapper_store(exec, pubchem_spec());
    FilterPattern solubility(Fingerprint::entity(wd_item("Q_PUBCHEM_CID241")), Fingerprint::entity(wd_property("P2177")),
                             std::nullopt);
    CHECK(store->filter(solubility, 10).collect().empty());
    CHECK(store->count(solubility) == 0);
    CHECK(exec->queries_issued() == 0);
}

TEST_CASE("extra references tag mapper annotations") {
    StoreOptions o;
    ReferenceRecord tag{Snak::value_snak(wd_property("P248"), String("pubchem"))};
    o.extra_references.insert(tag);
    auto store = mapper::mapper_store(local_executor(pubchem_graph()), pubchem_spec(), o);
    auto ann = store->get_annotations({pubchem_mass()});
    REQUIRE(ann[0].second.size() == 1);
    CHECK(ann[0].second.begin()->references == ReferenceRecordSet{tag});
}

TEST_CASE("property: mapper store equals a hand-built target store") {
    auto spec = pubchem_spec();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Generator g(seed);
        auto graph = std::make_shared<rdf::Graph>();
        Fixture target;
        Dataset shape;
        for (int n = 1; n <= 8; ++n) {
            if (!g.chance(0.8)) continue;
            auto cid = std::to_string(n * 7);
            rdf::IriTerm subject{kCompound + cid};
            auto entity = wd_item("Q_PUBCHEM_CID" + cid);
            if (g.chance(0.8)) {
                auto inchi = "InChI=1S/X" + std::to_string(g.uniform(1, 4));
                graph->insert({subject, rdf::IriTerm{kVocab + "inchi"}, rdf::plain(inchi)});
                target.statements.push_back({value_statement(entity, wd_property("P234"), String(inchi)), {}});
            }
            if (g.chance(0.8)) {
                auto mass = g.decimal();
                graph->insert({subject, rdf::IriTerm{kVocab + "monoisotopicMass"}, rdf::typed(mass.str(), rdf::xsd_decimal)});
                target.statements.push_back(
                    {value_statement(entity, wd_property("P2067"), Quantity(mass, wd_item("Q28924752"))), {}});
            }
            if (g.chance(0.5)) {
                auto label = g.pick(std::vector<std::string>{"benzene", "water", "ethanol"});
                graph->insert({subject, rdf::IriTerm{"http://www.w3.org/2000/01/rdf-schema#label"},
                               rdf::lang(label, "en")});
                target.descriptors.push_back({entity, Descriptor{Text(label), std::nullopt, {}}});
            }
        }
        target = normalize(target);
        shape.statements = target.statements;
        std::vector<Entity> entities;
        for (int n = 1; n <= 8; ++n) entities.push_back(wd_item("Q_PUBCHEM_CID" + std::to_string(n * 7)));

        StoreOptions o;
        o.page_size = static_cast<std::size_t>(g.uniform(1, 5));
        std::vector<StorePtr> stores = {memory_store(target), mapper::mapper_store(local_executor(graph), spec, o)};
        for (int i = 0; i < 30; ++i) {
            auto p = random_pattern(g, shape);
            auto diff = compare_stores(stores, p, {pubchem_mass()}, entities, {"en"});
            INFO(diff);
            CHECK(diff.empty());
            for (const auto& s : stores[1]->filter(p).collect()) CHECK(spec.rule_for(s.snak.property()) != nullptr);
        }
    }
}
