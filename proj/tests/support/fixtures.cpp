#include "support/fixtures.hpp"

namespace kif::test {

Entity wd_item(const std::string& id) { return Entity::item("http://www.wikidata.org/entity/" + id); }
Entity wd_property(const std::string& id) { return Entity::property("http://www.wikidata.org/entity/" + id); }

AnnotatedStatement curie_prize_money() {
    Statement s = value_statement(wd_item("Q7286"), wd_property("P166"), wd_item("Q38104"));
    AnnotationRecord a;
    a.qualifiers.insert(
        Snak::value_snak(wd_property("P2121"), Quantity(Decimal::parse("35339"), wd_item("Q122922"))));
    a.references.insert(ReferenceRecord(SnakSet{
        Snak::value_snak(wd_property("P854"), Iri("https://www.nobelprize.org/nobel_prizes/about/amounts/"))}));
    return {s, AnnotationRecordSet{a}};
}

Statement benzene_solubility() {
    return value_statement(wd_item("Q2270"), wd_property("P2177"),
                           Quantity(Decimal::parse("0.07"), wd_item("Q21127659"), Decimal::parse("0.06"),
                                    Decimal::parse("0.08")));
}

AnnotationRecord benzene_solubility_annotation() {
    AnnotationRecord a;
    a.qualifiers.insert(Snak::value_snak(
        wd_property("P2076"),
        Quantity(Decimal::parse("68"), wd_item("Q42289"), Decimal::parse("67"), Decimal::parse("69"))));
    a.qualifiers.insert(Snak::value_snak(wd_property("P2178"), wd_item("Q283")));
    a.references.insert(ReferenceRecord(SnakSet{Snak::value_snak(wd_property("P1931"), String("0049"))}));
    a.rank = Rank::normal;
    return a;
}

Statement benzene_mass() {
    return value_statement(wd_item("Q2270"), wd_property("P2067"),
                           Quantity(Decimal::parse("78.11"), wd_item("Q483261")));
}

Statement pubchem_mass() {
    return value_statement(wd_item("Q_PUBCHEM_CID241"), wd_property("P2067"),
                           Quantity(Decimal::parse("78.0469970703125"), wd_item("Q28924752")));
}

std::string data_path(const std::string& file) { return std::string(KIF_DATA_DIR) + "/" + file; }

} // namespace kif::test
