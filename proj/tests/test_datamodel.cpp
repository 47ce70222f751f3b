#include <doctest.h>

#include <algorithm>

#include "kif/datamodel.hpp"
#include "kif/digest.hpp"
#include "kif/errors.hpp"
#include "kif/sexpr.hpp"
#include "support/generators.hpp"

using namespace kif;

namespace {

Entity wd_item(const std::string& id) { return Entity::item("http://www.wikidata.org/entity/" + id); }
Entity wd_prop(const std::string& id) { return Entity::property("http://www.wikidata.org/entity/" + id); }

} // namespace

TEST_CASE("iri validation") {
    CHECK_NOTHROW(Iri("http://example.org/x"));
    CHECK_NOTHROW(Iri("urn:x"));
    CHECK_THROWS_AS(Iri(""), InvalidValue);
    CHECK_THROWS_AS(Iri("no-scheme"), InvalidValue);
    CHECK_THROWS_AS(Iri(" http://example.org/x"), InvalidValue);
    CHECK_THROWS_AS(Iri("http://example.org/x "), InvalidValue);
}

TEST_CASE("item and property with the same iri are distinct") {
    CHECK(wd_item("Q1") != Entity::property("http://www.wikidata.org/entity/Q1"));
}

TEST_CASE("text language is lowercased and non-empty") {
    CHECK(Text("x", "PT-BR").language() == "pt-br");
    CHECK(Text("x").language() == "en");
    CHECK_THROWS_AS(Text("x", ""), InvalidValue);
}

TEST_CASE("decimal keeps the exact value") {
    CHECK(Decimal::parse("78.0469970703125").str() == "78.0469970703125");
    CHECK(Decimal::parse("+1.50").str() == "1.5");
    CHECK(Decimal::parse("-0.0").str() == "0");
    CHECK(Decimal::parse("007").str() == "7");
    CHECK_THROWS_AS(Decimal::parse("1e3"), InvalidValue);
    CHECK_THROWS_AS(Decimal::parse("."), InvalidValue);
    CHECK(Decimal::parse("-2") < Decimal::parse("-1.5"));
    CHECK(Decimal::parse("0.06") < Decimal::parse("0.07"));
    CHECK(Decimal::parse("10") > Decimal::parse("9.99"));
}

TEST_CASE("quantity bounds") {
    auto d = [](const char* s) { return Decimal::parse(s); };
    CHECK_NOTHROW(Quantity(d("0.07"), wd_item("Q21127659"), d("0.06"), d("0.08")));
    CHECK_THROWS_AS(Quantity(d("0.07"), std::nullopt, d("0.08")), InvalidValue);
    CHECK_THROWS_AS(Quantity(d("0.07"), std::nullopt, std::nullopt, d("0.06")), InvalidValue);
    CHECK_THROWS_AS(Quantity(d("1"), wd_prop("P1")), InvalidValue);
}

TEST_CASE("time zero-fills components finer than the precision") {
    Timestamp ts = Timestamp::parse("1903-12-10T13:45:00Z");
    Time t(ts, precision::year, 0, wd_item("Q1985727"));
    CHECK(t.timestamp().iso_string() == "1903-01-01T00:00:00Z");
    CHECK(Time(ts, precision::day).timestamp().iso_string() == "1903-12-10T00:00:00Z");
    CHECK(Time(ts, 14).timestamp().iso_string() == "1903-12-10T13:45:00Z");
    CHECK_THROWS_AS(Time(ts, 15), InvalidValue);
    CHECK_THROWS_AS(Time(ts, -1), InvalidValue);
    CHECK(Timestamp::parse("-0500-01-01").year == -500);
}

TEST_CASE("is_deep") {
    CHECK(is_deep(Value(Quantity(Decimal::parse("1")))));
    CHECK(is_deep(Value(Time(Timestamp::parse("1903-01-01")))));
    CHECK_FALSE(is_deep(Value(String("0049"))));
    CHECK_FALSE(is_deep(Value(wd_item("Q1"))));
}

TEST_CASE("snak property must be a property") {
    CHECK_THROWS_AS(Snak::value_snak(wd_item("Q1"), String("x")), InvalidValue);
    CHECK_THROWS_AS(Snak::no_value(wd_item("Q1")), InvalidValue);
}

TEST_CASE("reference record must be non-empty and fingerprint snak sets too") {
    CHECK_THROWS_AS(ReferenceRecord(SnakSet{}), InvalidValue);
    CHECK_THROWS_AS(Fingerprint::snaks(SnakSet{}), InvalidValue);
}

TEST_CASE("filter pattern narrows the mask for value fingerprints") {
    FilterPattern p(std::nullopt, std::nullopt, Fingerprint::constant(String("x")));
    CHECK(p.snak_kinds() == SnakMask::only(SnakKind::value));
    CHECK_THROWS_AS(FilterPattern(std::nullopt, std::nullopt, Fingerprint::constant(String("x")),
                                  SnakMask::only(SnakKind::no_value)),
                    InvalidValue);
    CHECK_NOTHROW(FilterPattern::any().check_supported());
    FilterPattern bad_property(std::nullopt, Fingerprint::snak(Snak::no_value(wd_prop("P1"))), std::nullopt);
    CHECK_THROWS_AS(bad_property.check_supported(), UnsupportedFingerprint);
}

TEST_CASE("canonical compare basics") {
    CHECK(canonical_compare(Object(Value(wd_item("Q1"))), Object(Value(wd_item("Q2")))) < 0);
    Object x = Value(String("a"));
    CHECK(canonical_compare(x, x) == 0);
    CHECK(Rank::preferred > Rank::normal);
    CHECK(Rank::normal > Rank::deprecated);
}

TEST_CASE("property: canonical compare is a total order consistent with equality") {
    test::Generator g(7);
    std::vector<Object> xs;
    for (int i = 0; i < 1000; ++i) xs.push_back(g.object());
    for (int i = 0; i < 3000; ++i) {
        const auto& a = g.pick(xs);
        const auto& b = g.pick(xs);
        const auto& c = g.pick(xs);
        auto ab = canonical_compare(a, b);
        auto ba = canonical_compare(b, a);
        CHECK((ab == 0) == (a == b));
        CHECK((ab < 0) == (ba > 0));
        if (ab <= 0 && canonical_compare(b, c) <= 0) CHECK(canonical_compare(a, c) <= 0);
    }
}

TEST_CASE("property: sorting random snaks is deterministic") {
    auto run = [] {
        test::Generator g(11);
        std::vector<Snak> xs;
        for (int i = 0; i < 1000; ++i) xs.push_back(g.snak());
        return xs;
    };
    auto a = run();
    auto b = run();
    std::reverse(b.begin(), b.end());
    std::sort(a.begin(), a.end());
    std::stable_sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("property: statement equality is structural") {
    test::Generator g(13);
    for (int i = 0; i < 500; ++i) {
        Statement s = g.statement();
        Statement t{s.subject, s.snak};
        CHECK(s == t);
        Statement u = g.statement();
        CHECK((s == u) == (s.subject == u.subject && s.snak == u.snak));
    }
}

TEST_CASE("content digest") {
    auto q = Quantity(Decimal::parse("0.07"), wd_item("Q21127659"), Decimal::parse("0.06"),
                      Decimal::parse("0.08"));
    Statement a = value_statement(wd_item("Q2270"), wd_prop("P2177"), q);
    Statement b{Entity::item("http://www.wikidata.org/entity/Q2270"),
                Snak::value_snak(Entity::property("http://www.wikidata.org/entity/P2177"),
                                 Quantity(Decimal::parse("0.070"), wd_item("Q21127659"),
                                          Decimal::parse("0.06"), Decimal::parse("0.08")))};
    CHECK(content_digest(a) == content_digest(b));
    CHECK(content_digest(a).size() == 64);
    // Rank lives in the annotation record, never in the statement.
    AnnotationRecord normal, preferred;
    preferred.rank = Rank::preferred;
    CHECK(content_digest(a) == content_digest(a));
    CHECK(content_digest(normal) != content_digest(preferred));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("property: digest is stable under parse and print") {
    test::Generator g(17);
    for (int i = 0; i < 1000; ++i) {
        Object x = g.object();
        for (auto mode : {sexpr::PrintMode::full, sexpr::PrintMode::compact}) {
            Object y = sexpr::parse(sexpr::print(x, mode));
            CHECK(content_digest(x) == content_digest(y));
        }
    }
}
