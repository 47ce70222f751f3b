#include "kif/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "kif/errors.hpp"
#include "kif/http.hpp"
#include "kif/namespaces.hpp"
#include "kif/sexpr.hpp"

namespace kif::bench {

namespace {

// splitmix64: portable, so generated data is identical on every platform.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) { return mix(mix(mix(seed) ^ a) ^ b); }

Entity item(const std::string& id) { return Entity::item(ns::expand(ns::wd, id)); }
Entity prop(const std::string& id) { return Entity::property(ns::expand(ns::wd, id)); }
Entity compound(int i) { return item("Q_CHEM_" + std::to_string(i)); }
Entity person(int k) { return item("Q_PERSON_" + std::to_string(k)); }

int carbons(int i) { return 1 + i % 12; }
int hydrogens(int i) { return 2 + (i * 3) % 20; }
std::string formula(int i) { return "C" + std::to_string(carbons(i)) + "H" + std::to_string(hydrogens(i)); }
std::string inchi(int i) { return "InChI=1S/" + formula(i) + "/syn" + std::to_string(i); }
std::string cas(int i) { return std::to_string(i) + "-" + std::to_string(i * 7 % 90 + 10) + "-" + std::to_string(i % 10); }

std::string milli(long long m) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%03lld", m < 0 ? "-" : "", (m < 0 ? -m : m) / 1000, (m < 0 ? -m : m) % 1000);
    return buf;
}

Quantity mass(int i) {
    long long m = carbons(i) * 12011LL + hydrogens(i) * 1008LL;
    if (i % 4 == 0) return Quantity(Decimal::parse(milli(m)), item("Q483261"), Decimal::parse(milli(m - 5)),
                                    Decimal::parse(milli(m + 5)));
    return Quantity(Decimal::parse(milli(m)), item("Q483261"));
}

Snak vsnak(const std::string& p, Value v) { return Snak::value_snak(prop(p), std::move(v)); }
Statement vst(const Entity& s, const std::string& p, Value v) { return Statement{s, vsnak(p, std::move(v))}; }

Time year(int y) { return Time(Timestamp{y, 1, 1, 0, 0, 0}, precision::year, 0, item("Q1985727")); }

} // namespace

Fixture chemistry_dataset(int compounds, std::uint64_t seed) {
    Fixture f;
    auto add = [&](Statement s, AnnotationRecord r = {}) {
        f.statements.push_back({std::move(s), AnnotationRecordSet{std::move(r)}});
    };
    auto sourced = [](int k, Rank rank = Rank::normal) {
        AnnotationRecord r;
        r.references = ReferenceRecordSet{ReferenceRecord{vsnak("P248", item("Q_SOURCE_" + std::to_string(k)))}};
        r.rank = rank;
        return r;
    };
    for (int i = 1; i <= compounds; ++i) {
        auto c = compound(i);
        auto h = hash(seed, static_cast<std::uint64_t>(i));
        add(vst(c, "P31", item("Q11173")));
        if (i % 5 == 0) add(vst(c, "P31", item("Q12140")));
        if (i >= 2) add(vst(c, "P279", compound(i / 2)));
        add(vst(c, "P274", String(formula(i))));
        add(vst(c, "P234", String(inchi(i))), sourced(1));
        add(vst(c, "P2067", mass(i)), sourced(i % 3, i % 10 == 0 ? Rank::preferred : Rank::normal));
        if (i % 9 == 0) add(vst(c, "P2067", mass(i + 1)), sourced(2, Rank::deprecated));
        if (i % 3 == 0) {
            AnnotationRecord r = sourced(0);
            r.qualifiers = SnakSet{vsnak("P2076", Quantity(Decimal::parse("68"), item("Q42289"), Decimal::parse("67"),
                                                            Decimal::parse("69"))),
                                   vsnak("P2178", item("Q283"))};
            r.references.insert(ReferenceRecord{vsnak("P813", Time(Timestamp{2020, 5, 1, 0, 0, 0}))});
            add(vst(c, "P2177", Quantity(Decimal::parse(milli(static_cast<long long>(h % 100000))), item("Q21127659"))),
                r);
        }
        if (i % 11 == 0) add(Statement{c, Snak::no_value(prop("P2177"))});
        if (i % 2 == 0)
            add(vst(c, "P2101", Quantity(Decimal::parse(std::to_string(static_cast<int>(h % 400) - 100)), item("Q25267"))));
        add(vst(c, "P231", String(cas(i))));
        if (i % 6 == 0) add(vst(c, "P61", person(i % 4)));
        if (i % 6 == 3) add(Statement{c, Snak::some_value(prop("P61"))});
        if (i % 4 == 1) add(vst(c, "P575", year(1800 + i % 200)));
        f.descriptors.push_back({c, Descriptor{Text("compound " + std::to_string(i), "en"),
                                                Text("synthetic compound", "en"), TextSet{Text("C" + std::to_string(i), "en")}}});
        f.descriptors.push_back({c, Descriptor{Text("composto " + std::to_string(i), "pt"), std::nullopt, {}}});
    }
    for (int k = 0; k < 4; ++k) {
        add(vst(person(k), "P31", item("Q5")));
        f.descriptors.push_back({person(k), Descriptor{Text("chemist " + std::to_string(k), "en"), std::nullopt, {}}});
    }
    return normalize(std::move(f));
}

std::vector<Query> chemistry_battery(std::uint64_t seed) {
    constexpr int n = 80;
    using Fp = std::optional<Fingerprint>;
    auto ent = [](const Entity& e) { return Fp(Fingerprint::entity(e)); };
    auto p = [&](const std::string& id) { return ent(prop(id)); };
    auto snak = [](const std::string& id, Value v) { return Fp(Fingerprint::snak(vsnak(id, std::move(v)))); };
    auto snaks = [](std::vector<Snak> s) { return Fp(Fingerprint::snaks(SnakSet(std::move(s)))); };
    auto k = [](Value v) { return Fp(Fingerprint::constant(std::move(v))); };
    auto only = [](SnakKind kind) { return SnakMask::only(kind); };
    const SnakMask all = SnakMask::all();

    std::vector<std::function<FilterPattern(int)>> templates = {
        [&](int i) { return FilterPattern(ent(compound(i)), p("P2067"), {}); },
        [&](int i) { return FilterPattern(ent(compound(i)), {}, {}); },
        [&](int i) { return FilterPattern(ent(compound(i)), p("P2177"), {}, only(SnakKind::value)); },
        [&](int i) { return FilterPattern(snak("P234", String(inchi(i))), p("P2067"), {}); },
        [&](int i) { return FilterPattern(snak("P274", String(formula(i))), p("P2067"), {}); },
        [&](int i) {
            return FilterPattern(snaks({vsnak("P31", item("Q11173")), vsnak("P274", String(formula(i)))}), p("P234"), {});
        },
        [&](int) { return FilterPattern({}, p("P2177"), {}); },
        [&](int) { return FilterPattern({}, p("P2177"), {}, only(SnakKind::no_value)); },
        [&](int) { return FilterPattern({}, p("P61"), {}, only(SnakKind::some_value)); },
        [&](int i) { return FilterPattern({}, p("P279"), ent(compound(i / 2 + 1))); },
        [&](int i) { return FilterPattern({}, p("P279"), snak("P274", String(formula(i)))); },
        [&](int i) { return FilterPattern(snak("P279", compound(i / 2 + 1)), p("P2067"), {}); },
        [&](int i) { return FilterPattern({}, {}, k(String(formula(i)))); },
        [&](int i) { return FilterPattern({}, p("P2067"), k(mass(i))); },
        [&](int) { return FilterPattern({}, p("P31"), ent(item("Q12140"))); },
        [&](int) { return FilterPattern(snak("P31", item("Q12140")), p("P2101"), {}); },
        [&](int i) { return FilterPattern(ent(compound(i)), p("P575"), {}); },
        [&](int i) { return FilterPattern(snak("P231", String(cas(i))), {}, {}); },
        [&](int i) { return FilterPattern(ent(person(i % 4)), {}, {}); },
        [&](int) { return FilterPattern({}, p("P61"), snak("P31", item("Q5"))); },
        [&](int i) { return FilterPattern(snak("P61", person(i % 4)), p("P274"), {}); },
        [&](int i) {
            return FilterPattern(snaks({vsnak("P31", item("Q11173")), vsnak("P279", compound(i / 2 + 1))}), p("P2177"), {});
        },
        [&](int) { return FilterPattern({}, {}, {}, only(SnakKind::no_value)); },
        [&](int) { return FilterPattern({}, {}, {}, only(SnakKind::some_value)); },
        [&](int i) { return FilterPattern(ent(compound(i)), p("P2177"), {}, only(SnakKind::no_value)); },
        [&](int i) { return FilterPattern({}, p("P234"), k(String(inchi(i)))); },
        [&](int i) { return FilterPattern(snak("P234", String(inchi(i))), {}, {}); },
        [&](int) { return FilterPattern({}, p("P2101"), {}); },
        [&](int i) { return FilterPattern(snak("P274", String(formula(i))), p("P279"), snak("P31", item("Q11173"))); },
        [&](int) { return FilterPattern({}, p("P575"), {}); },
        [&](int i) { return FilterPattern(ent(compound(i)), p("P31"), ent(item("Q11173")), all); },
        [&](int i) { return FilterPattern({}, {}, snak("P274", String(formula(i)))); },
    };

    std::vector<Query> out;
    for (std::size_t t = 0; t < templates.size(); ++t) {
        int instances = t < 21 ? 2 : 1;
        for (int j = 0; j < instances; ++j) {
            int i = 1 + static_cast<int>(hash(seed, t + 1000, static_cast<std::uint64_t>(j)) % n);
            char id[48];
            std::snprintf(id, sizeof id, "t%02zu-%d", t + 1, j + 1);
            out.push_back({id, templates[t](i)});
        }
    }
    return out;
}

std::vector<Query> parse_battery(std::string_view text) {
    std::vector<Query> out;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto space = line.find_first_of(" \t", first);
        if (space == std::string::npos || line[first] == '(')
            throw ParseError("expected '<id> (FilterPattern ...)'", line_no, first + 1);
        Query q{line.substr(first, space - first), FilterPattern::any()};
        try {
            q.pattern = sexpr::parse_filter_pattern(std::string_view(line).substr(space));
        } catch (const ParseError& e) {
            throw ParseError(std::string(e.what()) + " in query " + q.id, line_no, space + e.column());
        }
        out.push_back(std::move(q));
    }
    return out;
}

std::string format_battery(const std::vector<Query>& queries) {
    std::string out;
    for (const auto& q : queries) out += q.id + " " + sexpr::print(q.pattern) + "\n";
    return out;
}

namespace {

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
}

} // namespace

std::vector<Row> run(const Store& store, const std::vector<Query>& queries, int runs) {
    if (runs < 1) throw Error("bench needs at least one run");
    using clock = std::chrono::steady_clock;
    std::vector<Row> out;
    for (const auto& q : queries) {
        std::vector<double> total, api;
        Row row{q.id};
        for (int r = 0; r < runs; ++r) {
            auto before = http::stats().elapsed;
            auto t0 = clock::now();
            auto stream = store.filter(q.pattern);
            std::size_t n = 0;
            while (stream.next()) ++n;
            auto wall = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
            auto network = std::chrono::duration<double, std::milli>(http::stats().elapsed - before).count();
            total.push_back(wall);
            api.push_back(std::max(0.0, wall - network));
            row.results = n;
        }
        row.total_ms = median(total);
        row.api_ms = median(api);
        row.overhead_fraction = row.total_ms > 0 ? std::min(1.0, row.api_ms / row.total_ms) : 1.0;
        out.push_back(std::move(row));
    }
    return out;
}

std::string to_csv(const std::vector<Row>& rows) {
    std::string out = "query_id,total_ms,api_ms,overhead_fraction\r\n";
    auto field = [](const std::string& s) {
        if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    };
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, ",%.3f,%.3f,%.6f\r\n", r.total_ms, r.api_ms, r.overhead_fraction);
        out += field(r.id) + buf;
    }
    return out;
}

} // namespace kif::bench
