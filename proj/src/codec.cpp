#include "kif/codec.hpp"

#include <algorithm>
#include <set>

#include "kif/digest.hpp"
#include "kif/errors.hpp"
#include "kif/namespaces.hpp"

namespace kif::codec {

namespace {

using rdf::IriTerm;
using rdf::Term;
using rdf::Triple;

std::string in(std::string_view base, std::string_view local) { return ns::expand(base, local); }

IriTerm iri_term(std::string s) { return IriTerm{std::move(s)}; }

const std::string kRank = in(ns::wikibase, "rank");
const std::string kBestRank = in(ns::wikibase, "BestRank");
const std::string kDerivedFrom = in(ns::prov, "wasDerivedFrom");
const std::string kType{rdf::rdf_type};
const std::string kLabel = in(ns::rdfs, "label");
const std::string kDescription = in(ns::schema, "description");
const std::string kAltLabel = in(ns::skos, "altLabel");
const std::string kAmount = in(ns::wikibase, "quantityAmount");
const std::string kUnit = in(ns::wikibase, "quantityUnit");
const std::string kLower = in(ns::wikibase, "quantityLowerBound");
const std::string kUpper = in(ns::wikibase, "quantityUpperBound");
const std::string kTimeValue = in(ns::wikibase, "timeValue");
const std::string kTimePrecision = in(ns::wikibase, "timePrecision");
const std::string kTimeTimezone = in(ns::wikibase, "timeTimezone");
const std::string kTimeCalendar = in(ns::wikibase, "timeCalendarModel");

std::string rank_iri(Rank r) {
    switch (r) {
    case Rank::preferred: return in(ns::wikibase, "PreferredRank");
    case Rank::deprecated: return in(ns::wikibase, "DeprecatedRank");
    case Rank::normal: break;
    }
    return in(ns::wikibase, "NormalRank");
}

std::optional<Rank> rank_of(const std::string& iri) {
    if (iri == rank_iri(Rank::preferred)) return Rank::preferred;
    if (iri == rank_iri(Rank::normal)) return Rank::normal;
    if (iri == rank_iri(Rank::deprecated)) return Rank::deprecated;
    return std::nullopt;
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

// Local id of a wd: entity, validating the item/property naming rule.
std::string_view entity_id(const Entity& e) {
    auto local = ns::local_in(e.iri().str(), ns::wd);
    if (!local) throw EncodeError("entity outside the wd: namespace: " + e.iri().str());
    if (ns::is_property_id(*local) != e.is_property())
        throw EncodeError("entity kind does not match its id: " + e.iri().str());
    return *local;
}

void check_value(const Value& v) {
    if (const auto* e = std::get_if<Entity>(&v)) {
        entity_id(*e);
    } else if (const auto* i = std::get_if<Iri>(&v)) {
        for (auto base : {ns::wd, ns::wdno, ns::wdgenid})
            if (starts_with(i->str(), base))
                throw EncodeError("IRI value inside a reserved namespace: " + i->str());
    } else if (const auto* q = std::get_if<Quantity>(&v)) {
        if (q->unit()) entity_id(*q->unit());
    } else if (const auto* t = std::get_if<Time>(&v)) {
        if (t->calendar()) entity_id(*t->calendar());
    }
}

std::string value_node(const Value& v) { return in(ns::wdv, content_digest(Object(v))); }

void encode_deep(std::vector<Triple>& out, const std::string& node, const Value& v) {
    auto add = [&](const std::string& p, Term o) { out.push_back({iri_term(node), iri_term(p), std::move(o)}); };
    if (const auto* q = std::get_if<Quantity>(&v)) {
        add(kAmount, rdf::typed(q->amount().str(), rdf::xsd_decimal));
        if (q->unit()) add(kUnit, rdf::iri(q->unit()->iri().str()));
        if (q->lower()) add(kLower, rdf::typed(q->lower()->str(), rdf::xsd_decimal));
        if (q->upper()) add(kUpper, rdf::typed(q->upper()->str(), rdf::xsd_decimal));
    } else if (const auto* t = std::get_if<Time>(&v)) {
        add(kTimeValue, rdf::typed(t->timestamp().iso_string(), rdf::xsd_date_time));
        add(kTimePrecision, rdf::typed(std::to_string(t->precision()), rdf::xsd_integer));
        add(kTimeTimezone, rdf::typed(std::to_string(t->timezone()), rdf::xsd_integer));
        if (t->calendar()) add(kTimeCalendar, rdf::iri(t->calendar()->iri().str()));
    }
}

enum class Slot { statement, qualifier, reference };

// Encodes `snak` attached to `node`. Main snaks use ps:/psv:, qualifiers
// pq:/pqv:, references pr:/prv:.
void encode_snak(std::vector<Triple>& out, const std::string& node, const Snak& snak, Slot slot,
                 const std::string& genid) {
    auto pid = entity_id(snak.property());
    std::string_view simple_base = slot == Slot::statement ? ns::ps : slot == Slot::qualifier ? ns::pq : ns::pr;
    std::string_view deep_base = slot == Slot::statement ? ns::psv : slot == Slot::qualifier ? ns::pqv : ns::prv;
    switch (snak.kind()) {
    case SnakKind::value: {
        const Value& v = *snak.value();
        check_value(v);
        out.push_back({iri_term(node), iri_term(in(simple_base, pid)), simple_value(v)});
        if (is_deep(v)) {
            auto wdv = value_node(v);
            out.push_back({iri_term(node), iri_term(in(deep_base, pid)), rdf::iri(wdv)});
            encode_deep(out, wdv, v);
        }
        break;
    }
    case SnakKind::some_value:
        out.push_back({iri_term(node), iri_term(in(simple_base, pid)), rdf::iri(genid)});
        break;
    case SnakKind::no_value:
        if (slot == Slot::qualifier)
            out.push_back({iri_term(node), iri_term(in(simple_base, pid)), rdf::iri(in(ns::wdno, pid))});
        else
            out.push_back({iri_term(node), iri_term(kType), rdf::iri(in(ns::wdno, pid))});
        break;
    }
}

std::string snak_genid(const Snak& s) { return in(ns::wdgenid, content_digest(Object(s))); }

} // namespace

// ---------------------------------------------------------------------------

rdf::Term simple_value(const Value& v) {
    return std::visit(
        [](const auto& x) -> rdf::Term {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Entity>) return rdf::iri(x.iri().str());
            else if constexpr (std::is_same_v<T, Iri>) return rdf::iri(x.str());
            else if constexpr (std::is_same_v<T, Text>) return rdf::lang(x.content(), x.language());
            else if constexpr (std::is_same_v<T, String>) return rdf::plain(x.content());
            else if constexpr (std::is_same_v<T, Quantity>) return rdf::typed(x.amount().str(), rdf::xsd_decimal);
            else return rdf::typed(x.timestamp().iso_string(), rdf::xsd_date_time);
        },
        v);
}

std::optional<Entity> entity_for(std::string_view iri) {
    auto local = ns::local_in(iri, ns::wd);
    if (!local || local->empty()) return std::nullopt;
    Iri i{std::string(iri)};
    return ns::is_property_id(*local) ? Entity::property(std::move(i)) : Entity::item(std::move(i));
}

std::optional<Value> lift(const rdf::Term& t, std::string* diagnostic) {
    auto fail = [&](const std::string& msg) -> std::optional<Value> {
        if (diagnostic) *diagnostic = msg;
        return std::nullopt;
    };
    try {
        if (const auto* i = std::get_if<rdf::IriTerm>(&t)) {
            if (auto e = entity_for(i->value)) return Value(*e);
            return Value(Iri(i->value));
        }
        const auto& l = std::get<rdf::Literal>(t);
        if (!l.language.empty()) return Value(Text(l.lexical, l.language));
        if (l.datatype == rdf::xsd_string) return Value(String(l.lexical));
        if (l.datatype == rdf::xsd_decimal || l.datatype == rdf::xsd_integer)
            return Value(Quantity(Decimal::parse(l.lexical)));
        if (l.datatype == rdf::xsd_date_time) {
            auto ts = Timestamp::parse(l.lexical);
            return Value(Time(ts, ts.has_time_of_day() ? precision::second : precision::day, 0));
        }
        return fail("unsupported literal datatype <" + l.datatype + ">");
    } catch (const InvalidValue& e) {
        return fail(std::string("invalid literal: ") + e.what());
    }
}

std::string statement_node(const Statement& s, const AnnotationRecord& a) {
    return in(ns::wds, content_digest(Object(AnnotatedStatement{s, AnnotationRecordSet{a}})));
}

std::string some_value_node(const Statement& s) { return in(ns::wdgenid, content_digest(Object(s))); }

rdf::Triple truthy_triple(const Statement& s) {
    auto subject = iri_term(s.subject.iri().str());
    auto pid = entity_id(s.snak.property());
    switch (s.snak.kind()) {
    case SnakKind::value: return {subject, iri_term(in(ns::wdt, pid)), simple_value(*s.snak.value())};
    case SnakKind::some_value: return {subject, iri_term(in(ns::wdt, pid)), rdf::iri(some_value_node(s))};
    case SnakKind::no_value: break;
    }
    return {subject, iri_term(kType), rdf::iri(in(ns::wdno, pid))};
}

std::vector<rdf::Triple> encode(const EncodedStatement& es) {
    const Statement& st = es.statement;
    entity_id(st.subject);
    auto pid = entity_id(st.snak.property());
    std::vector<Triple> out;
    if (es.annotation.rank != Rank::deprecated) out.push_back(truthy_triple(st));
    auto node = statement_node(st, es.annotation);
    out.push_back({iri_term(st.subject.iri().str()), iri_term(in(ns::p, pid)), rdf::iri(node)});
    encode_snak(out, node, st.snak, Slot::statement, some_value_node(st));
    out.push_back({iri_term(node), iri_term(kRank), rdf::iri(rank_iri(es.annotation.rank))});
    if (es.best) out.push_back({iri_term(node), iri_term(kType), rdf::iri(kBestRank)});
    for (const auto& q : es.annotation.qualifiers) encode_snak(out, node, q, Slot::qualifier, snak_genid(q));
    for (const auto& r : es.annotation.references) {
        auto ref = in(ns::wdref, content_digest(Object(r)));
        out.push_back({iri_term(node), iri_term(kDerivedFrom), rdf::iri(ref)});
        for (const auto& s : r.snaks()) encode_snak(out, ref, s, Slot::reference, snak_genid(s));
    }
    return out;
}

std::vector<EncodedStatement> rank_batch(const std::vector<AnnotatedStatement>& data) {
    std::map<std::pair<Entity, Entity>, Rank> top;
    for (const auto& a : data)
        for (const auto& r : a.annotations) {
            auto key = std::make_pair(a.statement.subject, a.statement.snak.property());
            auto [it, inserted] = top.emplace(key, r.rank);
            if (!inserted) it->second = std::max(it->second, r.rank);
        }
    std::vector<EncodedStatement> out;
    for (const auto& a : data)
        for (const auto& r : a.annotations) {
            Rank best = top.at({a.statement.subject, a.statement.snak.property()});
            out.push_back({a.statement, r, r.rank != Rank::deprecated && r.rank == best});
        }
    return out;
}

std::vector<rdf::Triple> encode_descriptor(const Entity& e, const Descriptor& d) {
    entity_id(e);
    std::vector<Triple> out;
    auto s = iri_term(e.iri().str());
    if (d.label) out.push_back({s, iri_term(kLabel), rdf::lang(d.label->content(), d.label->language())});
    if (d.description)
        out.push_back({s, iri_term(kDescription), rdf::lang(d.description->content(), d.description->language())});
    for (const auto& a : d.aliases) out.push_back({s, iri_term(kAltLabel), rdf::lang(a.content(), a.language())});
    return out;
}

rdf::Graph encode_dataset(const std::vector<AnnotatedStatement>& data, const std::vector<EntityDescriptor>& descriptors) {
    rdf::Graph g;
    for (const auto& es : rank_batch(data)) g.insert_all(encode(es));
    for (const auto& ed : descriptors) g.insert_all(encode_descriptor(ed.entity, ed.descriptor));
    return g;
}

rdf::Graph truthy_subgraph(const rdf::Graph& g) {
    rdf::Graph out;
    for (const auto& t : g.triples()) {
        bool truthy = ns::local_in(t.predicate.value, ns::wdt).has_value();
        bool no_value = t.predicate.value == kType && entity_for(t.subject.value) && rdf::is_iri(t.object) &&
                        ns::local_in(rdf::iri_value(t.object), ns::wdno).has_value();
        if (truthy || no_value) out.insert(t);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Decoding

namespace {

class Decoder {
public:
    explicit Decoder(const rdf::Graph& g) : g_(g) {}

    Decoded run() {
        decode_statements();
        decode_truthy();
        decode_descriptors();
        // Sort statements together with their nodes.
        std::vector<std::size_t> order(out_.statements.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (out_.statements[a] != out_.statements[b]) return out_.statements[a] < out_.statements[b];
            return out_.nodes[a] < out_.nodes[b];
        });
        Decoded sorted;
        for (auto i : order) {
            sorted.statements.push_back(std::move(out_.statements[i]));
            sorted.nodes.push_back(std::move(out_.nodes[i]));
        }
        sorted.descriptors = std::move(out_.descriptors);
        sorted.diagnostics = std::move(out_.diagnostics);
        return sorted;
    }

private:
    struct Po {
        std::string predicate;
        rdf::Term object;
    };

    std::vector<Po> outgoing(const std::string& node) const {
        std::vector<Po> out;
        auto id = g_.find(rdf::iri(node));
        if (!id) return out;
        g_.match(*id, std::nullopt, std::nullopt, [&](const rdf::Graph::Ids& ids) {
            out.push_back({rdf::iri_value(g_.term(ids.p)), g_.term(ids.o)});
        });
        return out;
    }

    void diag(std::string msg) { out_.diagnostics.push_back(std::move(msg)); }

    std::optional<Value> deep_value(const std::string& node) {
        std::map<std::string, rdf::Term> fields;
        for (auto& po : outgoing(node)) fields.emplace(po.predicate, po.object);
        auto literal = [&](const std::string& key) -> const rdf::Literal* {
            auto it = fields.find(key);
            return it == fields.end() ? nullptr : std::get_if<rdf::Literal>(&it->second);
        };
        auto entity = [&](const std::string& key) -> std::optional<Entity> {
            auto it = fields.find(key);
            if (it == fields.end() || !rdf::is_iri(it->second)) return std::nullopt;
            return entity_for(rdf::iri_value(it->second));
        };
        try {
            if (const auto* amount = literal(kAmount)) {
                std::optional<Decimal> lower, upper;
                if (const auto* l = literal(kLower)) lower = Decimal::parse(l->lexical);
                if (const auto* u = literal(kUpper)) upper = Decimal::parse(u->lexical);
                return Value(Quantity(Decimal::parse(amount->lexical), entity(kUnit), lower, upper));
            }
            if (const auto* tv = literal(kTimeValue)) {
                const auto* prec = literal(kTimePrecision);
                const auto* tz = literal(kTimeTimezone);
                return Value(Time(Timestamp::parse(tv->lexical), prec ? std::stoi(prec->lexical) : precision::day,
                                  tz ? std::stoi(tz->lexical) : 0, entity(kTimeCalendar)));
            }
        } catch (const std::exception& e) {
            diag("malformed value node " + node + ": " + e.what());
            return std::nullopt;
        }
        diag("value node " + node + " has neither quantity nor time fields");
        return std::nullopt;
    }

    // Snaks attached to `node` through one simple/deep predicate family.
    std::vector<Snak> snaks_of(const std::string& node, const std::vector<Po>& pos, std::string_view simple_base,
                               std::string_view deep_base, bool novalue_by_type) {
        std::map<std::string, std::vector<rdf::Term>> simple, deep;
        std::vector<Snak> out;
        for (const auto& po : pos) {
            if (auto pid = ns::local_in(po.predicate, simple_base)) {
                simple[std::string(*pid)].push_back(po.object);
            } else if (auto dpid = ns::local_in(po.predicate, deep_base)) {
                deep[std::string(*dpid)].push_back(po.object);
            } else if (novalue_by_type && po.predicate == kType && rdf::is_iri(po.object)) {
                if (auto nv = ns::local_in(rdf::iri_value(po.object), ns::wdno))
                    if (auto p = property(*nv)) out.push_back(Snak::no_value(*p));
            }
        }
        for (auto& [pid, objects] : deep) {
            auto p = property(pid);
            if (!p) continue;
            for (const auto& o : objects) {
                if (!rdf::is_iri(o)) {
                    diag("deep value of " + node + " is a literal");
                    continue;
                }
                if (auto v = deep_value(rdf::iri_value(o))) out.push_back(Snak::value_snak(*p, *v));
            }
        }
        for (auto& [pid, objects] : simple) {
            auto p = property(pid);
            if (!p) continue;
            std::set<rdf::Term> covered;
            for (const auto& s : out)
                if (s.property() == *p && s.kind() == SnakKind::value && is_deep(*s.value()))
                    covered.insert(simple_value(*s.value()));
            for (const auto& o : objects) {
                if (auto snak = simple_snak(*p, o, node, covered)) out.push_back(*snak);
            }
        }
        return out;
    }

    std::optional<Entity> property(std::string_view pid) {
        if (!ns::is_property_id(pid) || !ns::is_safe_local(pid)) {
            diag("not a property id: " + std::string(pid));
            return std::nullopt;
        }
        return Entity::property(Iri(in(ns::wd, pid)));
    }

    std::optional<Snak> simple_snak(const Entity& p, const rdf::Term& o, const std::string& node,
                                    const std::set<rdf::Term>& covered) {
        if (rdf::is_iri(o)) {
            const auto& v = rdf::iri_value(o);
            if (starts_with(v, ns::wdgenid)) return Snak::some_value(p);
            if (auto nv = ns::local_in(v, ns::wdno); nv && in(ns::wd, *nv) == p.iri().str())
                return Snak::no_value(p);
        }
        std::string why;
        auto v = lift(o, &why);
        if (!v) {
            diag("skipping value of " + node + ": " + why);
            return std::nullopt;
        }
        // A simple value shadowed by a deep value of the same snak.
        if (is_deep(*v) && covered.count(o)) return std::nullopt;
        return Snak::value_snak(p, *v);
    }

    void decode_statements() {
        for (const auto& t : g_.triples()) {
            auto pid = ns::local_in(t.predicate.value, ns::p);
            if (!pid || !rdf::is_iri(t.object)) continue;
            auto subject = entity_for(t.subject.value);
            if (!subject) continue;
            auto property_entity = property(*pid);
            if (!property_entity) continue;
            const auto& node = rdf::iri_value(t.object);
            auto pos = outgoing(node);

            // Main snak.
            std::optional<Snak> main;
            std::vector<Po> main_pos;
            bool no_value = false;
            for (const auto& po : pos) {
                if (ns::local_in(po.predicate, ns::ps) == *pid || ns::local_in(po.predicate, ns::psv) == *pid)
                    main_pos.push_back(po);
                if (po.predicate == kType && rdf::is_iri(po.object) &&
                    ns::local_in(rdf::iri_value(po.object), ns::wdno) == *pid)
                    no_value = true;
            }
            auto candidates = snaks_of(node, main_pos, ns::ps, ns::psv, false);
            if (no_value) candidates.push_back(Snak::no_value(*property_entity));
            if (candidates.empty()) {
                diag("statement node " + node + " linked by " + t.predicate.value + " has no ps: value");
                continue;
            }
            if (candidates.size() > 1) {
                diag("statement node " + node + " has several main values");
                continue;
            }
            main = candidates.front();

            EncodedStatement es{Statement{*subject, *main}, {}, false};
            for (const auto& po : pos) {
                if (po.predicate == kRank && rdf::is_iri(po.object)) {
                    if (auto r = rank_of(rdf::iri_value(po.object))) es.annotation.rank = *r;
                } else if (po.predicate == kType && po.object == rdf::iri(kBestRank)) {
                    es.best = true;
                }
            }
            for (auto& q : snaks_of(node, pos, ns::pq, ns::pqv, false)) es.annotation.qualifiers.insert(q);
            for (const auto& po : pos) {
                if (po.predicate != kDerivedFrom || !rdf::is_iri(po.object)) continue;
                const auto& ref = rdf::iri_value(po.object);
                auto snaks = snaks_of(ref, outgoing(ref), ns::pr, ns::prv, true);
                if (snaks.empty()) {
                    diag("empty reference node " + ref);
                    continue;
                }
                es.annotation.references.insert(ReferenceRecord(SnakSet(std::move(snaks))));
            }
            if (es.annotation.rank != Rank::deprecated) reified_truthy_.insert(truthy_key(es.statement));
            out_.statements.push_back(std::move(es));
            out_.nodes.push_back(node);
        }
    }

    std::string truthy_key(const Statement& s) {
        try {
            return rdf::to_ntriples(truthy_triple(s));
        } catch (const EncodeError&) {
            return {};
        }
    }

    void decode_truthy() {
        for (const auto& t : g_.triples()) {
            auto subject = entity_for(t.subject.value);
            if (!subject) continue;
            std::optional<Snak> snak;
            if (auto pid = ns::local_in(t.predicate.value, ns::wdt)) {
                auto p = property(*pid);
                if (!p) continue;
                snak = simple_snak(*p, t.object, t.subject.value, {});
            } else if (t.predicate.value == kType && rdf::is_iri(t.object)) {
                auto nv = ns::local_in(rdf::iri_value(t.object), ns::wdno);
                if (!nv) continue;
                auto p = property(*nv);
                if (!p) continue;
                snak = Snak::no_value(*p);
            }
            if (!snak) continue;
            if (reified_truthy_.count(rdf::to_ntriples(t))) continue;
            out_.statements.push_back({Statement{*subject, *snak}, AnnotationRecord{}, true});
            out_.nodes.emplace_back();
        }
    }

    void decode_descriptors() {
        auto collect = [&](const std::string& predicate, auto&& apply) {
            auto id = g_.find(rdf::iri(predicate));
            if (!id) return;
            g_.match(std::nullopt, *id, std::nullopt, [&](const rdf::Graph::Ids& ids) {
                auto e = entity_for(rdf::iri_value(g_.term(ids.s)));
                const auto* l = std::get_if<rdf::Literal>(&g_.term(ids.o));
                if (!e || !l || l->language.empty()) return;
                apply(out_.descriptors[*e], Text(l->lexical, l->language));
            });
        };
        auto keep_min = [](std::optional<Text>& slot, Text t) {
            if (!slot || t < *slot) slot = std::move(t);
        };
        collect(kLabel, [&](Descriptor& d, Text t) { keep_min(d.label, std::move(t)); });
        collect(kDescription, [&](Descriptor& d, Text t) { keep_min(d.description, std::move(t)); });
        collect(kAltLabel, [&](Descriptor& d, Text t) { d.aliases.insert(std::move(t)); });
    }

    const rdf::Graph& g_;
    Decoded out_;
    std::set<std::string> reified_truthy_;
};

} // namespace

Decoded decode(const rdf::Graph& g) { return Decoder(g).run(); }

} // namespace kif::codec
