#include "kif/mapper.hpp"

#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kif/codec.hpp"
#include "kif/errors.hpp"
#include "kif/namespaces.hpp"

namespace kif::mapper {

namespace {

constexpr std::string_view kCapture = "{n}";

std::pair<std::string_view, std::string_view> split_template(std::string_view t) {
    auto at = t.find(kCapture);
    return {t.substr(0, at), t.substr(at + kCapture.size())};
}

std::optional<std::string> rewrite(std::string_view iri, std::string_view from, std::string_view to) {
    auto [prefix, suffix] = split_template(from);
    if (iri.size() <= prefix.size() + suffix.size() || !iri.starts_with(prefix) || !iri.ends_with(suffix))
        return std::nullopt;
    auto capture = iri.substr(prefix.size(), iri.size() - prefix.size() - suffix.size());
    if (capture.find_first_of("/#?") != std::string_view::npos) return std::nullopt;
    auto [to_prefix, to_suffix] = split_template(to);
    return std::string(to_prefix) + std::string(capture) + std::string(to_suffix);
}

std::size_t occurrences(std::string_view s, std::string_view needle) {
    std::size_t n = 0;
    for (auto at = s.find(needle); at != std::string_view::npos; at = s.find(needle, at + needle.size())) ++n;
    return n;
}

// Full IRI from a prefixed name or an absolute IRI.
std::string expand_iri(const std::string& s) {
    auto colon = s.find(':');
    if (colon != std::string::npos && s.compare(colon, 3, "://") != 0) {
        if (auto base = ns::base_for(s.substr(0, colon))) return ns::expand(*base, s.substr(colon + 1));
    }
    if (!rdf::is_valid_iri(s)) throw InvalidValue("not an IRI: '" + s + "'");
    return s;
}

Entity target_entity(const std::string& iri) {
    if (auto e = codec::entity_for(iri)) return *e;
    return Entity::item(iri);
}

bool has_value(const rdf::Row& row, std::optional<std::size_t> i) { return i && row[*i].has_value(); }

} // namespace

// ---------------------------------------------------------------------------
// Rules and specs

EntityRule::EntityRule(std::string source, std::string target) : source_(std::move(source)), target_(std::move(target)) {
    if (occurrences(source_, kCapture) != 1 || occurrences(target_, kCapture) != 1)
        throw InvalidValue("entity rule templates need exactly one {n}: " + source_ + " -> " + target_);
}

std::optional<std::string> EntityRule::to_target(std::string_view source_iri) const {
    return rewrite(source_iri, source_, target_);
}

std::optional<std::string> EntityRule::to_source(std::string_view target_iri) const {
    return rewrite(target_iri, target_, source_);
}

void MappingSpec::validate() const {
    std::set<Entity> seen;
    for (const auto& r : property_rules) {
        if (!r.property.is_property()) throw InvalidValue("mapped target is not a property: " + r.property.iri().str());
        if (!seen.insert(r.property).second)
            throw InvalidValue("property mapped twice: " + r.property.iri().str());
        if (r.codec.kind == ValueCodec::Kind::decimal_quantity && !r.codec.unit)
            throw InvalidValue("decimal-quantity codec without a unit for " + r.property.iri().str());
        if (r.codec.kind == ValueCodec::Kind::text && r.codec.language.empty())
            throw InvalidValue("text codec without a language for " + r.property.iri().str());
    }
}

const PropertyRule* MappingSpec::rule_for(const Entity& property) const {
    for (const auto& r : property_rules)
        if (r.property == property) return &r;
    return nullptr;
}

std::optional<std::string> MappingSpec::to_target(std::string_view source_iri) const {
    for (const auto& r : entity_rules)
        if (auto t = r.to_target(source_iri)) return t;
    return std::nullopt;
}

std::optional<std::string> MappingSpec::to_source(std::string_view target_iri) const {
    for (const auto& r : entity_rules)
        if (auto s = r.to_source(target_iri)) return s;
    return std::nullopt;
}

MappingSpec MappingSpec::from_json(std::string_view text) {
    using json = nlohmann::json;
    MappingSpec spec;
    try {
        auto doc = json::parse(text);
        spec.name = doc.value("name", "");
        for (const auto& r : doc.value("entity_rules", json::array()))
            spec.entity_rules.emplace_back(r.at("source").get<std::string>(), r.at("target").get<std::string>());
        for (const auto& r : doc.value("property_rules", json::array())) {
            PropertyRule rule{Entity::property(expand_iri(r.at("property").get<std::string>())),
                              expand_iri(r.at("source").get<std::string>()), {}};
            auto codec = r.value("codec", "string");
            if (codec == "string") rule.codec.kind = ValueCodec::Kind::string;
            else if (codec == "iri") rule.codec.kind = ValueCodec::Kind::iri;
            else if (codec == "item") rule.codec.kind = ValueCodec::Kind::item;
            else if (codec == "decimal-quantity") rule.codec.kind = ValueCodec::Kind::decimal_quantity;
            else if (codec == "text") rule.codec.kind = ValueCodec::Kind::text;
            else throw InvalidValue("unknown codec '" + codec + "'");
            if (r.contains("unit")) rule.codec.unit = target_entity(expand_iri(r.at("unit").get<std::string>()));
            if (r.contains("language")) rule.codec.language = Text("", r.at("language").get<std::string>()).language();
            spec.property_rules.push_back(std::move(rule));
        }
        if (doc.contains("label_predicate")) spec.label_predicate = expand_iri(doc.at("label_predicate").get<std::string>());
    } catch (const json::exception& e) {
        throw InvalidValue(std::string("malformed mapping spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

MappingSpec MappingSpec::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open mapping spec " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

// ---------------------------------------------------------------------------
// Values

std::optional<rdf::Term> encode_value(const MappingSpec& spec, const ValueCodec& codec, const Value& v) {
    switch (codec.kind) {
    case ValueCodec::Kind::string:
        if (const auto* s = std::get_if<String>(&v)) return rdf::plain(s->content());
        break;
    case ValueCodec::Kind::iri:
        if (const auto* i = std::get_if<Iri>(&v)) return rdf::iri(i->str());
        break;
    case ValueCodec::Kind::item:
        if (const auto* e = std::get_if<Entity>(&v); e && e->is_item())
            if (auto s = spec.to_source(e->iri().str())) return rdf::iri(*s);
        break;
    case ValueCodec::Kind::decimal_quantity:
        if (const auto* q = std::get_if<Quantity>(&v); q && q->unit() == codec.unit && !q->lower() && !q->upper())
            return rdf::typed(q->amount().str(), rdf::xsd_decimal);
        break;
    case ValueCodec::Kind::text:
        if (const auto* t = std::get_if<Text>(&v); t && t->language() == codec.language)
            return rdf::lang(t->content(), t->language());
        break;
    }
    return std::nullopt;
}

std::optional<Value> decode_value(const MappingSpec& spec, const ValueCodec& codec, const rdf::Term& t,
                                  std::string* diagnostic) {
    auto fail = [&](std::string msg) -> std::optional<Value> {
        if (diagnostic) *diagnostic = std::move(msg) + ": " + rdf::to_ntriples(t);
        return std::nullopt;
    };
    const auto* lit = std::get_if<rdf::Literal>(&t);
    switch (codec.kind) {
    case ValueCodec::Kind::string:
        if (lit && lit->language.empty() && lit->datatype == rdf::xsd_string) return Value(String(lit->lexical));
        return fail("expected a plain string");
    case ValueCodec::Kind::iri:
        if (!lit) return Value(Iri(rdf::iri_value(t)));
        return fail("expected an IRI");
    case ValueCodec::Kind::item:
        if (!lit) {
            if (auto target = spec.to_target(rdf::iri_value(t))) return Value(target_entity(*target));
            return fail("IRI matches no entity rule");
        }
        return fail("expected an IRI");
    case ValueCodec::Kind::decimal_quantity:
        if (lit && lit->language.empty())
            if (auto d = Decimal::try_parse(lit->lexical)) return Value(Quantity(*d, codec.unit));
        return fail("expected a decimal");
    case ValueCodec::Kind::text:
        if (lit && lit->language == codec.language) return Value(Text(lit->lexical, lit->language));
        return fail("expected text tagged '" + codec.language + "'");
    }
    return fail("unknown codec");
}

// ---------------------------------------------------------------------------
// Translation

std::optional<rdf::SelectQuery> translate_pattern(const MappingSpec& spec, const FilterPattern& p) {
    if (!p.snak_kinds().has(SnakKind::value)) return std::nullopt;

    std::vector<const PropertyRule*> rules;
    if (p.property()) {
        const Entity* e = p.property()->as_entity();
        const PropertyRule* r = e ? spec.rule_for(*e) : nullptr;
        if (!r) return std::nullopt;
        rules.push_back(r);
    } else {
        for (const auto& r : spec.property_rules) rules.push_back(&r);
    }

    rdf::SelectQuery q;
    q.projection = {"s", "p", "v"};
    q.distinct = true;
    q.where.push_back({rdf::Variable{"s"}, rdf::Variable{"p"}, rdf::Variable{"v"}});

    // Constrains `x` to carry every snak, in source vocabulary.
    auto fingerprint = [&](const std::string& var, const SnakSet& snaks) {
        for (const auto& snak : snaks) {
            const PropertyRule* r = spec.rule_for(snak.property());
            if (!r || !snak.value()) return false;
            auto o = encode_value(spec, r->codec, *snak.value());
            if (!o) return false;
            q.where.push_back({rdf::Variable{var}, rdf::iri(r->source), *o});
        }
        return true;
    };

    std::optional<rdf::Term> subject;
    if (p.subject()) {
        if (const Entity* e = p.subject()->as_entity()) {
            auto s = spec.to_source(e->iri().str());
            if (!s) return std::nullopt;
            subject = rdf::iri(*s);
        } else if (!fingerprint("s", p.subject()->required_snaks())) {
            return std::nullopt;
        }
    }

    const Value* constant = p.value() ? p.value()->as_constant() : nullptr;
    if (p.value() && !constant) {
        std::erase_if(rules, [](const PropertyRule* r) { return r->codec.kind != ValueCodec::Kind::item; });
        if (!fingerprint("v", p.value()->required_snaks())) return std::nullopt;
    }

    rdf::ValuesBlock values;
    if (subject) values.variables.push_back("s");
    values.variables.push_back("p");
    if (constant) values.variables.push_back("v");
    for (const PropertyRule* r : rules) {
        rdf::Row row;
        if (subject) row.push_back(*subject);
        row.push_back(rdf::iri(r->source));
        if (constant) {
            auto o = encode_value(spec, r->codec, *constant);
            if (!o) continue;
            // Decimals are compared after decoding; lexical forms vary.
            if (r->codec.kind == ValueCodec::Kind::decimal_quantity) row.push_back(std::nullopt);
            else row.push_back(*o);
        }
        values.rows.push_back(std::move(row));
    }
    if (values.rows.empty()) return std::nullopt;
    q.values = std::move(values);
    return q;
}

Translated translate_results(const MappingSpec& spec, const rdf::ResultSet& rows) {
    Translated out;
    std::optional<std::size_t> si, pi, vi;
    for (std::size_t i = 0; i < rows.variables.size(); ++i) {
        if (rows.variables[i] == "s") si = i;
        if (rows.variables[i] == "p") pi = i;
        if (rows.variables[i] == "v") vi = i;
    }
    for (const auto& row : rows.rows) {
        if (!has_value(row, si) || !has_value(row, pi) || !has_value(row, vi) || !rdf::is_iri(*row[*si]) ||
            !rdf::is_iri(*row[*pi]))
            continue;
        const auto& source_subject = rdf::iri_value(*row[*si]);
        auto target = spec.to_target(source_subject);
        if (!target) {
            out.diagnostics.push_back("subject matches no entity rule: " + source_subject);
            continue;
        }
        Entity subject = target_entity(*target);
        const auto& predicate = rdf::iri_value(*row[*pi]);
        for (const auto& r : spec.property_rules) {
            if (r.source != predicate) continue;
            std::string why;
            auto v = decode_value(spec, r.codec, *row[*vi], &why);
            if (!v) {
                out.diagnostics.push_back("skipping " + source_subject + " " + predicate + ": " + why);
                continue;
            }
            out.statements.push_back(Statement{subject, Snak::value_snak(r.property, *v)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Store

namespace {

class MapperStore final : public Store, public std::enable_shared_from_this<MapperStore> {
public:
    MapperStore(ExecutorPtr source, MappingSpec spec, StoreOptions options)
        : Store(std::move(options)), source_(std::move(source)), spec_(std::move(spec)) {
        spec_.validate();
    }

    StatementStream filter(const FilterPattern& pattern, std::optional<std::size_t> limit) const override {
        pattern.check_supported();
        auto q = translate_pattern(spec_, pattern);
        if (!q || (limit && *limit == 0)) return {};
        struct State {
            std::size_t offset = 0;
            bool exhausted = false;
            std::size_t yielded = 0;
            std::deque<Statement> buffer;
            std::set<Statement> seen;
        };
        auto st = std::make_shared<State>();
        auto self = shared_from_this();
        return StatementStream([self, st, pattern, limit, query = *q]() mutable -> std::optional<Statement> {
            if (limit && st->yielded >= *limit) return std::nullopt;
            while (st->buffer.empty() && !st->exhausted) {
                query.limit = self->options().page_size;
                query.offset = st->offset == 0 ? std::nullopt : std::optional<std::size_t>(st->offset);
                auto page = self->source_->select(query);
                st->offset += page.rows.size();
                if (page.rows.size() < self->options().page_size) st->exhausted = true;
                for (auto& s : translate_results(self->spec_, page).statements)
                    if (accepts(s, pattern) && st->seen.insert(s).second) st->buffer.push_back(std::move(s));
            }
            if (st->buffer.empty()) return std::nullopt;
            Statement s = std::move(st->buffer.front());
            st->buffer.pop_front();
            ++st->yielded;
            return s;
        });
    }

    std::vector<AnnotationsResult> get_annotations(const std::vector<Statement>& statements) const override {
        std::vector<AnnotationsResult> out;
        for (const auto& s : statements) {
            AnnotationRecordSet records;
            if (contains(s)) records = with_extra_references(AnnotationRecordSet{AnnotationRecord{}});
            out.emplace_back(s, std::move(records));
        }
        return out;
    }

    std::vector<DescriptorResult> get_descriptor(const std::vector<Entity>& entities,
                                                 const std::string& language) const override {
        std::map<std::string, std::vector<Descriptor>> labels;
        if (spec_.label_predicate) {
            rdf::SelectQuery q;
            q.projection = {"e", "o"};
            q.where.push_back({rdf::Variable{"e"}, rdf::iri(*spec_.label_predicate), rdf::Variable{"o"}});
            rdf::ValuesBlock v{{"e"}, {}};
            for (const auto& e : entities)
                if (auto s = spec_.to_source(e.iri().str())) v.rows.push_back({rdf::iri(*s)});
            q.values = std::move(v);
            if (!q.values->rows.empty()) {
                for (const auto& row : source_->select(q).rows) {
                    if (!row[0] || !row[1]) continue;
                    const auto* lit = std::get_if<rdf::Literal>(&*row[1]);
                    auto target = spec_.to_target(rdf::iri_value(*row[0]));
                    if (!lit || lit->language.empty() || !target) continue;
                    labels[*target].push_back(Descriptor{Text(lit->lexical, lit->language), std::nullopt, {}});
                }
            }
        }
        std::vector<DescriptorResult> out;
        for (const auto& e : entities) {
            auto it = labels.find(e.iri().str());
            out.emplace_back(e, it == labels.end() ? Descriptor{} : restrict_language(it->second, language));
        }
        return out;
    }

private:
    // Checks the source query leaves to the caller: constants compared after
    // decoding.
    static bool accepts(const Statement& s, const FilterPattern& p) {
        if (p.subject())
            if (const Entity* e = p.subject()->as_entity(); e && *e != s.subject) return false;
        if (p.property())
            if (const Entity* e = p.property()->as_entity(); e && *e != s.snak.property()) return false;
        if (p.value()) {
            const Value& v = *s.snak.value();
            if (const Value* c = p.value()->as_constant()) return v == *c;
            return std::holds_alternative<Entity>(v);
        }
        return true;
    }

    ExecutorPtr source_;
    MappingSpec spec_;
};

} // namespace

StorePtr mapper_store(ExecutorPtr source, MappingSpec spec, StoreOptions options) {
    if (options.cache_enabled) source = caching_executor(std::move(source));
    return std::make_shared<MapperStore>(std::move(source), std::move(spec), std::move(options));
}

} // namespace kif::mapper
