#include "kif/store.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "kif/errors.hpp"
#include "kif/sexpr.hpp"

namespace kif {

StoreOptions StoreOptions::from_environment() {
    StoreOptions o;
    if (const char* env = std::getenv("KIF_PAGE_SIZE"); env && *env) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (*end != '\0' || n < 1) throw Error(std::string("KIF_PAGE_SIZE must be a positive integer, got '") + env + "'");
        o.page_size = static_cast<std::size_t>(n);
    }
    return o;
}

Store::Store(StoreOptions options) : options_(std::move(options)) {
    if (options_.page_size < 1) throw Error("page size must be at least 1");
}

std::size_t Store::count(const FilterPattern& pattern) const {
    auto s = filter(pattern);
    std::size_t n = 0;
    while (s.next()) ++n;
    return n;
}

bool Store::contains(const Statement& statement) const {
    auto s = filter(exact_pattern(statement));
    while (auto x = s.next())
        if (*x == statement) return true;
    return false;
}

AnnotationRecordSet Store::with_extra_references(const AnnotationRecordSet& records) const {
    if (options_.extra_references.empty()) return records;
    std::vector<AnnotationRecord> out;
    for (auto r : records) {
        for (const auto& ref : options_.extra_references) r.references.insert(ref);
        out.push_back(std::move(r));
    }
    return AnnotationRecordSet(std::move(out));
}

FilterPattern exact_pattern(const Statement& s) {
    std::optional<Fingerprint> value;
    if (s.snak.kind() == SnakKind::value) value = Fingerprint::constant(*s.snak.value());
    return FilterPattern(Fingerprint::entity(s.subject), Fingerprint::entity(s.snak.property()), value,
                         SnakMask::only(s.snak.kind()));
}

namespace {

std::string lowercase(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

} // namespace

Descriptor restrict_language(const std::vector<Descriptor>& ds, const std::string& language) {
    auto lang = lowercase(language);
    Descriptor out;
    std::vector<Text> aliases;
    auto keep_min = [&](std::optional<Text>& slot, const std::optional<Text>& t) {
        if (t && t->language() == lang && (!slot || *t < *slot)) slot = t;
    };
    for (const auto& d : ds) {
        keep_min(out.label, d.label);
        keep_min(out.description, d.description);
        for (const auto& a : d.aliases)
            if (a.language() == lang) aliases.push_back(a);
    }
    out.aliases = TextSet(std::move(aliases));
    return out;
}

// ---------------------------------------------------------------------------
// Fixtures

Fixture normalize(Fixture f) {
    std::map<Statement, std::vector<AnnotationRecord>> merged;
    std::vector<Statement> order;
    for (auto& a : f.statements) {
        auto [it, inserted] = merged.try_emplace(a.statement);
        if (inserted) order.push_back(a.statement);
        if (a.annotations.empty()) it->second.push_back(AnnotationRecord{});
        for (const auto& r : a.annotations) it->second.push_back(r);
    }
    Fixture out;
    for (const auto& s : order) {
        out.statements.push_back({s, AnnotationRecordSet(std::move(merged[s]))});
    }
    out.descriptors = std::move(f.descriptors);
    return out;
}

Fixture parse_fixture(std::string_view text) {
    Fixture f;
    for (auto& obj : sexpr::parse_all(text)) {
        if (auto* s = std::get_if<Statement>(&obj)) f.statements.push_back({*s, {}});
        else if (auto* a = std::get_if<AnnotatedStatement>(&obj)) f.statements.push_back(*a);
        else if (auto* d = std::get_if<EntityDescriptor>(&obj)) f.descriptors.push_back(*d);
        else throw InvalidValue("fixture files hold Statement, AnnotatedStatement and EntityDescriptor forms only");
    }
    return normalize(std::move(f));
}

Fixture load_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open fixture " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_fixture(buf.str());
}

// ---------------------------------------------------------------------------
// Reference semantics

StatementIndex::StatementIndex(const std::vector<AnnotatedStatement>& data) {
    for (const auto& a : data) sorted_.push_back(a.statement);
    std::sort(sorted_.begin(), sorted_.end());
    sorted_.erase(std::unique(sorted_.begin(), sorted_.end()), sorted_.end());
}

bool StatementIndex::has(const Entity& subject, const Snak& snak) const {
    return std::binary_search(sorted_.begin(), sorted_.end(), Statement{subject, snak});
}

bool StatementIndex::satisfies(const Entity& e, const Fingerprint& fp) const {
    if (const Value* c = fp.as_constant()) return *c == Value(e);
    for (const auto& snak : fp.required_snaks())
        if (!has(e, snak)) return false;
    return true;
}

bool StatementIndex::value_matches(const Snak& snak, const Fingerprint& fp) const {
    if (snak.kind() != SnakKind::value) return false;
    const Value& v = *snak.value();
    if (const Value* c = fp.as_constant()) return v == *c;
    const auto* e = std::get_if<Entity>(&v);
    return e && satisfies(*e, fp);
}

bool StatementIndex::matches(const Statement& s, const FilterPattern& p) const {
    if (!p.snak_kinds().has(s.snak.kind())) return false;
    if (p.subject() && !satisfies(s.subject, *p.subject())) return false;
    if (p.property()) {
        const Entity* e = p.property()->as_entity();
        if (!e || *e != s.snak.property()) return false;
    }
    if (p.value() && !value_matches(s.snak, *p.value())) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Memory store

namespace {

class MemoryStore final : public Store {
public:
    MemoryStore(const Fixture& data, StoreOptions options)
        : Store(std::move(options)), data_(normalize(data)), index_(data_.statements) {
        std::sort(data_.statements.begin(), data_.statements.end(),
                  [](const auto& a, const auto& b) { return a.statement < b.statement; });
        for (const auto& ed : data_.descriptors) descriptors_[ed.entity.iri()].push_back(ed.descriptor);
    }

    StatementStream filter(const FilterPattern& pattern, std::optional<std::size_t> limit) const override {
        pattern.check_supported();
        std::vector<Statement> out;
        for (const auto& a : data_.statements) {
            if (limit && out.size() >= *limit) break;
            if (index_.matches(a.statement, pattern)) out.push_back(a.statement);
        }
        return StatementStream::of(std::move(out));
    }

    std::vector<AnnotationsResult> get_annotations(const std::vector<Statement>& statements) const override {
        std::vector<AnnotationsResult> out;
        for (const auto& s : statements) {
            auto it = std::lower_bound(data_.statements.begin(), data_.statements.end(), s,
                                       [](const AnnotatedStatement& a, const Statement& x) { return a.statement < x; });
            if (it != data_.statements.end() && it->statement == s)
                out.emplace_back(s, with_extra_references(it->annotations));
            else
                out.emplace_back(s, AnnotationRecordSet{});
        }
        return out;
    }

    std::vector<DescriptorResult> get_descriptor(const std::vector<Entity>& entities,
                                                 const std::string& language) const override {
        std::vector<DescriptorResult> out;
        for (const auto& e : entities) {
            auto it = descriptors_.find(e.iri());
            out.emplace_back(e, it == descriptors_.end() ? Descriptor{} : restrict_language(it->second, language));
        }
        return out;
    }

private:
    Fixture data_;
    StatementIndex index_;
    // Keyed by IRI: the RDF encoding cannot tell an item from a property
    // with the same IRI, and the memory store agrees with it.
    std::map<Iri, std::vector<Descriptor>> descriptors_;
};

} // namespace

StorePtr memory_store(const Fixture& data, StoreOptions options) {
    return std::make_shared<MemoryStore>(data, std::move(options));
}

} // namespace kif
