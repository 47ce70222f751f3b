#pragma once
// Mapper stores: a non-Wikidata source seen through Wikidata vocabulary.
//
// Entity rules rewrite IRIs between source and target templates holding one
// {n} capture; property rules map one target property to one source
// predicate, with a codec for the literal. Translation happens at query
// time; nothing is copied out of the source.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kif/datamodel.hpp"
#include "kif/rdf/sparql.hpp"
#include "kif/store.hpp"

namespace kif::mapper {

class EntityRule {
public:
    // Throws InvalidValue unless each template holds exactly one {n}.
    EntityRule(std::string source, std::string target);

    const std::string& source() const noexcept { return source_; }
    const std::string& target() const noexcept { return target_; }

    // The capture matches one or more characters other than '/', '#', '?'.
    std::optional<std::string> to_target(std::string_view source_iri) const;
    std::optional<std::string> to_source(std::string_view target_iri) const;

private:
    std::string source_;
    std::string target_;
};

struct ValueCodec {
    enum class Kind { string, iri, item, decimal_quantity, text };
    Kind kind = Kind::string;
    std::optional<Entity> unit;  // decimal_quantity
    std::string language;        // text

    friend bool operator==(const ValueCodec&, const ValueCodec&) = default;
};

struct PropertyRule {
    Entity property;
    std::string source;  // predicate IRI
    ValueCodec codec;
};

struct MappingSpec {
    std::string name;
    std::vector<EntityRule> entity_rules;
    std::vector<PropertyRule> property_rules;
    std::optional<std::string> label_predicate;

    // Throws InvalidValue on duplicate target properties or bad templates.
    void validate() const;

    const PropertyRule* rule_for(const Entity& property) const;
    std::optional<std::string> to_target(std::string_view source_iri) const;
    std::optional<std::string> to_source(std::string_view target_iri) const;

    // JSON layout documented in docs/mapping.md. IRIs may be prefixed names.
    static MappingSpec from_json(std::string_view json);
    static MappingSpec load(const std::string& path);
};

// Source query for `p` projecting ?s ?p ?v, or nullopt when no source data
// can match (unmapped property, unencodable constant, non-value snak kinds).
std::optional<rdf::SelectQuery> translate_pattern(const MappingSpec& spec, const FilterPattern& p);

struct Translated {
    std::vector<Statement> statements;
    std::vector<std::string> diagnostics;
};

// Statements for rows of a translate_pattern query. Rows whose subject
// matches no entity rule, or whose literal the codec rejects, are skipped
// with a diagnostic.
Translated translate_results(const MappingSpec& spec, const rdf::ResultSet& rows);

// Source term for `v` under `codec`, if representable.
std::optional<rdf::Term> encode_value(const MappingSpec& spec, const ValueCodec& codec, const Value& v);
// Target value of a source term; nullopt (with `diagnostic`) when rejected.
std::optional<Value> decode_value(const MappingSpec& spec, const ValueCodec& codec, const rdf::Term& t,
                                  std::string* diagnostic = nullptr);

// Store over `source`. Annotation records are (no qualifiers, the extra
// references, normal rank); descriptors carry labels only, and only when the
// spec names a label predicate.
StorePtr mapper_store(ExecutorPtr source, MappingSpec spec, StoreOptions options = {});

} // namespace kif::mapper
