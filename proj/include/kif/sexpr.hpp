#pragma once
// S-expression syntax for model objects.
//
//   (Statement (Item (IRI "http://www.wikidata.org/entity/Q7286"))
//              (ValueSnak (Property wd:P166) (Item wd:Q38104)))
//
// Prefixed names (wd:Q2270) expand through the namespace table wherever an
// IRI is expected. Sets print in canonical order. The grammar is documented
// in docs/sexpr-grammar.md.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "kif/datamodel.hpp"

namespace kif::sexpr {

enum class PrintMode {
    full,     // every IRI written as (IRI "...")
    compact,  // known namespaces abbreviated, e.g. (Item wd:Q2270)
};

struct Token {
    enum class Kind { lparen, rparen, symbol, string, number };
    Kind kind;
    std::string lexeme;  // unescaped content for strings
    std::size_t line;    // 1-based
    std::size_t column;  // 1-based, in bytes
};

std::vector<Token> tokenize(std::string_view text);

// Parses exactly one object; trailing input is an error.
Object parse(std::string_view text);

// Parses a sequence of top-level objects (fixture files).
std::vector<Object> parse_all(std::string_view text);

Statement parse_statement(std::string_view text);
Snak parse_snak(std::string_view text);
Value parse_value(std::string_view text);
Entity parse_entity(std::string_view text);
Fingerprint parse_fingerprint(std::string_view text);
FilterPattern parse_filter_pattern(std::string_view text);

std::string print(const Object& x, PrintMode mode = PrintMode::compact);
std::string print(const Value& x, PrintMode mode = PrintMode::compact);
std::string print(const Entity& x, PrintMode mode = PrintMode::compact);
std::string print(const Iri& x, PrintMode mode = PrintMode::compact);
std::string print(const Text& x, PrintMode mode = PrintMode::compact);
std::string print(const String& x, PrintMode mode = PrintMode::compact);
std::string print(const Quantity& x, PrintMode mode = PrintMode::compact);
std::string print(const Time& x, PrintMode mode = PrintMode::compact);
std::string print(const Snak& x, PrintMode mode = PrintMode::compact);
std::string print(const Statement& x, PrintMode mode = PrintMode::compact);
std::string print(const ReferenceRecord& x, PrintMode mode = PrintMode::compact);
std::string print(Rank x, PrintMode mode = PrintMode::compact);
std::string print(const AnnotationRecord& x, PrintMode mode = PrintMode::compact);
std::string print(const SnakSet& x, PrintMode mode = PrintMode::compact);
std::string print(const ReferenceRecordSet& x, PrintMode mode = PrintMode::compact);
std::string print(const AnnotationRecordSet& x, PrintMode mode = PrintMode::compact);
std::string print(const TextSet& x, PrintMode mode = PrintMode::compact);
std::string print(const Descriptor& x, PrintMode mode = PrintMode::compact);
std::string print(const Fingerprint& x, PrintMode mode = PrintMode::compact);
std::string print(const FilterPattern& x, PrintMode mode = PrintMode::compact);
std::string print(const AnnotatedStatement& x, PrintMode mode = PrintMode::compact);
std::string print(const EntityDescriptor& x, PrintMode mode = PrintMode::compact);

// String literal with escapes, as used inside S-expressions.
std::string quote(std::string_view s);

} // namespace kif::sexpr
