#pragma once
// The SPARQL subset: SELECT [DISTINCT] over a basic graph pattern with an
// optional VALUES block, LIMIT and OFFSET. Everything else is rejected with
// UnsupportedQuery naming the construct.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kif/rdf/graph.hpp"

namespace kif::rdf {

struct Variable {
    std::string name;  // without '?'

    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable&, const Variable&) = default;
};

using PatternTerm = std::variant<Variable, Term>;

struct TriplePattern {
    PatternTerm subject;
    PatternTerm predicate;
    PatternTerm object;

    friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

// Absent cells are UNDEF.
struct ValuesBlock {
    std::vector<std::string> variables;
    std::vector<std::vector<std::optional<Term>>> rows;

    friend bool operator==(const ValuesBlock&, const ValuesBlock&) = default;
};

struct SelectQuery {
    std::vector<std::string> projection;
    bool distinct = false;
    std::vector<TriplePattern> where;
    std::optional<ValuesBlock> values;
    std::optional<std::size_t> limit;
    std::optional<std::size_t> offset;

    friend bool operator==(const SelectQuery&, const SelectQuery&) = default;
};

// Throws UnsupportedQuery if a projected variable occurs nowhere in the
// pattern or VALUES block.
void validate(const SelectQuery& q);

// Prefixes of the built-in namespace table need no declaration.
SelectQuery parse_sparql(std::string_view text);

struct SourcePosition {
    std::size_t line = 1;
    std::size_t column = 1;
};

// As above; positions[i] is where q.where[i] starts (its subject token, shared
// by the patterns of a ';' or ',' list).
SelectQuery parse_sparql(std::string_view text, std::vector<SourcePosition>& positions);

// Serializes with full IRIs; parse_sparql(serialize(q)) == q.
std::string serialize(const SelectQuery& q);

using Row = std::vector<std::optional<Term>>;

struct ResultSet {
    std::vector<std::string> variables;
    std::vector<Row> rows;

    friend bool operator==(const ResultSet&, const ResultSet&) = default;
};

// Sorts rows in canonical term order (unbound first), then applies
// DISTINCT, OFFSET and LIMIT.
void finalize_rows(std::vector<Row>& rows, bool distinct, std::optional<std::size_t> offset,
                   std::optional<std::size_t> limit);

ResultSet match_bgp(const Graph& g, const SelectQuery& q);

// W3C SPARQL 1.1 query results JSON.
std::string to_results_json(const ResultSet& r);
ResultSet parse_results_json(std::string_view json);

} // namespace kif::rdf
