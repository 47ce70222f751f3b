#pragma once
// Truthy-vocabulary SELECT queries answered through a store's filter.
//
// Accepted shape: one main triple pattern
//     S P O
// with S a variable or wd: entity, P a variable, a wdt: property or rdf:type
// (no-value form, O a wdno: property or a variable), and O a variable or a
// constant; plus auxiliary patterns
//     ?x wdt:Q c        ?x rdf:type wdno:Q
// whose ?x is the main subject or object variable. LIMIT, OFFSET and
// DISTINCT are kept. Anything else is rejected with UnsupportedQuery.
//
// Answers equal evaluating the query over the truthy graph of the store's
// data: only non-deprecated statements are visible, values compare as their
// truthy terms.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kif/datamodel.hpp"
#include "kif/rdf/sparql.hpp"
#include "kif/store.hpp"

namespace kif::decoder {

enum class Role { subject, property, value };

// Auxiliary constraint `?x predicate object` on the subject or the value.
struct Auxiliary {
    Role on = Role::subject;
    rdf::IriTerm predicate;
    rdf::Term object;
};

struct DecodedQuery {
    // Pushed to the store. Constants and auxiliaries that do not survive the
    // truthy rendering exactly (decimals, dateTimes, some-value nodes) are
    // left out here and checked on the rendered triples instead.
    FilterPattern pattern;
    rdf::TriplePattern main;
    std::vector<Auxiliary> auxiliaries;
    std::vector<std::string> columns;
    std::map<std::string, Role> projection;  // column -> role
    bool distinct = false;
    std::optional<std::size_t> limit;
    std::optional<std::size_t> offset;
};

// Throws ParseError on malformed text and UnsupportedQuery, with the position
// of the offending triple pattern, outside the subset.
DecodedQuery decode(std::string_view query);

rdf::ResultSet answer_rows(const Store& store, const DecodedQuery& q);

// SPARQL results JSON.
std::string answer(const Store& store, std::string_view query);

} // namespace kif::decoder
