#pragma once
// Codec between annotated statements and the Wikidata RDF dialect (query
// service variant), and the SPARQL subset queries that stores issue.
//
// Reified nodes are named by content digests:
//   wds:{digest(statement, record)}  wdv:{digest(value)}  wdref:{digest(reference)}
// Some-value snaks point to wdgenid:{digest} IRIs. No-value snaks are
// `node rdf:type wdno:P`, except qualifiers, which use `wds pq:P wdno:P` so they
// stay distinct from a no-value main snak.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kif/datamodel.hpp"
#include "kif/rdf/graph.hpp"
#include "kif/rdf/sparql.hpp"

namespace kif::codec {

struct EncodedStatement {
    Statement statement;
    AnnotationRecord annotation;
    bool best = true;

    friend bool operator==(const EncodedStatement&, const EncodedStatement&) = default;
    friend auto operator<=>(const EncodedStatement&, const EncodedStatement&) = default;
};

// Literal or IRI standing for `v` at the truthy level.
rdf::Term simple_value(const Value& v);

// Inverse of simple_value where no deep node is available: decimals become
// unit-less quantities, dateTimes become times (precision 11 at midnight,
// 14 otherwise), wd: IRIs become entities. Returns nullopt and sets
// `diagnostic` for literals of unknown datatype.
std::optional<Value> lift(const rdf::Term& t, std::string* diagnostic = nullptr);

// Entity for a wd: IRI (property iff the local name starts with 'P').
std::optional<Entity> entity_for(std::string_view iri);

// Throws EncodeError for data outside the dialect: entities outside wd:,
// misclassified ids, or IRI values inside wd:, wdno: or wdgenid:.
std::vector<rdf::Triple> encode(const EncodedStatement& es);

// IRI of the statement node for (statement, record).
std::string statement_node(const Statement& s, const AnnotationRecord& a);
// Object of the main snak's ps:/wdt: triple for a some-value statement.
std::string some_value_node(const Statement& s);

// Truthy triple of `s` (nullopt never happens for valid input; kept for
// statements outside the dialect).
rdf::Triple truthy_triple(const Statement& s);

// Marks best-ranked statements: not deprecated, and no statement with the
// same subject and property has a strictly higher rank.
std::vector<EncodedStatement> rank_batch(const std::vector<AnnotatedStatement>& data);

std::vector<rdf::Triple> encode_descriptor(const Entity& e, const Descriptor& d);

rdf::Graph encode_dataset(const std::vector<AnnotatedStatement>& data,
                          const std::vector<EntityDescriptor>& descriptors = {});

// Only the wdt: triples (and truthy rdf:type wdno: triples) of `g`.
rdf::Graph truthy_subgraph(const rdf::Graph& g);

struct Decoded {
    // Sorted; nodes[i] is the statement node of statements[i] (empty for
    // statements known only from a truthy triple).
    std::vector<EncodedStatement> statements;
    std::vector<std::string> nodes;
    std::map<Entity, Descriptor> descriptors;
    std::vector<std::string> diagnostics;
};

Decoded decode(const rdf::Graph& g);

// ---------------------------------------------------------------------------
// Query compilation

enum class Level {
    truthy,  // ?s wdt:P ?v
    full,    // ?s p:P ?wds . ?wds ps:P ?v
};

// Variables: ?s subject, ?p property (when open), ?v value, ?wds statement
// node (full level), ?f0.. fingerprint auxiliaries. The truthy level keeps
// only wdt: predicates for an open property; callers post-filter ?p.
// Throws UnsupportedFingerprint for patterns failing check_supported(), and
// EncodeError when a property lies outside wd:.
rdf::SelectQuery compile_filter(const FilterPattern& p, Level level, std::optional<std::size_t> limit = {},
                                std::optional<std::size_t> offset = {});

// Resolves the statement nodes of `s` (projects ?wds). Throws EncodeError as
// compile_filter.
rdf::SelectQuery compile_annotations(const Statement& s);

// All triples of the given nodes (projects ?n ?pred ?obj).
rdf::SelectQuery node_query(const std::vector<std::string>& nodes);

// Label, description and alias triples of `entities` (projects ?e ?pred ?o).
rdf::SelectQuery descriptor_query(const std::vector<Entity>& entities);

} // namespace kif::codec
