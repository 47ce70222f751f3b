#pragma once
// Independent reference implementations used as test oracles.

#include "kif/rdf/sparql.hpp"

namespace kif::test {

// Tries every assignment of graph triples to the query's patterns.
rdf::ResultSet brute_force_bgp(const rdf::Graph& g, const rdf::SelectQuery& q);

} // namespace kif::test
