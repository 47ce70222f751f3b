#pragma once
// N-Triples reader and writer.

#include <iosfwd>
#include <string>
#include <string_view>

#include "kif/rdf/graph.hpp"

namespace kif::rdf {

// Blank nodes become urn:skolem:{sha256(text)}:{label}, so the same document
// always yields the same graph. Errors carry line and column.
Graph parse_ntriples(std::string_view text);
Graph read_ntriples_file(const std::string& path);

// One triple per line in canonical order.
std::string serialize_ntriples(const Graph& g);
void write_ntriples(std::ostream& out, const Graph& g);

} // namespace kif::rdf
