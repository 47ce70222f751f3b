#pragma once
// Content digests used to name reified RDF nodes.

#include <string>
#include <string_view>

#include "kif/datamodel.hpp"

namespace kif {

// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

// Digest of the full-mode S-expression of `x`; equal objects get equal
// digests and the result does not depend on the namespace table.
std::string content_digest(const Object& x);

} // namespace kif
