#pragma once
// Prefix table of the Wikidata RDF dialect (query-service variant).

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace kif::ns {

struct Namespace {
    std::string_view prefix;
    std::string_view base;
};

inline constexpr std::string_view wd = "http://www.wikidata.org/entity/";
inline constexpr std::string_view wds = "http://www.wikidata.org/entity/statement/";
inline constexpr std::string_view wdv = "http://www.wikidata.org/value/";
inline constexpr std::string_view wdref = "http://www.wikidata.org/reference/";
inline constexpr std::string_view wdt = "http://www.wikidata.org/prop/direct/";
inline constexpr std::string_view p = "http://www.wikidata.org/prop/";
inline constexpr std::string_view ps = "http://www.wikidata.org/prop/statement/";
inline constexpr std::string_view psv = "http://www.wikidata.org/prop/statement/value/";
inline constexpr std::string_view pq = "http://www.wikidata.org/prop/qualifier/";
inline constexpr std::string_view pqv = "http://www.wikidata.org/prop/qualifier/value/";
inline constexpr std::string_view pr = "http://www.wikidata.org/prop/reference/";
inline constexpr std::string_view prv = "http://www.wikidata.org/prop/reference/value/";
inline constexpr std::string_view wdno = "http://www.wikidata.org/prop/novalue/";
inline constexpr std::string_view wdgenid = "http://www.wikidata.org/.well-known/genid/";
inline constexpr std::string_view wikibase = "http://wikiba.se/ontology#";
inline constexpr std::string_view prov = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view schema = "http://schema.org/";
inline constexpr std::string_view skos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";

// All known prefixes. Prefixes are unique; several bases nest inside others
// (wds: inside wd:, ps: inside p:), so lookups use the longest match.
std::span<const Namespace> table() noexcept;

std::optional<std::string_view> base_for(std::string_view prefix) noexcept;

struct Split {
    Namespace ns;
    std::string_view local;
};

// Longest namespace whose base prefixes `iri` and whose remaining local name
// contains no '/' or '#'.
std::optional<Split> split(std::string_view iri) noexcept;

// Local name of `iri` under `base`, when `base` is the longest match.
std::optional<std::string_view> local_in(std::string_view iri, std::string_view base) noexcept;

// True if `local` can be written as prefix:local in S-expressions and SPARQL.
bool is_safe_local(std::string_view local) noexcept;

// prefix:local form when possible, otherwise nullopt.
std::optional<std::string> compact(std::string_view iri);

std::string expand(std::string_view base, std::string_view local);

// Entities in the wd: namespace are properties when their local name starts
// with 'P' (P166) and items otherwise (Q7286, Q_PUBCHEM_CID241).
constexpr bool is_property_id(std::string_view local) noexcept {
    return !local.empty() && local.front() == 'P';
}

} // namespace kif::ns
