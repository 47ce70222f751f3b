#pragma once
// RDF terms, triples and an indexed in-memory graph.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace kif::rdf {

inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view xsd_double = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view xsd_boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view xsd_date_time = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr std::string_view rdf_lang_string = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

struct IriTerm {
    std::string value;

    friend bool operator==(const IriTerm&, const IriTerm&) = default;
    friend auto operator<=>(const IriTerm&, const IriTerm&) = default;
};

// A non-empty language means the datatype is rdf:langString.
struct Literal {
    std::string lexical;
    std::string datatype{xsd_string};
    std::string language;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Alternative order gives the canonical term order: IRIs before literals.
using Term = std::variant<IriTerm, Literal>;

Term iri(std::string value);
Term typed(std::string lexical, std::string_view datatype);
Term plain(std::string lexical);
Term lang(std::string lexical, std::string language);

bool is_iri(const Term& t) noexcept;
const std::string& iri_value(const Term& t);  // throws if t is a literal

// Absolute IRI acceptable in N-Triples: scheme, no spaces or <>"{}|^`\.
bool is_valid_iri(std::string_view s) noexcept;

std::string to_ntriples(const Term& t);

struct Triple {
    IriTerm subject;
    IriTerm predicate;
    Term object;

    friend bool operator==(const Triple&, const Triple&) = default;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

std::string to_ntriples(const Triple& t);

using TermId = std::uint32_t;

// Set of triples with terms interned to ids. Indexes on s, p, o, (s,p) and
// (p,o). Const members may be called concurrently; mutation requires
// exclusive access.
class Graph {
public:
    Graph() = default;

    bool insert(const Triple& t);
    template <class Range>
    void insert_all(const Range& r) {
        for (const auto& t : r) insert(t);
    }

    std::size_t size() const noexcept { return triples_.size(); }
    bool empty() const noexcept { return triples_.empty(); }
    bool contains(const Triple& t) const;

    // All triples in canonical order.
    std::vector<Triple> triples() const;

    // Interned id of `t`, if the term occurs in the graph.
    std::optional<TermId> find(const Term& t) const;
    const Term& term(TermId id) const { return terms_[id]; }

    struct Ids {
        TermId s, p, o;
        friend bool operator==(const Ids&, const Ids&) = default;
    };

    // Calls `f` for each triple matching the bound positions.
    void match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
               const std::function<void(const Ids&)>& f) const;

    // Upper bound on the number of matches, from index sizes.
    std::size_t estimate(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o) const;

    Ids ids(std::size_t index) const { return triples_[index]; }

private:
    TermId intern(const Term& t);
    // Smallest index list covering the bound positions; nullptr when none are bound.
    const std::vector<std::uint32_t>* candidates(std::optional<TermId> s, std::optional<TermId> p,
                                                 std::optional<TermId> o) const;

    struct PairHash {
        std::size_t operator()(std::uint64_t k) const noexcept { return std::hash<std::uint64_t>()(k); }
    };
    static std::uint64_t pair(TermId a, TermId b) { return (std::uint64_t(a) << 32) | b; }

    std::vector<Term> terms_;
    std::unordered_map<std::string, TermId> term_ids_;
    std::vector<Ids> triples_;
    std::unordered_map<std::string, std::size_t> triple_index_;
    std::unordered_map<TermId, std::vector<std::uint32_t>> by_s_, by_p_, by_o_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>, PairHash> by_sp_, by_po_;
};

} // namespace kif::rdf
