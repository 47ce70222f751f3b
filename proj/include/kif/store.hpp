#pragma once
// The store abstraction and its backends.
//
// A store answers five operations over a Wikidata-shaped statement
// repository: filter, count, contains, get_annotations and get_descriptor.
// MemoryStore scans native statements and is the reference semantics;
// RdfStore and SparqlStore answer through the RDF encoding.

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kif/datamodel.hpp"
#include "kif/rdf/graph.hpp"
#include "kif/rdf/sparql.hpp"

namespace kif {

struct StoreOptions {
    std::size_t page_size = 100;  // >= 1
    bool cache_enabled = true;
    // Appended to every annotation record returned by get_annotations.
    ReferenceRecordSet extra_references;
    std::chrono::milliseconds request_timeout{30000};

    // Defaults, with page_size taken from KIF_PAGE_SIZE when set.
    static StoreOptions from_environment();
};

// Single-consumer pull stream.
template <class T>
class Stream {
public:
    using Next = std::function<std::optional<T>()>;

    Stream() : next_([] { return std::optional<T>(); }) {}
    explicit Stream(Next next) : next_(std::move(next)) {}

    static Stream of(std::vector<T> items) {
        auto data = std::make_shared<std::vector<T>>(std::move(items));
        auto pos = std::make_shared<std::size_t>(0);
        return Stream([data, pos]() -> std::optional<T> {
            if (*pos >= data->size()) return std::nullopt;
            return (*data)[(*pos)++];
        });
    }

    std::optional<T> next() { return next_(); }

    std::vector<T> collect() {
        std::vector<T> out;
        while (auto x = next_()) out.push_back(std::move(*x));
        return out;
    }

private:
    Next next_;
};

using StatementStream = Stream<Statement>;
using AnnotationsResult = std::pair<Statement, AnnotationRecordSet>;
using DescriptorResult = std::pair<Entity, Descriptor>;

class Store {
public:
    explicit Store(StoreOptions options = {});
    virtual ~Store() = default;

    // Distinct statements matching `pattern`, at most `limit`. Throws
    // UnsupportedFingerprint for patterns failing check_supported().
    virtual StatementStream filter(const FilterPattern& pattern, std::optional<std::size_t> limit = {}) const = 0;
    virtual std::size_t count(const FilterPattern& pattern) const;
    virtual bool contains(const Statement& statement) const;
    // One pair per input statement, in input order; empty set when absent.
    virtual std::vector<AnnotationsResult> get_annotations(const std::vector<Statement>& statements) const = 0;
    // Fields restricted to texts tagged exactly `language`.
    virtual std::vector<DescriptorResult> get_descriptor(const std::vector<Entity>& entities,
                                                         const std::string& language = "en") const = 0;

    const StoreOptions& options() const noexcept { return options_; }

protected:
    // Adds the configured extra references to each record.
    AnnotationRecordSet with_extra_references(const AnnotationRecordSet& records) const;

private:
    StoreOptions options_;
};

using StorePtr = std::shared_ptr<const Store>;

// Pattern matching exactly `s` (subject, property, value and snak kind).
FilterPattern exact_pattern(const Statement& s);

// Descriptor restricted to `language`: least label and description with that
// tag, and every alias with it.
Descriptor restrict_language(const std::vector<Descriptor>& ds, const std::string& language);

// ---------------------------------------------------------------------------
// Fixtures

struct Fixture {
    std::vector<AnnotatedStatement> statements;
    std::vector<EntityDescriptor> descriptors;
};

// Top-level Statement, AnnotatedStatement and EntityDescriptor forms. Plain
// statements, and annotated statements without records, get one default
// record (no qualifiers, no references, normal rank). Records of repeated
// statements are merged.
Fixture parse_fixture(std::string_view text);
Fixture load_fixture(const std::string& path);
Fixture normalize(Fixture f);

// ---------------------------------------------------------------------------
// Backends

StorePtr memory_store(const Fixture& data, StoreOptions options = {});

// Evaluates SELECT queries somewhere.
class QueryExecutor {
public:
    virtual ~QueryExecutor() = default;
    virtual rdf::ResultSet select(const rdf::SelectQuery& q) const = 0;
    // Number of select() calls that reached the backend.
    virtual std::size_t queries_issued() const = 0;
};

using ExecutorPtr = std::shared_ptr<const QueryExecutor>;

ExecutorPtr local_executor(std::shared_ptr<const rdf::Graph> graph);
// POSTs application/sparql-query; non-2xx responses raise TransportError
// with the status and the start of the body.
ExecutorPtr http_executor(std::string url, std::chrono::milliseconds timeout);
// LRU cache of whole result sets keyed by query text.
ExecutorPtr caching_executor(ExecutorPtr inner, std::size_t capacity = 1024);

// Store answering through the full-level RDF encoding. Statements present
// only as truthy triples (no statement node) are not visible.
StorePtr rdf_store(std::shared_ptr<const rdf::Graph> graph, StoreOptions options = {});
StorePtr sparql_store(std::string url, StoreOptions options = {});
StorePtr executor_store(ExecutorPtr executor, StoreOptions options = {});

// Reference semantics of filter over native data, shared by the memory
// store and the test oracles.
class StatementIndex {
public:
    explicit StatementIndex(const std::vector<AnnotatedStatement>& data);

    // True iff some statement (subject, snak) exists, at any rank.
    bool has(const Entity& subject, const Snak& snak) const;
    bool satisfies(const Entity& e, const Fingerprint& fp) const;
    bool value_matches(const Snak& snak, const Fingerprint& fp) const;
    bool matches(const Statement& s, const FilterPattern& p) const;

private:
    std::vector<Statement> sorted_;
};

} // namespace kif
