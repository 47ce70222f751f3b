#include <atomic>
#include <deque>
#include <list>
#include <map>
#include <mutex>
#include <set>
#include <unordered_map>

#include "kif/codec.hpp"
#include "kif/errors.hpp"
#include "kif/http.hpp"
#include "kif/namespaces.hpp"
#include "kif/store.hpp"

namespace kif {

// ---------------------------------------------------------------------------
// Executors

namespace {

class LocalExecutor final : public QueryExecutor {
public:
    explicit LocalExecutor(std::shared_ptr<const rdf::Graph> g) : graph_(std::move(g)) {}

    rdf::ResultSet select(const rdf::SelectQuery& q) const override {
        ++issued_;
        return rdf::match_bgp(*graph_, q);
    }
    std::size_t queries_issued() const override { return issued_.load(); }

private:
    std::shared_ptr<const rdf::Graph> graph_;
    mutable std::atomic<std::size_t> issued_{0};
};

class HttpExecutor final : public QueryExecutor {
public:
    HttpExecutor(std::string url, std::chrono::milliseconds timeout) : url_(std::move(url)), timeout_(timeout) {
        http::parse_url(url_);
    }

    rdf::ResultSet select(const rdf::SelectQuery& q) const override {
        ++issued_;
        auto res = http::post(url_, rdf::serialize(q), "application/sparql-query", timeout_);
        if (res.status < 200 || res.status >= 300) {
            auto snippet = res.body.substr(0, 200);
            throw TransportError("endpoint " + url_ + " returned status " + std::to_string(res.status) + ": " + snippet,
                                 url_, res.status);
        }
        try {
            return rdf::parse_results_json(res.body);
        } catch (const Error& e) {
            throw TransportError("malformed results from " + url_ + ": " + e.what(), url_, res.status);
        }
    }
    std::size_t queries_issued() const override { return issued_.load(); }

private:
    std::string url_;
    std::chrono::milliseconds timeout_;
    mutable std::atomic<std::size_t> issued_{0};
};

class CachingExecutor final : public QueryExecutor {
public:
    CachingExecutor(ExecutorPtr inner, std::size_t capacity) : inner_(std::move(inner)), capacity_(capacity) {}

    rdf::ResultSet select(const rdf::SelectQuery& q) const override {
        auto key = rdf::serialize(q);
        {
            std::lock_guard lock(mutex_);
            if (auto it = index_.find(key); it != index_.end()) {
                lru_.splice(lru_.begin(), lru_, it->second);
                return it->second->second;
            }
        }
        auto result = inner_->select(q);
        std::lock_guard lock(mutex_);
        if (index_.count(key)) return result;
        lru_.emplace_front(key, result);
        index_[key] = lru_.begin();
        while (lru_.size() > capacity_) {
            index_.erase(lru_.back().first);
            lru_.pop_back();
        }
        return result;
    }
    std::size_t queries_issued() const override { return inner_->queries_issued(); }

private:
    using Entry = std::pair<std::string, rdf::ResultSet>;
    ExecutorPtr inner_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    mutable std::list<Entry> lru_;
    mutable std::unordered_map<std::string, std::list<Entry>::iterator> index_;
};

} // namespace

ExecutorPtr local_executor(std::shared_ptr<const rdf::Graph> graph) {
    return std::make_shared<LocalExecutor>(std::move(graph));
}

ExecutorPtr http_executor(std::string url, std::chrono::milliseconds timeout) {
    return std::make_shared<HttpExecutor>(std::move(url), timeout);
}

ExecutorPtr caching_executor(ExecutorPtr inner, std::size_t capacity) {
    return std::make_shared<CachingExecutor>(std::move(inner), capacity);
}

// ---------------------------------------------------------------------------
// Store over an executor

namespace {

constexpr std::size_t kValuesChunk = 100;

std::optional<std::size_t> column(const rdf::ResultSet& r, std::string_view name) {
    for (std::size_t i = 0; i < r.variables.size(); ++i)
        if (r.variables[i] == name) return i;
    return std::nullopt;
}

bool is_node_iri(const std::string& iri) { return iri.starts_with(ns::wdv) || iri.starts_with(ns::wdref); }

class ExecutorStore final : public Store, public std::enable_shared_from_this<ExecutorStore> {
public:
    ExecutorStore(ExecutorPtr exec, StoreOptions options) : Store(std::move(options)), exec_(std::move(exec)) {}

    StatementStream filter(const FilterPattern& pattern, std::optional<std::size_t> limit) const override {
        pattern.check_supported();
        if (limit && *limit == 0) return {};
        try {
            codec::compile_filter(pattern, codec::Level::full);
        } catch (const EncodeError&) {
            return {};  // properties outside wd: match nothing in the encoding
        }
        auto st = std::make_shared<PageState>();
        auto self = shared_from_this();
        return StatementStream([self, st, pattern, limit]() -> std::optional<Statement> {
            if (limit && st->yielded >= *limit) return std::nullopt;
            while (st->buffer.empty() && !st->exhausted) self->fetch_page(pattern, *st);
            if (st->buffer.empty()) return std::nullopt;
            Statement s = std::move(st->buffer.front());
            st->buffer.pop_front();
            ++st->yielded;
            return s;
        });
    }

    std::vector<AnnotationsResult> get_annotations(const std::vector<Statement>& statements) const override {
        std::vector<AnnotationsResult> out;
        for (const auto& s : statements) out.emplace_back(s, with_extra_references(annotations_of(s)));
        return out;
    }

    std::vector<DescriptorResult> get_descriptor(const std::vector<Entity>& entities,
                                                 const std::string& language) const override {
        std::map<std::string, std::vector<Descriptor>> found;
        for (std::size_t i = 0; i < entities.size(); i += kValuesChunk) {
            std::vector<Entity> chunk(entities.begin() + i, entities.begin() + std::min(entities.size(), i + kValuesChunk));
            auto rows = select_all(codec::descriptor_query(chunk));
            for (const auto& row : rows.rows) {
                if (!row[0] || !row[1] || !row[2]) continue;
                const auto* lit = std::get_if<rdf::Literal>(&*row[2]);
                if (!lit || lit->language.empty()) continue;
                Text t(lit->lexical, lit->language);
                const auto& pred = rdf::iri_value(*row[1]);
                Descriptor d;
                if (pred == ns::expand(ns::rdfs, "label")) d.label = t;
                else if (pred == ns::expand(ns::schema, "description")) d.description = t;
                else d.aliases = TextSet{t};
                found[rdf::iri_value(*row[0])].push_back(std::move(d));
            }
        }
        std::vector<DescriptorResult> out;
        for (const auto& e : entities) {
            auto it = found.find(e.iri().str());
            out.emplace_back(e, it == found.end() ? Descriptor{} : restrict_language(it->second, language));
        }
        return out;
    }

private:
    struct PageState {
        std::size_t offset = 0;
        bool exhausted = false;
        std::size_t yielded = 0;
        std::deque<Statement> buffer;
        std::set<Statement> seen;
    };

    // All rows of `q`, fetched in pages of page_size.
    rdf::ResultSet select_all(rdf::SelectQuery q) const {
        rdf::ResultSet all;
        std::size_t offset = 0;
        for (;;) {
            q.limit = options().page_size;
            q.offset = offset == 0 ? std::nullopt : std::optional<std::size_t>(offset);
            auto page = exec_->select(q);
            all.variables = page.variables;
            std::size_t n = page.rows.size();
            for (auto& r : page.rows) all.rows.push_back(std::move(r));
            if (n < options().page_size) return all;
            offset += n;
        }
    }

    // Adds to `g` every triple reachable from `nodes` through value and
    // reference nodes.
    void add_closure(rdf::Graph& g, std::vector<std::string> nodes) const {
        std::set<std::string> visited(nodes.begin(), nodes.end());
        while (!nodes.empty()) {
            std::vector<std::string> next;
            for (std::size_t i = 0; i < nodes.size(); i += kValuesChunk) {
                std::vector<std::string> chunk(nodes.begin() + i, nodes.begin() + std::min(nodes.size(), i + kValuesChunk));
                auto rows = select_all(codec::node_query(chunk));
                for (const auto& row : rows.rows) {
                    if (!row[0] || !row[1] || !row[2] || !rdf::is_iri(*row[0]) || !rdf::is_iri(*row[1])) continue;
                    rdf::Triple t{rdf::IriTerm{rdf::iri_value(*row[0])}, rdf::IriTerm{rdf::iri_value(*row[1])}, *row[2]};
                    g.insert(t);
                    if (!rdf::is_iri(t.object)) continue;
                    const auto& o = rdf::iri_value(t.object);
                    if (is_node_iri(o) && visited.insert(o).second) next.push_back(o);
                }
            }
            nodes = std::move(next);
        }
    }

    void fetch_page(const FilterPattern& pattern, PageState& st) const {
        auto q = codec::compile_filter(pattern, codec::Level::full, options().page_size, st.offset);
        if (st.offset == 0) q.offset.reset();
        auto page = exec_->select(q);
        st.offset += page.rows.size();
        if (page.rows.size() < options().page_size) st.exhausted = true;

        auto main = q.where.front();
        auto term_of = [&](const rdf::PatternTerm& t, const rdf::Row& row) -> std::optional<rdf::Term> {
            if (const auto* c = std::get_if<rdf::Term>(&t)) return *c;
            auto i = column(page, std::get<rdf::Variable>(t).name);
            return i ? row[*i] : std::nullopt;
        };
        auto v_col = column(page, "v");

        rdf::Graph g;
        std::vector<std::string> nodes;
        std::map<std::string, std::set<rdf::Term>> values_by_node;
        for (const auto& row : page.rows) {
            auto s = term_of(main.subject, row);
            auto p = term_of(main.predicate, row);
            auto wds = term_of(main.object, row);
            if (!s || !p || !wds || !rdf::is_iri(*s) || !rdf::is_iri(*p) || !rdf::is_iri(*wds)) continue;
            const auto& node = rdf::iri_value(*wds);
            g.insert({rdf::IriTerm{rdf::iri_value(*s)}, rdf::IriTerm{rdf::iri_value(*p)}, *wds});
            if (v_col && row[*v_col]) values_by_node[node].insert(*row[*v_col]);
            nodes.push_back(node);
        }
        std::set<std::string> page_nodes(nodes.begin(), nodes.end());
        add_closure(g, {page_nodes.begin(), page_nodes.end()});

        auto decoded = codec::decode(g);
        for (std::size_t i = 0; i < decoded.statements.size(); ++i) {
            const auto& node = decoded.nodes[i];
            if (!page_nodes.count(node)) continue;
            const Statement& s = decoded.statements[i].statement;
            if (!post_check(s, pattern, values_by_node[node])) continue;
            if (st.seen.insert(s).second) st.buffer.push_back(s);
        }
    }

    // Conditions the query does not enforce exactly: snak kind, and value
    // equality (simple values forget units, bounds and precision).
    static bool post_check(const Statement& s, const FilterPattern& p, const std::set<rdf::Term>& bound_values) {
        if (!p.snak_kinds().has(s.snak.kind())) return false;
        if (p.subject())
            if (const Entity* e = p.subject()->as_entity(); e && *e != s.subject) return false;
        if (p.property())
            if (const Entity* e = p.property()->as_entity(); e && *e != s.snak.property()) return false;
        if (!p.value()) return true;
        if (s.snak.kind() != SnakKind::value) return false;
        const Value& v = *s.snak.value();
        if (const Value* c = p.value()->as_constant()) return v == *c;
        return std::holds_alternative<Entity>(v) && bound_values.count(codec::simple_value(v));
    }

    AnnotationRecordSet annotations_of(const Statement& s) const {
        rdf::SelectQuery q;
        try {
            q = codec::compile_annotations(s);
        } catch (const EncodeError&) {
            return {};
        }
        auto rows = select_all(q);
        rdf::Graph g;
        std::set<std::string> nodes;
        auto link = ns::expand(ns::p, *ns::local_in(s.snak.property().iri().str(), ns::wd));
        for (const auto& row : rows.rows) {
            if (!row[0] || !rdf::is_iri(*row[0])) continue;
            nodes.insert(rdf::iri_value(*row[0]));
            g.insert({rdf::IriTerm{s.subject.iri().str()}, rdf::IriTerm{link}, *row[0]});
        }
        if (nodes.empty()) return {};
        add_closure(g, {nodes.begin(), nodes.end()});
        std::vector<AnnotationRecord> records;
        auto decoded = codec::decode(g);
        for (const auto& es : decoded.statements)
            if (es.statement == s) records.push_back(es.annotation);
        return AnnotationRecordSet(std::move(records));
    }

    ExecutorPtr exec_;
};

} // namespace

StorePtr executor_store(ExecutorPtr executor, StoreOptions options) {
    if (options.cache_enabled) executor = caching_executor(std::move(executor));
    return std::make_shared<ExecutorStore>(std::move(executor), std::move(options));
}

StorePtr rdf_store(std::shared_ptr<const rdf::Graph> graph, StoreOptions options) {
    return executor_store(local_executor(std::move(graph)), std::move(options));
}

StorePtr sparql_store(std::string url, StoreOptions options) {
    auto timeout = options.request_timeout;
    return executor_store(http_executor(std::move(url), timeout), std::move(options));
}

} // namespace kif
