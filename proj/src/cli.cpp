#include "kif/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "kif/bench.hpp"
#include "kif/codec.hpp"
#include "kif/errors.hpp"
#include "kif/mapper.hpp"
#include "kif/mixer.hpp"
#include "kif/rdf/endpoint.hpp"
#include "kif/rdf/ntriples.hpp"
#include "kif/sexpr.hpp"
#include "kif/sparqldecoder.hpp"

namespace kif::cli {

namespace {

std::atomic<bool> g_stop_serving{false};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Graph from N-Triples, or the encoding of an S-expression fixture.
std::shared_ptr<const rdf::Graph> load_graph(const std::string& path) {
    if (ends_with(path, ".sexp")) {
        auto f = load_fixture(path);
        return std::make_shared<rdf::Graph>(codec::encode_dataset(f.statements, f.descriptors));
    }
    return std::make_shared<rdf::Graph>(rdf::read_ntriples_file(path));
}

std::pair<std::string, std::string> split_scheme(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw InvalidValue("store spec '" + spec + "' has no kind prefix");
    return {spec.substr(0, colon), spec.substr(colon + 1)};
}

ExecutorPtr open_executor(const std::string& spec, const StoreOptions& options) {
    auto [kind, rest] = split_scheme(spec);
    if (kind == "sparql") return http_executor(rest, options.request_timeout);
    if (kind == "rdf") return local_executor(load_graph(rest));
    throw InvalidValue("mapper source '" + spec + "' must be sparql:<url> or rdf:<file>");
}

// ---------------------------------------------------------------------------
// Shared flags

struct StoreFlags {
    std::vector<std::string> stores;
    bool parallel = false;
    bool lenient = false;
    bool no_cache = false;
    std::size_t page_size = 0;
    long timeout_ms = 0;

    void add(CLI::App* app) {
        app->add_option("--store", stores,
                        "sparql:<url>, rdf:<file.nt>, memory:<fixture.sexp> or mapper:<spec.json>@<source>; "
                        "several stores form a mixer in flag order");
        app->add_flag("--parallel", parallel, "query mixer children concurrently");
        app->add_flag("--lenient", lenient, "skip failing mixer children");
        app->add_flag("--no-cache", no_cache, "disable the query cache");
        app->add_option("--page-size", page_size, "results per endpoint request (default: KIF_PAGE_SIZE or 100)");
        app->add_option("--timeout-ms", timeout_ms, "endpoint request timeout");
    }

    StoreOptions options() const {
        auto o = StoreOptions::from_environment();
        if (page_size) o.page_size = page_size;
        if (timeout_ms > 0) o.request_timeout = std::chrono::milliseconds(timeout_ms);
        if (no_cache) o.cache_enabled = false;
        return o;
    }

    StorePtr open(StoreOptions o) const {
        if (stores.empty()) throw InvalidValue("at least one --store is required");
        if (stores.size() == 1) return open_store(stores.front(), o);
        std::vector<StorePtr> children;
        for (const auto& s : stores) children.push_back(open_store(s, o));
        return mixer::mixer_store(std::move(children), mixer::MixerOptions{parallel, lenient}, o);
    }
    StorePtr open() const { return open(options()); }
};

struct PatternFlags {
    std::string pattern, subject, property, value, kinds;
    std::vector<std::string> subject_snaks, value_snaks;

    void add(CLI::App* app) {
        app->add_option("--pattern", pattern, "whole pattern as (FilterPattern ...)");
        app->add_option("--subject", subject, "subject fingerprint: entity, snak or (SnakSet ...)");
        app->add_option("--property", property, "property, e.g. wd:P2177");
        app->add_option("--value", value, "value fingerprint: constant value, snak or (SnakSet ...)");
        app->add_option("--subject-snak", subject_snaks, "snak the subject must satisfy (repeatable)");
        app->add_option("--value-snak", value_snaks, "snak the value must satisfy (repeatable)");
        app->add_option("--kinds", kinds, "comma-separated snak kinds: value, some, no");
    }

    static std::optional<Fingerprint> fingerprint(const std::string& text, const std::vector<std::string>& snaks,
                                                  const char* flag) {
        if (!text.empty() && !snaks.empty())
            throw InvalidValue(std::string("--") + flag + " and --" + flag + "-snak are exclusive");
        if (!text.empty()) return sexpr::parse_fingerprint(text);
        if (snaks.empty()) return std::nullopt;
        std::vector<Snak> parsed;
        for (const auto& s : snaks) parsed.push_back(sexpr::parse_snak(s));
        if (parsed.size() == 1) return Fingerprint::snak(parsed.front());
        return Fingerprint::snaks(SnakSet(std::move(parsed)));
    }

    static SnakMask mask(const std::string& text) {
        if (text.empty()) return SnakMask::all();
        SnakMask m;
        std::stringstream in(text);
        std::string k;
        while (std::getline(in, k, ',')) {
            if (k == "value") m = m | SnakMask::only(SnakKind::value);
            else if (k == "some") m = m | SnakMask::only(SnakKind::some_value);
            else if (k == "no") m = m | SnakMask::only(SnakKind::no_value);
            else throw InvalidValue("unknown snak kind '" + k + "' (expected value, some or no)");
        }
        if (m.empty()) throw InvalidValue("--kinds names no snak kind");
        return m;
    }

    FilterPattern build() const {
        if (!pattern.empty()) {
            if (!subject.empty() || !property.empty() || !value.empty() || !subject_snaks.empty() ||
                !value_snaks.empty() || !kinds.empty())
                throw InvalidValue("--pattern excludes the other pattern flags");
            return sexpr::parse_filter_pattern(pattern);
        }
        std::optional<Fingerprint> p;
        if (!property.empty()) p = Fingerprint::entity(sexpr::parse_entity(property));
        return FilterPattern(fingerprint(subject, subject_snaks, "subject"), p, fingerprint(value, value_snaks, "value"),
                             mask(kinds));
    }
};

std::string query_text(const std::string& flag, std::istream& in) {
    if (!flag.empty()) return flag;
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// Rendering

nlohmann::json snak_json(const Snak& s) {
    nlohmann::json j;
    j["property"] = s.property().iri().str();
    switch (s.kind()) {
    case SnakKind::value:
        j["kind"] = "value";
        j["value"] = sexpr::print(*s.value());
        j["simple"] = rdf::to_ntriples(codec::simple_value(*s.value()));
        break;
    case SnakKind::some_value: j["kind"] = "some_value"; break;
    case SnakKind::no_value: j["kind"] = "no_value"; break;
    }
    return j;
}

nlohmann::json statement_json(const Statement& s) {
    return {{"subject", s.subject.iri().str()}, {"snak", snak_json(s.snak)}, {"sexp", sexpr::print(s)}};
}

void render(std::ostream& out, const std::string& format, const std::vector<AnnotatedStatement>& rows,
            bool annotated) {
    if (format == "sexp") {
        for (const auto& a : rows) out << (annotated ? sexpr::print(a) : sexpr::print(a.statement)) << "\n";
    } else if (format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& a : rows) {
            auto j = statement_json(a.statement);
            if (annotated) j["annotations"] = sexpr::print(a.annotations);
            arr.push_back(std::move(j));
        }
        out << arr.dump(2) << "\n";
    } else {
        rdf::Graph g;
        if (annotated) {
            for (const auto& es : codec::rank_batch(rows)) g.insert_all(codec::encode(es));
        } else {
            for (const auto& a : rows) g.insert(codec::truthy_triple(a.statement));
        }
        rdf::write_ntriples(out, g);
    }
}

std::vector<AnnotatedStatement> with_annotations(const Store& store, const std::vector<Statement>& statements) {
    std::vector<AnnotatedStatement> out;
    for (auto& [s, records] : store.get_annotations(statements)) out.push_back({s, records});
    return out;
}

void report_diagnostics(const StorePtr& store, std::ostream& err) {
    if (const auto* m = dynamic_cast<const mixer::MixerStore*>(store.get()))
        for (const auto& d : m->diagnostics()) err << "warning: " << d << "\n";
}

// ---------------------------------------------------------------------------
// Commands

int serve(const std::string& graph_path, int port, const std::string& host, std::ostream& out) {
    auto graph = load_graph(graph_path);
    rdf::Endpoint endpoint(graph, port, host);
    out << "serving " << graph->size() << " triples at " << endpoint.url() << std::endl;
    g_stop_serving = false;
    while (!g_stop_serving.load()) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    endpoint.stop();
    return ok;
}

int load(const std::string& input, const std::string& output, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!output.empty()) {
        file.open(output, std::ios::binary);
        if (!file) throw Error("cannot write " + output);
        sink = &file;
    }
    if (ends_with(input, ".sexp")) {
        auto f = load_fixture(input);
        auto g = codec::encode_dataset(f.statements, f.descriptors);
        rdf::write_ntriples(*sink, g);
        err << "encoded " << f.statements.size() << " statements and " << f.descriptors.size() << " descriptors into "
            << g.size() << " triples\n";
        return ok;
    }
    auto decoded = codec::decode(rdf::read_ntriples_file(input));
    for (const auto& es : decoded.statements)
        *sink << sexpr::print(AnnotatedStatement{es.statement, AnnotationRecordSet{es.annotation}}) << "\n";
    for (const auto& [e, d] : decoded.descriptors) *sink << sexpr::print(EntityDescriptor{e, d}) << "\n";
    for (const auto& d : decoded.diagnostics) err << "warning: " << d << "\n";
    err << "decoded " << decoded.statements.size() << " statement records and " << decoded.descriptors.size()
        << " descriptors\n";
    return ok;
}

int generate_bench(const std::string& dir, std::ostream& err) {
    std::filesystem::create_directories(dir);
    auto data = bench::chemistry_dataset();
    std::ofstream nt(dir + "/chemistry.nt", std::ios::binary);
    rdf::write_ntriples(nt, codec::encode_dataset(data.statements, data.descriptors));
    std::ofstream battery(dir + "/battery.txt", std::ios::binary);
    auto queries = bench::chemistry_battery();
    battery << bench::format_battery(queries);
    if (!nt || !battery) throw Error("cannot write into " + dir);
    err << "wrote " << data.statements.size() << " statements and " << queries.size() << " queries to " << dir << "\n";
    return ok;
}

} // namespace

StorePtr open_store(const std::string& spec, const StoreOptions& options) {
    auto [kind, rest] = split_scheme(spec);
    if (rest.empty()) throw InvalidValue("store spec '" + spec + "' has an empty location");
    if (kind == "memory") return memory_store(load_fixture(rest), options);
    if (kind == "rdf") return rdf_store(load_graph(rest), options);
    if (kind == "sparql") return sparql_store(rest, options);
    if (kind == "mapper") {
        auto at = rest.find('@');
        if (at == std::string::npos) throw InvalidValue("mapper store spec needs <spec.json>@<source>");
        auto source = open_executor(rest.substr(at + 1), options);
        return mapper::mapper_store(source, mapper::MappingSpec::load(rest.substr(0, at)), options);
    }
    throw InvalidValue("unknown store kind '" + kind + "' (expected sparql, rdf, memory or mapper)");
}

void stop_serving() noexcept { g_stop_serving = true; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    CLI::App app{"Query Wikidata-shaped knowledge sources through filter patterns", "kif"};
    app.require_subcommand(1);

    StoreFlags stores;
    PatternFlags pattern;
    std::optional<std::size_t> limit;
    std::string format = "sexp";
    bool annotated = false;
    std::vector<std::string> statements, entities;
    std::string language = "en", query, graph, host = "127.0.0.1", input, output, queries;
    int port = 0, runs = 30;

    auto* filter = app.add_subcommand("filter", "statements matching a pattern");
    stores.add(filter);
    pattern.add(filter);
    filter->add_option("--limit", limit, "maximum number of statements");
    filter->add_option("--format", format, "sexp, json or ntriples")->check(CLI::IsMember({"sexp", "json", "ntriples"}));
    filter->add_flag("--annotations", annotated, "inline annotation records");

    auto* count = app.add_subcommand("count", "number of statements matching a pattern");
    stores.add(count);
    pattern.add(count);

    auto* contains = app.add_subcommand("contains", "whether a statement is present");
    stores.add(contains);
    contains->add_option("--statement", statements, "(Statement ...)")->required()->expected(1);

    auto* annotations = app.add_subcommand("annotations", "annotation records of statements (stdin if none given)");
    stores.add(annotations);
    annotations->add_option("--statement", statements, "(Statement ...), repeatable");
    annotations->add_option("--format", format, "sexp, json or ntriples")
        ->check(CLI::IsMember({"sexp", "json", "ntriples"}));

    auto* describe = app.add_subcommand("describe", "label, description and aliases of entities");
    stores.add(describe);
    describe->add_option("--entity", entities, "entity, e.g. wd:Q7286 (repeatable)")->required();
    describe->add_option("--language", language, "language tag");
    describe->add_option("--format", format, "sexp or json")->check(CLI::IsMember({"sexp", "json"}));

    auto* serve_cmd = app.add_subcommand("serve", "serve a graph as a SPARQL endpoint until interrupted");
    serve_cmd->add_option("--graph", graph, "N-Triples file or S-expression fixture")->required();
    serve_cmd->add_option("--port", port, "port (0 picks one)");
    serve_cmd->add_option("--host", host, "address to bind");

    auto* load_cmd = app.add_subcommand("load", "encode a fixture as N-Triples, or decode N-Triples into a fixture");
    load_cmd->add_option("input", input, ".sexp fixture or .nt graph")->required();
    load_cmd->add_option("--output", output, "output file (default stdout)");

    auto* decode_cmd = app.add_subcommand("decode-sparql", "print the filter pattern of a SPARQL query");
    decode_cmd->add_option("--query", query, "query text (default stdin)");

    auto* query_cmd = app.add_subcommand("query", "answer a SPARQL query through the stores");
    stores.add(query_cmd);
    query_cmd->add_option("--query", query, "query text (default stdin)");

    auto* bench_cmd = app.add_subcommand("bench", "time filter queries; CSV of medians");
    stores.add(bench_cmd);
    bench_cmd->add_option("--queries", queries, "file with one '<id> (FilterPattern ...)' per line")->required();
    bench_cmd->add_option("--runs", runs, "runs per query")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--output", output, "CSV file (default stdout)");

    auto* gen_cmd = app.add_subcommand("generate-bench", "write the synthetic chemistry graph and query battery");
    gen_cmd->add_option("--out-dir", output, "directory")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        auto parsed = app.get_subcommands();
        err << (parsed.empty() ? app.help() : parsed.front()->help());
        return usage_error;
    }

    try {
        if (filter->parsed()) {
            auto store = stores.open();
            auto p = pattern.build();
            auto found = store->filter(p, limit).collect();
            std::vector<AnnotatedStatement> rows;
            if (annotated) rows = with_annotations(*store, found);
            else
                for (auto& s : found) rows.push_back({std::move(s), {}});
            render(out, format, rows, annotated);
            report_diagnostics(store, err);
        } else if (count->parsed()) {
            auto store = stores.open();
            out << store->count(pattern.build()) << "\n";
            report_diagnostics(store, err);
        } else if (contains->parsed()) {
            auto store = stores.open();
            out << (store->contains(sexpr::parse_statement(statements.front())) ? "true" : "false") << "\n";
        } else if (annotations->parsed()) {
            auto store = stores.open();
            std::vector<Statement> targets;
            for (const auto& s : statements) targets.push_back(sexpr::parse_statement(s));
            if (statements.empty()) {
                std::stringstream buf;
                buf << in.rdbuf();
                for (auto& obj : sexpr::parse_all(buf.str())) {
                    if (auto* s = std::get_if<Statement>(&obj)) targets.push_back(*s);
                    else if (auto* a = std::get_if<AnnotatedStatement>(&obj)) targets.push_back(a->statement);
                    else throw InvalidValue("annotations reads Statement forms");
                }
            }
            render(out, format, with_annotations(*store, targets), true);
        } else if (describe->parsed()) {
            auto store = stores.open();
            std::vector<Entity> es;
            for (const auto& e : entities) es.push_back(sexpr::parse_entity(e));
            auto found = store->get_descriptor(es, language);
            if (format == "json") {
                auto arr = nlohmann::json::array();
                for (const auto& [e, d] : found) {
                    nlohmann::json j{{"entity", e.iri().str()}};
                    j["label"] = d.label ? nlohmann::json(d.label->content()) : nlohmann::json();
                    j["description"] = d.description ? nlohmann::json(d.description->content()) : nlohmann::json();
                    j["aliases"] = nlohmann::json::array();
                    for (const auto& a : d.aliases) j["aliases"].push_back(a.content());
                    arr.push_back(std::move(j));
                }
                out << arr.dump(2) << "\n";
            } else {
                for (const auto& [e, d] : found) out << sexpr::print(EntityDescriptor{e, d}) << "\n";
            }
        } else if (serve_cmd->parsed()) {
            return serve(graph, port, host, out);
        } else if (load_cmd->parsed()) {
            return load(input, output, out, err);
        } else if (decode_cmd->parsed()) {
            out << sexpr::print(decoder::decode(query_text(query, in)).pattern) << "\n";
        } else if (query_cmd->parsed()) {
            auto store = stores.open();
            out << decoder::answer(*store, query_text(query, in)) << "\n";
            report_diagnostics(store, err);
        } else if (bench_cmd->parsed()) {
            // Cached answers would hide the endpoint time being measured.
            auto o = stores.options();
            o.cache_enabled = false;
            auto store = stores.open(o);
            auto rows = bench::run(*store, bench::parse_battery(read_file(queries)), runs);
            if (output.empty()) {
                out << bench::to_csv(rows);
            } else {
                std::ofstream file(output, std::ios::binary);
                file << bench::to_csv(rows);
                if (!file) throw Error("cannot write " + output);
            }
        } else if (gen_cmd->parsed()) {
            return generate_bench(output, err);
        }
    } catch (const TransportError& e) {
        err << "transport error: " << e.what() << "\n";
        return transport_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    return ok;
}

} // namespace kif::cli
