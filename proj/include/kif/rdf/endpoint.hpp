#pragma once
// SPARQL protocol endpoint over an immutable graph snapshot.

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "kif/rdf/graph.hpp"

namespace kif::rdf {

// Serves GET ?query=, POST application/sparql-query and POST form bodies on
// /sparql and /. Out-of-subset or malformed queries get HTTP 400 with the
// diagnostic as a text/plain body. The server runs on a background thread
// from construction until destruction.
class Endpoint {
public:
    // Port 0 picks an ephemeral port.
    explicit Endpoint(std::shared_ptr<const Graph> graph, int port = 0, std::string host = "127.0.0.1");
    ~Endpoint();

    Endpoint(const Endpoint&) = delete;
    Endpoint& operator=(const Endpoint&) = delete;

    int port() const noexcept { return port_; }
    std::string url() const;  // http://host:port/sparql
    std::size_t requests_served() const noexcept { return requests_.load(); }

    // Blocks until stop() is called from another thread or a signal handler.
    void wait();
    void stop();

private:
    struct Server;
    std::unique_ptr<Server> server_;
    std::shared_ptr<const Graph> graph_;
    std::string host_;
    int port_ = 0;
    std::atomic<std::size_t> requests_{0};
    std::thread thread_;
};

// Answers one query text against `g`: the results JSON body, or throws
// ParseError/UnsupportedQuery.
std::string answer_query(const Graph& g, std::string_view query);

} // namespace kif::rdf
