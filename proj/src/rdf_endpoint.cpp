#include "kif/rdf/endpoint.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "kif/errors.hpp"
#include "kif/rdf/sparql.hpp"

namespace kif::rdf {

struct Endpoint::Server {
    httplib::Server http;
};

std::string answer_query(const Graph& g, std::string_view query) {
    return to_results_json(match_bgp(g, parse_sparql(query)));
}

Endpoint::Endpoint(std::shared_ptr<const Graph> graph, int port, std::string host)
    : server_(std::make_unique<Server>()), graph_(std::move(graph)), host_(std::move(host)) {
    auto handle = [this](const httplib::Request& req, httplib::Response& res) {
        ++requests_;
        std::string query;
        if (req.method == "GET" || req.has_param("query")) {
            query = req.get_param_value("query");
        } else {
            auto type = req.get_header_value("Content-Type");
            if (type.rfind("application/sparql-query", 0) == 0) {
                query = req.body;
            } else {
                res.status = 415;
                res.set_content("unsupported content type '" + type + "'", "text/plain");
                return;
            }
        }
        if (query.empty()) {
            res.status = 400;
            res.set_content("missing query", "text/plain");
            return;
        }
        try {
            res.set_content(answer_query(*graph_, query), "application/sparql-results+json");
        } catch (const ParseError& e) {
            res.status = 400;
            res.set_content(e.what(), "text/plain");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(e.what(), "text/plain");
        }
    };
    for (const char* path : {"/sparql", "/"}) {
        server_->http.Get(path, handle);
        server_->http.Post(path, handle);
    }
    if (port == 0) {
        port_ = server_->http.bind_to_any_port(host_.c_str());
    } else if (server_->http.bind_to_port(host_.c_str(), port)) {
        port_ = port;
    } else {
        port_ = -1;
    }
    if (port_ < 0) throw TransportError("cannot bind " + host_ + ":" + std::to_string(port), url(), 0);
    thread_ = std::thread([this] { server_->http.listen_after_bind(); });
    server_->http.wait_until_ready();
}

Endpoint::~Endpoint() {
    stop();
    if (thread_.joinable()) thread_.join();
}

std::string Endpoint::url() const { return "http://" + host_ + ":" + std::to_string(port_) + "/sparql"; }

void Endpoint::wait() {
    if (thread_.joinable()) thread_.join();
}

void Endpoint::stop() { server_->http.stop(); }

} // namespace kif::rdf
