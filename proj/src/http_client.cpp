#include "kif/http.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <atomic>

#include "kif/errors.hpp"

namespace kif::http {

Url parse_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error("invalid endpoint URL '" + url + "'");
    auto scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") throw Error("unsupported URL scheme in '" + url + "'");
    auto path_start = url.find('/', scheme_end + 3);
    Url u;
    u.origin = url.substr(0, path_start);
    u.path = path_start == std::string::npos ? "/" : url.substr(path_start);
    if (u.origin.size() == scheme_end + 3) throw Error("invalid endpoint URL '" + url + "'");
    return u;
}

namespace {

std::atomic<std::uint64_t> g_requests{0};
std::atomic<std::int64_t> g_elapsed_ns{0};

// Adds the lifetime of the scope to the global totals.
class Timed {
public:
    Timed() : start_(std::chrono::steady_clock::now()) {}
    ~Timed() {
        auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_);
        g_requests.fetch_add(1, std::memory_order_relaxed);
        g_elapsed_ns.fetch_add(ns.count(), std::memory_order_relaxed);
    }

private:
    std::chrono::steady_clock::time_point start_;
};

httplib::Client client_for(const Url& u, std::chrono::milliseconds timeout) {
    httplib::Client cli(u.origin);
    cli.set_connection_timeout(timeout);
    cli.set_read_timeout(timeout);
    cli.set_write_timeout(timeout);
    cli.set_keep_alive(false);
    return cli;
}

Response convert(const httplib::Result& res, const std::string& url) {
    if (!res) throw TransportError("request to " + url + " failed: " + httplib::to_string(res.error()), url, 0);
    return Response{res->status, res->body, res->get_header_value("Content-Type")};
}

} // namespace

Response get(const std::string& url, std::chrono::milliseconds timeout) {
    auto u = parse_url(url);
    Timed timed;
    auto cli = client_for(u, timeout);
    return convert(cli.Get(u.path), url);
}

Response post(const std::string& url, const std::string& body, const std::string& content_type,
              std::chrono::milliseconds timeout) {
    auto u = parse_url(url);
    Timed timed;
    auto cli = client_for(u, timeout);
    httplib::Headers headers = {{"Accept", "application/sparql-results+json"}};
    return convert(cli.Post(u.path, headers, body, content_type), url);
}

Stats stats() noexcept {
    return Stats{g_requests.load(std::memory_order_relaxed),
                 std::chrono::nanoseconds(g_elapsed_ns.load(std::memory_order_relaxed))};
}

} // namespace kif::http
