#pragma once
// Minimal blocking HTTP client used by SPARQL-backed stores.

#include <chrono>
#include <cstdint>
#include <string>

namespace kif::http {

struct Response {
    int status = 0;
    std::string body;
    std::string content_type;
};

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string path;    // starts with '/'
};

// Throws Error for URLs that are not http(s)://host[:port][/path].
Url parse_url(const std::string& url);

// Throws TransportError when no response is received.
Response get(const std::string& url, std::chrono::milliseconds timeout);
Response post(const std::string& url, const std::string& body, const std::string& content_type,
              std::chrono::milliseconds timeout);

// Process-wide totals over every get() and post() call, including failed
// ones. Callers measure intervals by differencing two snapshots.
struct Stats {
    std::uint64_t requests = 0;
    std::chrono::nanoseconds elapsed{0};
};

Stats stats() noexcept;

} // namespace kif::http
