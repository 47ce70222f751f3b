#pragma once
// Overhead benchmark: time spent in the library versus time spent waiting on
// endpoints, per filter query, as medians over repeated runs.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kif/store.hpp"

namespace kif::bench {

struct Query {
    std::string id;
    FilterPattern pattern;
};

// Deterministic synthetic chemistry data: compounds with formulas, InChI
// strings, masses, solubilities with qualifiers, melting points, classes,
// references, a few deprecated, some-value and no-value statements, and
// English and Portuguese labels.
Fixture chemistry_dataset(int compounds = 80, std::uint64_t seed = 1);

// 53 queries: the first 21 of 32 templates instantiated twice, the rest once.
std::vector<Query> chemistry_battery(std::uint64_t seed = 1);
inline constexpr std::size_t kTemplates = 32;

// One query per line: `<id> (FilterPattern ...)`. Blank lines are skipped.
// Throws ParseError naming the line.
std::vector<Query> parse_battery(std::string_view text);
std::string format_battery(const std::vector<Query>& queries);

struct Row {
    std::string id;
    double total_ms = 0;
    double api_ms = 0;
    double overhead_fraction = 0;  // api_ms / total_ms; 1 when total_ms is 0
    std::size_t results = 0;
};

// Runs each query `runs` times in sequence (draining the stream). total_ms
// is the median wall time on a monotonic clock; api_ms the median of wall
// time minus time spent inside HTTP requests, clamped at zero.
std::vector<Row> run(const Store& store, const std::vector<Query>& queries, int runs = 30);

// RFC 4180 with header query_id,total_ms,api_ms,overhead_fraction.
std::string to_csv(const std::vector<Row>& rows);

} // namespace kif::bench
