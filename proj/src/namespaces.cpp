#include "kif/namespaces.hpp"

#include <array>

namespace kif::ns {

namespace {

constexpr std::array<Namespace, 21> kTable{{
    {"wd", wd},         {"wds", wds},       {"wdv", wdv},       {"wdref", wdref},
    {"wdt", wdt},       {"p", p},           {"ps", ps},         {"psv", psv},
    {"pq", pq},         {"pqv", pqv},       {"pr", pr},         {"prv", prv},
    {"wdno", wdno},     {"wdgenid", wdgenid}, {"wikibase", wikibase}, {"prov", prov},
    {"rdf", rdf},       {"rdfs", rdfs},     {"schema", schema}, {"skos", skos},
    {"xsd", xsd},
}};

bool is_local_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
}

} // namespace

std::span<const Namespace> table() noexcept { return kTable; }

std::optional<std::string_view> base_for(std::string_view prefix) noexcept {
    for (const auto& n : kTable)
        if (n.prefix == prefix) return n.base;
    return std::nullopt;
}

std::optional<Split> split(std::string_view iri) noexcept {
    const Namespace* best = nullptr;
    for (const auto& n : kTable) {
        if (iri.size() < n.base.size() || iri.substr(0, n.base.size()) != n.base) continue;
        if (!best || n.base.size() > best->base.size()) best = &n;
    }
    if (!best) return std::nullopt;
    auto local = iri.substr(best->base.size());
    if (local.find_first_of("/#") != std::string_view::npos) return std::nullopt;
    return Split{*best, local};
}

std::optional<std::string_view> local_in(std::string_view iri, std::string_view base) noexcept {
    auto s = split(iri);
    if (!s || s->ns.base != base) return std::nullopt;
    return s->local;
}

bool is_safe_local(std::string_view local) noexcept {
    if (local.empty()) return false;
    if (local.front() == '-' || local.front() == '.' || local.back() == '.') return false;
    for (char c : local)
        if (!is_local_char(c)) return false;
    return true;
}

std::optional<std::string> compact(std::string_view iri) {
    auto s = split(iri);
    if (!s || !is_safe_local(s->local)) return std::nullopt;
    std::string out(s->ns.prefix);
    out += ':';
    out += s->local;
    return out;
}

std::string expand(std::string_view base, std::string_view local) {
    std::string out(base);
    out += local;
    return out;
}

} // namespace kif::ns
