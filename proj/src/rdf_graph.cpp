#include "kif/rdf/graph.hpp"

#include <algorithm>
#include <cstdio>

#include "kif/errors.hpp"

namespace kif::rdf {

Term iri(std::string value) { return IriTerm{std::move(value)}; }

Term typed(std::string lexical, std::string_view datatype) {
    return Literal{std::move(lexical), std::string(datatype), {}};
}

Term plain(std::string lexical) { return Literal{std::move(lexical), std::string(xsd_string), {}}; }

Term lang(std::string lexical, std::string language) {
    return Literal{std::move(lexical), std::string(rdf_lang_string), std::move(language)};
}

bool is_iri(const Term& t) noexcept { return std::holds_alternative<IriTerm>(t); }

const std::string& iri_value(const Term& t) {
    if (const auto* i = std::get_if<IriTerm>(&t)) return i->value;
    throw Error("expected an IRI term, got a literal");
}

bool is_valid_iri(std::string_view s) noexcept {
    auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0) return false;
    for (std::size_t i = 0; i < colon; ++i) {
        char c = s[i];
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (i > 0 && ((c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.'));
        if (!ok) return false;
    }
    for (char c : s) {
        if (static_cast<unsigned char>(c) <= 0x20) return false;
        switch (c) {
        case '<': case '>': case '"': case '{': case '}': case '|': case '^': case '`': case '\\':
            return false;
        default: break;
        }
    }
    return true;
}

namespace {

void escape_into(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
                out += buf;
            } else {
                out += c;
            }
        }
    }
}

} // namespace

std::string to_ntriples(const Term& t) {
    std::string out;
    if (const auto* i = std::get_if<IriTerm>(&t)) {
        out += '<';
        out += i->value;
        out += '>';
        return out;
    }
    const auto& l = std::get<Literal>(t);
    out += '"';
    escape_into(out, l.lexical);
    out += '"';
    if (!l.language.empty()) {
        out += '@';
        out += l.language;
    } else if (l.datatype != xsd_string) {
        out += "^^<";
        out += l.datatype;
        out += '>';
    }
    return out;
}

std::string to_ntriples(const Triple& t) {
    std::string out = to_ntriples(Term(t.subject));
    out += ' ';
    out += to_ntriples(Term(t.predicate));
    out += ' ';
    out += to_ntriples(t.object);
    out += " .";
    return out;
}

TermId Graph::intern(const Term& t) {
    auto key = to_ntriples(t);
    auto [it, inserted] = term_ids_.emplace(std::move(key), static_cast<TermId>(terms_.size()));
    if (inserted) terms_.push_back(t);
    return it->second;
}

std::optional<TermId> Graph::find(const Term& t) const {
    auto it = term_ids_.find(to_ntriples(t));
    if (it == term_ids_.end()) return std::nullopt;
    return it->second;
}

bool Graph::insert(const Triple& t) {
    auto key = to_ntriples(t);
    if (triple_index_.count(key)) return false;
    Ids ids{intern(Term(t.subject)), intern(Term(t.predicate)), intern(t.object)};
    auto index = static_cast<std::uint32_t>(triples_.size());
    triple_index_.emplace(std::move(key), index);
    triples_.push_back(ids);
    by_s_[ids.s].push_back(index);
    by_p_[ids.p].push_back(index);
    by_o_[ids.o].push_back(index);
    by_sp_[pair(ids.s, ids.p)].push_back(index);
    by_po_[pair(ids.p, ids.o)].push_back(index);
    return true;
}

bool Graph::contains(const Triple& t) const { return triple_index_.count(to_ntriples(t)) > 0; }

std::vector<Triple> Graph::triples() const {
    std::vector<Triple> out;
    out.reserve(triples_.size());
    for (const auto& ids : triples_)
        out.push_back({std::get<IriTerm>(terms_[ids.s]), std::get<IriTerm>(terms_[ids.p]), terms_[ids.o]});
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

const std::vector<std::uint32_t>* lookup(const auto& index, auto key) {
    auto it = index.find(key);
    return it == index.end() ? nullptr : &it->second;
}

const std::vector<std::uint32_t> kEmpty;

} // namespace

const std::vector<std::uint32_t>* Graph::candidates(std::optional<TermId> s, std::optional<TermId> p,
                                                   std::optional<TermId> o) const {
    const std::vector<std::uint32_t>* best = nullptr;
    auto consider = [&](const std::vector<std::uint32_t>* v) {
        if (!v) v = &kEmpty;
        if (!best || v->size() < best->size()) best = v;
    };
    if (s && p) consider(lookup(by_sp_, pair(*s, *p)));
    if (p && o) consider(lookup(by_po_, pair(*p, *o)));
    if (s) consider(lookup(by_s_, *s));
    if (p) consider(lookup(by_p_, *p));
    if (o) consider(lookup(by_o_, *o));
    return best;
}

std::size_t Graph::estimate(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o) const {
    const auto* c = candidates(s, p, o);
    return c ? c->size() : triples_.size();
}

void Graph::match(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
                  const std::function<void(const Ids&)>& f) const {
    auto check = [&](const Ids& ids) {
        if ((s && ids.s != *s) || (p && ids.p != *p) || (o && ids.o != *o)) return;
        f(ids);
    };
    if (const auto* c = candidates(s, p, o)) {
        for (auto i : *c) check(triples_[i]);
    } else {
        for (const auto& ids : triples_) check(ids);
    }
}

} // namespace kif::rdf
