#include "kif/sexpr.hpp"

#include <cstdio>
#include <optional>

#include "kif/namespaces.hpp"

namespace kif::sexpr {

namespace {

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// ---------------------------------------------------------------------------
// Syntax tree

struct Node {
    Token::Kind kind;  // lparen marks a list
    std::string text;
    std::vector<Node> items;
    std::size_t line = 0;
    std::size_t column = 0;

    bool is_list() const { return kind == Token::Kind::lparen; }
    bool is_symbol() const { return kind == Token::Kind::symbol; }
    bool is_symbol(std::string_view s) const { return kind == Token::Kind::symbol && text == s; }
};

// Errors about a form are reported at its head symbol.
[[noreturn]] void fail(const std::string& message, const Node& at) {
    const Node& where = at.is_list() && !at.items.empty() ? at.items.front() : at;
    throw ParseError(message, where.line, where.column);
}

class TreeBuilder {
public:
    explicit TreeBuilder(std::vector<Token> tokens, std::size_t end_line, std::size_t end_column)
        : tokens_(std::move(tokens)), end_line_(end_line), end_column_(end_column) {}

    bool done() const { return pos_ >= tokens_.size(); }

    Node next() {
        if (done()) throw ParseError("unexpected end of input", end_line_, end_column_);
        const Token& t = tokens_[pos_++];
        Node node{t.kind, t.lexeme, {}, t.line, t.column};
        if (t.kind == Token::Kind::rparen) fail("unexpected ')'", node);
        if (t.kind != Token::Kind::lparen) return node;
        for (;;) {
            if (done()) throw ParseError("unclosed '(' opened at " + std::to_string(t.line) + ":" +
                                             std::to_string(t.column),
                                         end_line_, end_column_);
            if (tokens_[pos_].kind == Token::Kind::rparen) {
                ++pos_;
                return node;
            }
            node.items.push_back(next());
        }
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t end_line_;
    std::size_t end_column_;
};

std::pair<std::size_t, std::size_t> end_position(std::string_view text) {
    std::size_t line = 1, column = 1;
    for (char c : text) {
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

// ---------------------------------------------------------------------------
// Interpretation of the tree into model objects

const std::string& head_of(const Node& n) {
    if (!n.is_list() || n.items.empty() || !n.items.front().is_symbol()) fail("expected a form", n);
    return n.items.front().text;
}

bool has_head(const Node& n, std::string_view head) {
    return n.is_list() && !n.items.empty() && n.items.front().is_symbol(head);
}

void expect_arity(const Node& n, std::size_t min, std::size_t max) {
    std::size_t got = n.items.size() - 1;
    if (got >= min && got <= max) return;
    std::string expected = min == max ? std::to_string(min)
                         : max == SIZE_MAX ? "at least " + std::to_string(min)
                                           : std::to_string(min) + " to " + std::to_string(max);
    fail(n.items.front().text + " expects " + expected + " argument(s), got " + std::to_string(got),
         n);
}

template <class F>
auto guarded(const Node& at, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const InvalidValue& e) {
        fail(e.what(), at);
    }
}

struct Prefixed {
    std::string_view base;
    std::string_view local;
};

std::optional<Prefixed> split_prefixed(const Node& n) {
    if (!n.is_symbol()) return std::nullopt;
    auto colon = n.text.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::string_view prefix(n.text.data(), colon);
    std::string_view local(n.text.data() + colon + 1, n.text.size() - colon - 1);
    auto base = ns::base_for(prefix);
    if (!base) fail("unknown prefix '" + std::string(prefix) + "'", n);
    if (!ns::is_safe_local(local)) fail("invalid prefixed name '" + n.text + "'", n);
    return Prefixed{*base, local};
}

Iri iri_arg(const Node& n) {
    if (n.kind == Token::Kind::string) return guarded(n, [&] { return Iri(n.text); });
    if (auto p = split_prefixed(n)) return Iri(ns::expand(p->base, p->local));
    if (has_head(n, "IRI")) {
        expect_arity(n, 1, 1);
        return iri_arg(n.items[1]);
    }
    fail("expected an IRI", n);
}

Entity entity_from_prefixed(const Prefixed& p, std::optional<EntityKind> expected) {
    Iri iri(ns::expand(p.base, p.local));
    EntityKind kind = expected ? *expected
                    : (p.base == ns::wd && ns::is_property_id(p.local)) ? EntityKind::property
                                                                       : EntityKind::item;
    return kind == EntityKind::property ? Entity::property(std::move(iri)) : Entity::item(std::move(iri));
}

Entity entity(const Node& n, std::optional<EntityKind> expected = std::nullopt) {
    Entity e = [&] {
        if (has_head(n, "Item")) {
            expect_arity(n, 1, 1);
            return Entity::item(iri_arg(n.items[1]));
        }
        if (has_head(n, "Property")) {
            expect_arity(n, 1, 1);
            return Entity::property(iri_arg(n.items[1]));
        }
        if (auto p = split_prefixed(n)) return entity_from_prefixed(*p, expected);
        fail("expected an entity", n);
    }();
    if (expected && e.kind() != *expected)
        fail(std::string("expected ") + (*expected == EntityKind::item ? "an item" : "a property"), n);
    return e;
}

bool is_nil(const Node& n) { return n.is_symbol("nil"); }

Decimal decimal_arg(const Node& n) {
    if (n.kind != Token::Kind::number) fail("expected a number", n);
    return Decimal::parse(n.text);
}

int int_arg(const Node& n) {
    if (n.kind != Token::Kind::number || n.text.find('.') != std::string::npos)
        fail("expected an integer", n);
    try {
        return std::stoi(n.text);
    } catch (const std::exception&) {
        fail("integer out of range", n);
    }
}

std::string string_arg(const Node& n) {
    if (n.kind != Token::Kind::string) fail("expected a string", n);
    return n.text;
}

Quantity quantity(const Node& n) {
    expect_arity(n, 1, 4);
    Decimal amount = decimal_arg(n.items[1]);
    std::optional<Entity> unit;
    std::optional<Decimal> lower, upper;
    std::size_t i = 2;
    // Slots are unit, lower, upper; a number in the unit slot means no unit.
    if (i < n.items.size() && n.items[i].kind != Token::Kind::number) {
        if (!is_nil(n.items[i])) unit = entity(n.items[i], EntityKind::item);
        ++i;
    }
    if (i < n.items.size()) {
        if (!is_nil(n.items[i])) lower = decimal_arg(n.items[i]);
        ++i;
    }
    if (i < n.items.size()) {
        if (!is_nil(n.items[i])) upper = decimal_arg(n.items[i]);
        ++i;
    }
    if (i < n.items.size()) fail("Quantity has too many arguments", n.items[i]);
    return guarded(n, [&] { return Quantity(amount, unit, lower, upper); });
}

Time time(const Node& n) {
    expect_arity(n, 1, 4);
    const Node& ts_node = n.items[1];
    if (ts_node.kind != Token::Kind::symbol && ts_node.kind != Token::Kind::string)
        fail("expected a timestamp", ts_node);
    Timestamp ts = guarded(ts_node, [&] { return Timestamp::parse(ts_node.text); });
    int prec = precision::day;
    int tz = 0;
    std::optional<Entity> calendar;
    if (n.items.size() > 2 && !is_nil(n.items[2])) prec = int_arg(n.items[2]);
    if (n.items.size() > 3 && !is_nil(n.items[3])) tz = int_arg(n.items[3]);
    if (n.items.size() > 4 && !is_nil(n.items[4])) calendar = entity(n.items[4], EntityKind::item);
    return guarded(n, [&] { return Time(ts, prec, tz, calendar); });
}

Text text(const Node& n) {
    if (!has_head(n, "Text")) fail("expected (Text ...)", n);
    expect_arity(n, 1, 2);
    std::string content = string_arg(n.items[1]);
    std::string lang = "en";
    if (n.items.size() > 2) {
        const Node& l = n.items[2];
        if (l.kind != Token::Kind::string && l.kind != Token::Kind::symbol)
            fail("expected a language tag", l);
        lang = l.text;
    }
    return guarded(n, [&] { return Text(std::move(content), std::move(lang)); });
}

Value value(const Node& n) {
    if (n.kind == Token::Kind::number) return Quantity(decimal_arg(n));
    if (n.kind == Token::Kind::string) return String(n.text);
    if (auto p = split_prefixed(n)) {
        if (p->base == ns::wd) return entity_from_prefixed(*p, std::nullopt);
        return Iri(ns::expand(p->base, p->local));
    }
    if (!n.is_list()) fail("expected a value", n);
    const std::string& head = head_of(n);
    if (head == "Item" || head == "Property") return entity(n);
    if (head == "IRI") return iri_arg(n);
    if (head == "Text") return text(n);
    if (head == "String") {
        expect_arity(n, 1, 1);
        return String(string_arg(n.items[1]));
    }
    if (head == "Quantity") return quantity(n);
    if (head == "Time") return time(n);
    fail("unknown value form '" + head + "'", n.items.front());
}

Entity property_arg(const Node& n) { return entity(n, EntityKind::property); }

Snak snak(const Node& n) {
    const std::string& head = head_of(n);
    if (head == "ValueSnak") {
        expect_arity(n, 2, 2);
        return Snak::value_snak(property_arg(n.items[1]), value(n.items[2]));
    }
    if (head == "SomeValueSnak") {
        expect_arity(n, 1, 1);
        return Snak::some_value(property_arg(n.items[1]));
    }
    if (head == "NoValueSnak") {
        expect_arity(n, 1, 1);
        return Snak::no_value(property_arg(n.items[1]));
    }
    fail("expected a snak, got '" + head + "'", n.items.front());
}

bool is_snak_form(const Node& n) {
    return has_head(n, "ValueSnak") || has_head(n, "SomeValueSnak") || has_head(n, "NoValueSnak");
}

Statement statement(const Node& n) {
    if (!has_head(n, "Statement")) fail("expected (Statement ...)", n);
    expect_arity(n, 2, 2);
    return Statement{entity(n.items[1]), snak(n.items[2])};
}

template <class T, class F>
CanonicalSet<T> set_of(const Node& n, std::string_view head, F&& element) {
    if (!has_head(n, head)) fail("expected (" + std::string(head) + " ...)", n);
    std::vector<T> items;
    for (std::size_t i = 1; i < n.items.size(); ++i) items.push_back(element(n.items[i]));
    return CanonicalSet<T>(std::move(items));
}

ReferenceRecord reference(const Node& n) {
    if (!has_head(n, "ReferenceRecord")) fail("expected (ReferenceRecord ...)", n);
    expect_arity(n, 1, SIZE_MAX);
    std::vector<Snak> snaks;
    for (std::size_t i = 1; i < n.items.size(); ++i) snaks.push_back(snak(n.items[i]));
    return ReferenceRecord(SnakSet(std::move(snaks)));
}

std::optional<Rank> rank_symbol(const Node& n) {
    if (!n.is_symbol()) return std::nullopt;
    if (n.text == "PreferredRank" || n.text == "Preferred") return Rank::preferred;
    if (n.text == "NormalRank" || n.text == "Normal") return Rank::normal;
    if (n.text == "DeprecatedRank" || n.text == "Deprecated") return Rank::deprecated;
    return std::nullopt;
}

AnnotationRecord annotation(const Node& n) {
    if (!has_head(n, "AnnotationRecord")) fail("expected (AnnotationRecord ...)", n);
    expect_arity(n, 0, 3);
    AnnotationRecord record;
    std::size_t i = 1;
    if (i < n.items.size() && has_head(n.items[i], "SnakSet"))
        record.qualifiers = set_of<Snak>(n.items[i++], "SnakSet", snak);
    if (i < n.items.size() && has_head(n.items[i], "ReferenceRecordSet"))
        record.references = set_of<ReferenceRecord>(n.items[i++], "ReferenceRecordSet", reference);
    if (i < n.items.size()) {
        auto r = rank_symbol(n.items[i]);
        if (!r) fail("expected a rank", n.items[i]);
        record.rank = *r;
        ++i;
    }
    if (i < n.items.size()) fail("unexpected argument in AnnotationRecord", n.items[i]);
    return record;
}

Descriptor descriptor(const Node& n) {
    if (!has_head(n, "Descriptor")) fail("expected (Descriptor ...)", n);
    expect_arity(n, 0, 3);
    Descriptor d;
    if (n.items.size() > 1 && !is_nil(n.items[1])) d.label = text(n.items[1]);
    if (n.items.size() > 2 && !is_nil(n.items[2])) d.description = text(n.items[2]);
    if (n.items.size() > 3) d.aliases = set_of<Text>(n.items[3], "TextSet", text);
    return d;
}

Fingerprint fingerprint(const Node& n, std::optional<EntityKind> bare_kind = std::nullopt) {
    if (is_snak_form(n)) return Fingerprint::snak(snak(n));
    if (has_head(n, "SnakSet")) {
        auto snaks = set_of<Snak>(n, "SnakSet", snak);
        if (snaks.empty()) fail("empty snak-set fingerprint", n);
        return Fingerprint::snaks(std::move(snaks));
    }
    if (bare_kind && n.is_symbol()) return Fingerprint::entity(entity(n, bare_kind));
    return Fingerprint::constant(value(n));
}

SnakMask snak_mask(const Node& n) {
    if (!has_head(n, "SnakMask")) fail("expected (SnakMask ...)", n);
    std::vector<SnakKind> kinds;
    for (std::size_t i = 1; i < n.items.size(); ++i) {
        const Node& k = n.items[i];
        if (k.is_symbol("ValueSnak")) kinds.push_back(SnakKind::value);
        else if (k.is_symbol("SomeValueSnak")) kinds.push_back(SnakKind::some_value);
        else if (k.is_symbol("NoValueSnak")) kinds.push_back(SnakKind::no_value);
        else fail("expected a snak kind", k);
    }
    SnakMask mask;
    for (auto k : kinds) mask = mask | SnakMask::only(k);
    if (mask.empty()) fail("empty snak mask", n);
    return mask;
}

FilterPattern filter_pattern(const Node& n) {
    if (!has_head(n, "FilterPattern")) fail("expected (FilterPattern ...)", n);
    expect_arity(n, 0, 4);
    std::optional<Fingerprint> s, p, v;
    SnakMask mask = SnakMask::all();
    if (n.items.size() > 1 && !is_nil(n.items[1])) s = fingerprint(n.items[1]);
    if (n.items.size() > 2 && !is_nil(n.items[2])) p = fingerprint(n.items[2], EntityKind::property);
    if (n.items.size() > 3 && !is_nil(n.items[3])) v = fingerprint(n.items[3]);
    if (n.items.size() > 4) mask = snak_mask(n.items[4]);
    return guarded(n, [&] { return FilterPattern(s, p, v, mask); });
}

Object object(const Node& n) {
    if (auto r = rank_symbol(n)) return *r;
    if (!n.is_list()) return value(n);
    const std::string& head = head_of(n);
    if (head == "ValueSnak" || head == "SomeValueSnak" || head == "NoValueSnak") return snak(n);
    if (head == "Statement") return statement(n);
    if (head == "ReferenceRecord") return reference(n);
    if (head == "AnnotationRecord") return annotation(n);
    if (head == "SnakSet") return set_of<Snak>(n, "SnakSet", snak);
    if (head == "ReferenceRecordSet") return set_of<ReferenceRecord>(n, head, reference);
    if (head == "AnnotationRecordSet") return set_of<AnnotationRecord>(n, head, annotation);
    if (head == "TextSet") return set_of<Text>(n, head, text);
    if (head == "Descriptor") return descriptor(n);
    if (head == "FilterPattern") return filter_pattern(n);
    if (head == "AnnotatedStatement") {
        expect_arity(n, 1, SIZE_MAX);
        AnnotatedStatement a{statement(n.items[1]), {}};
        for (std::size_t i = 2; i < n.items.size(); ++i) a.annotations.insert(annotation(n.items[i]));
        return a;
    }
    if (head == "EntityDescriptor") {
        expect_arity(n, 2, 2);
        return EntityDescriptor{entity(n.items[1]), descriptor(n.items[2])};
    }
    if (head == "Item" || head == "Property" || head == "IRI" || head == "Text" || head == "String" ||
        head == "Quantity" || head == "Time")
        return value(n);
    fail("unknown head symbol '" + head + "'", n.items.front());
}

Node single_tree(std::string_view text) {
    auto [line, column] = end_position(text);
    TreeBuilder builder(tokenize(text), line, column);
    Node node = builder.next();
    if (!builder.done()) {
        Node extra = builder.next();
        fail("unexpected trailing input", extra);
    }
    return node;
}

// ---------------------------------------------------------------------------
// Printing

class Printer {
public:
    explicit Printer(PrintMode mode) : mode_(mode) {}

    std::string take() { return std::move(out_); }

    void iri_body(const Iri& iri) {
        if (mode_ == PrintMode::compact) {
            if (auto c = ns::compact(iri.str())) {
                out_ += *c;
                return;
            }
        }
        out_ += "(IRI ";
        out_ += quote(iri.str());
        out_ += ')';
    }

    void operator()(const Iri& iri) {
        if (mode_ == PrintMode::compact) {
            if (auto c = ns::compact(iri.str())) {
                out_ += "(IRI ";
                out_ += *c;
                out_ += ')';
                return;
            }
        }
        out_ += "(IRI ";
        out_ += quote(iri.str());
        out_ += ')';
    }

    void operator()(const Entity& e) {
        out_ += e.is_item() ? "(Item " : "(Property ";
        iri_body(e.iri());
        out_ += ')';
    }

    void operator()(const Text& t) {
        out_ += "(Text ";
        out_ += quote(t.content());
        out_ += ' ';
        out_ += quote(t.language());
        out_ += ')';
    }

    void operator()(const String& s) {
        out_ += "(String ";
        out_ += quote(s.content());
        out_ += ')';
    }

    void operator()(const Quantity& q) {
        out_ += "(Quantity ";
        out_ += q.amount().str();
        int last = q.upper() ? 3 : q.lower() ? 2 : q.unit() ? 1 : 0;
        if (last >= 1) {
            out_ += ' ';
            if (q.unit()) (*this)(*q.unit());
            else out_ += "nil";
        }
        if (last >= 2) {
            out_ += ' ';
            out_ += q.lower() ? q.lower()->str() : "nil";
        }
        if (last >= 3) {
            out_ += ' ';
            out_ += q.upper()->str();
        }
        out_ += ')';
    }

    void operator()(const Time& t) {
        out_ += "(Time ";
        out_ += t.precision() <= precision::day ? t.timestamp().date_string()
                                                : t.timestamp().iso_string();
        out_ += ' ';
        out_ += std::to_string(t.precision());
        out_ += ' ';
        out_ += std::to_string(t.timezone());
        if (t.calendar()) {
            out_ += ' ';
            (*this)(*t.calendar());
        }
        out_ += ')';
    }

    void operator()(const Value& v) {
        std::visit([this](const auto& x) { (*this)(x); }, v);
    }

    void operator()(const Snak& s) {
        switch (s.kind()) {
        case SnakKind::value:
            out_ += "(ValueSnak ";
            (*this)(s.property());
            out_ += ' ';
            (*this)(*s.value());
            break;
        case SnakKind::some_value:
            out_ += "(SomeValueSnak ";
            (*this)(s.property());
            break;
        case SnakKind::no_value:
            out_ += "(NoValueSnak ";
            (*this)(s.property());
            break;
        }
        out_ += ')';
    }

    void operator()(const Statement& s) {
        out_ += "(Statement ";
        (*this)(s.subject);
        out_ += ' ';
        (*this)(s.snak);
        out_ += ')';
    }

    template <class T>
    void set(std::string_view head, const CanonicalSet<T>& items) {
        out_ += '(';
        out_ += head;
        for (const auto& x : items) {
            out_ += ' ';
            (*this)(x);
        }
        out_ += ')';
    }

    void operator()(const ReferenceRecord& r) { set("ReferenceRecord", r.snaks()); }
    void operator()(const SnakSet& s) { set("SnakSet", s); }
    void operator()(const ReferenceRecordSet& s) { set("ReferenceRecordSet", s); }
    void operator()(const AnnotationRecordSet& s) { set("AnnotationRecordSet", s); }
    void operator()(const TextSet& s) { set("TextSet", s); }

    void operator()(Rank r) {
        switch (r) {
        case Rank::preferred: out_ += "PreferredRank"; break;
        case Rank::normal: out_ += "NormalRank"; break;
        case Rank::deprecated: out_ += "DeprecatedRank"; break;
        }
    }

    void operator()(const AnnotationRecord& a) {
        out_ += "(AnnotationRecord ";
        (*this)(a.qualifiers);
        out_ += ' ';
        (*this)(a.references);
        out_ += ' ';
        (*this)(a.rank);
        out_ += ')';
    }

    void operator()(const Descriptor& d) {
        out_ += "(Descriptor ";
        if (d.label) (*this)(*d.label);
        else out_ += "nil";
        out_ += ' ';
        if (d.description) (*this)(*d.description);
        else out_ += "nil";
        out_ += ' ';
        (*this)(d.aliases);
        out_ += ')';
    }

    void operator()(const Fingerprint& f) {
        std::visit([this](const auto& x) { (*this)(x); }, f.body());
    }

    void operator()(SnakMask m) {
        out_ += "(SnakMask";
        if (m.has(SnakKind::value)) out_ += " ValueSnak";
        if (m.has(SnakKind::some_value)) out_ += " SomeValueSnak";
        if (m.has(SnakKind::no_value)) out_ += " NoValueSnak";
        out_ += ')';
    }

    void operator()(const FilterPattern& p) {
        out_ += "(FilterPattern";
        for (const auto* fp : {&p.subject(), &p.property(), &p.value()}) {
            out_ += ' ';
            if (*fp) (*this)(**fp);
            else out_ += "nil";
        }
        out_ += ' ';
        (*this)(p.snak_kinds());
        out_ += ')';
    }

    void operator()(const AnnotatedStatement& a) {
        out_ += "(AnnotatedStatement ";
        (*this)(a.statement);
        for (const auto& r : a.annotations) {
            out_ += ' ';
            (*this)(r);
        }
        out_ += ')';
    }

    void operator()(const EntityDescriptor& e) {
        out_ += "(EntityDescriptor ";
        (*this)(e.entity);
        out_ += ' ';
        (*this)(e.descriptor);
        out_ += ')';
    }

    void operator()(const Object& o) {
        std::visit([this](const auto& x) { (*this)(x); }, o);
    }

private:
    PrintMode mode_;
    std::string out_;
};

template <class T>
std::string print_with(const T& x, PrintMode mode) {
    Printer p(mode);
    p(x);
    return p.take();
}

} // namespace

// ---------------------------------------------------------------------------

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::size_t i = 0, line = 1, column = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
            ++i;
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            advance(1);
            continue;
        }
        std::size_t tl = line, tc = column;
        if (c == '(' || c == ')') {
            tokens.push_back({c == '(' ? Token::Kind::lparen : Token::Kind::rparen, std::string(1, c), tl, tc});
            advance(1);
            continue;
        }
        if (c == '"') {
            advance(1);
            std::string content;
            for (;;) {
                if (i >= text.size()) throw ParseError("unterminated string", tl, tc);
                char d = text[i];
                if (d == '"') {
                    advance(1);
                    break;
                }
                if (d != '\\') {
                    content += d;
                    advance(1);
                    continue;
                }
                std::size_t el = line, ec = column;
                if (i + 1 >= text.size()) throw ParseError("unterminated string", tl, tc);
                char e = text[i + 1];
                advance(2);
                switch (e) {
                case '"': content += '"'; break;
                case '\\': content += '\\'; break;
                case 'n': content += '\n'; break;
                case 't': content += '\t'; break;
                case 'r': content += '\r'; break;
                case 'u': {
                    if (i + 4 > text.size()) throw ParseError("truncated \\u escape", el, ec);
                    std::uint32_t cp = 0;
                    for (int k = 0; k < 4; ++k) {
                        char h = text[i + k];
                        cp <<= 4;
                        if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
                        else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
                        else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
                        else throw ParseError("invalid \\u escape", el, ec);
                    }
                    advance(4);
                    append_utf8(content, cp);
                    break;
                }
                default: throw ParseError(std::string("invalid escape '\\") + e + "'", el, ec);
                }
            }
            tokens.push_back({Token::Kind::string, std::move(content), tl, tc});
            continue;
        }
        std::size_t start = i;
        while (i < text.size() && !is_delimiter(text[i])) advance(1);
        std::string lexeme(text.substr(start, i - start));
        Token::Kind kind = Decimal::is_lexical(lexeme) ? Token::Kind::number : Token::Kind::symbol;
        tokens.push_back({kind, std::move(lexeme), tl, tc});
    }
    return tokens;
}

Object parse(std::string_view text) { return object(single_tree(text)); }

std::vector<Object> parse_all(std::string_view text) {
    auto [line, column] = end_position(text);
    TreeBuilder builder(tokenize(text), line, column);
    std::vector<Object> out;
    while (!builder.done()) out.push_back(object(builder.next()));
    return out;
}

Statement parse_statement(std::string_view text) { return statement(single_tree(text)); }
Snak parse_snak(std::string_view text) { return snak(single_tree(text)); }
Value parse_value(std::string_view text) { return value(single_tree(text)); }
Entity parse_entity(std::string_view text) { return entity(single_tree(text)); }
Fingerprint parse_fingerprint(std::string_view text) { return fingerprint(single_tree(text)); }
FilterPattern parse_filter_pattern(std::string_view text) { return filter_pattern(single_tree(text)); }

std::string print(const Object& x, PrintMode m) { return print_with(x, m); }
std::string print(const Value& x, PrintMode m) { return print_with(x, m); }
std::string print(const Entity& x, PrintMode m) { return print_with(x, m); }
std::string print(const Iri& x, PrintMode m) { return print_with(x, m); }
std::string print(const Text& x, PrintMode m) { return print_with(x, m); }
std::string print(const String& x, PrintMode m) { return print_with(x, m); }
std::string print(const Quantity& x, PrintMode m) { return print_with(x, m); }
std::string print(const Time& x, PrintMode m) { return print_with(x, m); }
std::string print(const Snak& x, PrintMode m) { return print_with(x, m); }
std::string print(const Statement& x, PrintMode m) { return print_with(x, m); }
std::string print(const ReferenceRecord& x, PrintMode m) { return print_with(x, m); }
std::string print(Rank x, PrintMode m) { return print_with(x, m); }
std::string print(const AnnotationRecord& x, PrintMode m) { return print_with(x, m); }
std::string print(const SnakSet& x, PrintMode m) { return print_with(x, m); }
std::string print(const ReferenceRecordSet& x, PrintMode m) { return print_with(x, m); }
std::string print(const AnnotationRecordSet& x, PrintMode m) { return print_with(x, m); }
std::string print(const TextSet& x, PrintMode m) { return print_with(x, m); }
std::string print(const Descriptor& x, PrintMode m) { return print_with(x, m); }
std::string print(const Fingerprint& x, PrintMode m) { return print_with(x, m); }
std::string print(const FilterPattern& x, PrintMode m) { return print_with(x, m); }
std::string print(const AnnotatedStatement& x, PrintMode m) { return print_with(x, m); }
std::string print(const EntityDescriptor& x, PrintMode m) { return print_with(x, m); }

std::string quote(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
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
    out += '"';
    return out;
}

} // namespace kif::sexpr
