#include "kif/rdf/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "kif/errors.hpp"
#include "kif/namespaces.hpp"

namespace kif::rdf {

namespace {

// ---------------------------------------------------------------------------
// Lexer

struct Tok {
    enum class Kind { end, iri, pname, var, literal, word, punct };
    Kind kind = Kind::end;
    std::string text;  // IRI value, variable name, word, punct char, or "prefix:local"
    Term literal;      // for Kind::literal
    std::size_t line = 1, column = 1;
};

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

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
}

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) {}

    std::vector<Tok> run() {
        std::vector<Tok> out;
        for (;;) {
            skip();
            Tok t;
            t.line = line_;
            t.column = column_;
            if (pos_ >= s_.size()) {
                out.push_back(t);
                return out;
            }
            lex(t);
            out.push_back(std::move(t));
        }
    }

private:
    char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
            if (s_[pos_] == '\n') {
                ++line_;
                column_ = 1;
            } else {
                ++column_;
            }
            ++pos_;
        }
    }
    [[noreturn]] void error(const std::string& msg, std::size_t line, std::size_t col) const {
        throw ParseError(msg, line, col);
    }
    void skip() {
        for (;;) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (pos_ < s_.size() && peek() != '\n') advance();
            } else {
                return;
            }
        }
    }

    std::uint32_t hex(std::size_t digits, const Tok& t) {
        std::uint32_t cp = 0;
        for (std::size_t i = 0; i < digits; ++i) {
            char h = peek();
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
            else error("invalid escape", t.line, t.column);
            advance();
        }
        return cp;
    }

    std::string iri_ref(const Tok& t) {
        advance();  // '<'
        std::string v;
        for (;;) {
            char c = peek();
            if (pos_ >= s_.size() || c == '\n') error("unterminated IRI", t.line, t.column);
            if (c == '>') {
                advance();
                break;
            }
            if (c == '\\' && (peek(1) == 'u' || peek(1) == 'U')) {
                bool big = peek(1) == 'U';
                advance(2);
                append_utf8(v, hex(big ? 8 : 4, t));
                continue;
            }
            v += c;
            advance();
        }
        if (!is_valid_iri(v)) error("invalid IRI <" + v + ">", t.line, t.column);
        return v;
    }

    std::string pname_local() {
        std::string local;
        while (is_name_char(peek()) || peek() == ':' || peek() == '%') {
            local += peek();
            advance();
        }
        while (!local.empty() && local.back() == '.') {
            local.pop_back();
            --pos_;
            --column_;
        }
        return local;
    }

    void lex(Tok& t) {
        char c = peek();
        if (c == '<') {
            t.kind = Tok::Kind::iri;
            t.text = iri_ref(t);
            return;
        }
        if ((c == '?' || c == '$') && is_name_start(peek(1))) {
            advance();
            t.kind = Tok::Kind::var;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
                t.text += peek();
                advance();
            }
            return;
        }
        if (c == '"' || c == '\'') {
            lex_literal(t);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            ((c == '-' || c == '+' || c == '.') && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            lex_number(t);
            return;
        }
        if (c == '_' && peek(1) == ':') throw UnsupportedQuery("blank nodes unsupported", t.line, t.column);
        if (is_name_start(c) || c == ':') {
            std::string word;
            while (is_name_char(peek())) {
                word += peek();
                advance();
            }
            if (peek() == ':') {
                advance();
                t.kind = Tok::Kind::pname;
                t.text = word + ":" + pname_local();
                return;
            }
            while (!word.empty() && word.back() == '.') {
                word.pop_back();
                --pos_;
                --column_;
            }
            t.kind = Tok::Kind::word;
            t.text = word;
            return;
        }
        t.kind = Tok::Kind::punct;
        t.text = std::string(1, c);
        if (c == '^' && peek(1) == '^') t.text = "^^";
        if ((c == '&' && peek(1) == '&') || (c == '|' && peek(1) == '|') || (c == '!' && peek(1) == '=') ||
            (c == '<' && peek(1) == '='))
            t.text += peek(1);
        advance(t.text.size());
    }

    void lex_literal(Tok& t) {
        char q = peek();
        if (peek(1) == q && peek(2) == q) throw UnsupportedQuery("long string literals unsupported", t.line, t.column);
        advance();
        std::string lexical;
        for (;;) {
            char c = peek();
            if (pos_ >= s_.size() || c == '\n') error("unterminated string", t.line, t.column);
            if (c == q) {
                advance();
                break;
            }
            if (c != '\\') {
                lexical += c;
                advance();
                continue;
            }
            char e = peek(1);
            advance(2);
            switch (e) {
            case 't': lexical += '\t'; break;
            case 'b': lexical += '\b'; break;
            case 'n': lexical += '\n'; break;
            case 'r': lexical += '\r'; break;
            case 'f': lexical += '\f'; break;
            case '"': lexical += '"'; break;
            case '\'': lexical += '\''; break;
            case '\\': lexical += '\\'; break;
            case 'u': append_utf8(lexical, hex(4, t)); break;
            case 'U': append_utf8(lexical, hex(8, t)); break;
            default: error("invalid escape in string", t.line, t.column);
            }
        }
        t.kind = Tok::Kind::literal;
        if (peek() == '@') {
            advance();
            std::string tag;
            while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
                tag += static_cast<char>(std::tolower(static_cast<unsigned char>(peek())));
                advance();
            }
            if (tag.empty()) error("empty language tag", t.line, t.column);
            t.literal = lang(std::move(lexical), std::move(tag));
            return;
        }
        if (peek() == '^' && peek(1) == '^') {
            advance(2);
            // Datatype follows as its own token; the parser attaches it.
            t.text = "^^";
        }
        t.literal = plain(std::move(lexical));
    }

    void lex_number(Tok& t) {
        std::string n;
        if (peek() == '+' || peek() == '-') {
            n += peek();
            advance();
        }
        bool dot = false, exp = false;
        while (std::isdigit(static_cast<unsigned char>(peek())) ||
               (peek() == '.' && !dot && !exp && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            if (peek() == '.') dot = true;
            n += peek();
            advance();
        }
        if (peek() == 'e' || peek() == 'E') {
            exp = true;
            n += peek();
            advance();
            if (peek() == '+' || peek() == '-') {
                n += peek();
                advance();
            }
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                n += peek();
                advance();
            }
        }
        t.kind = Tok::Kind::literal;
        t.literal = typed(n, exp ? xsd_double : dot ? xsd_decimal : xsd_integer);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1, column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string> kUnsupportedKeywords = {
    "OPTIONAL", "FILTER", "UNION",  "MINUS",  "BIND",   "GRAPH",  "SERVICE", "ORDER",  "GROUP",
    "HAVING",   "CONSTRUCT", "ASK", "DESCRIBE", "INSERT", "DELETE", "LOAD",  "CLEAR",  "DROP",
    "CREATE",   "REDUCED", "FROM",  "BASE",   "NAMED",  "WITH",   "EXISTS",  "NOT",    "AS",
    "COUNT",    "SUM",    "MIN",    "MAX",    "AVG",    "SAMPLE", "BY"};

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view text, std::vector<SourcePosition>* positions = nullptr)
        : toks_(Lexer(text).run()), positions_(positions) {}

    SelectQuery run() {
        while (is_word("PREFIX")) prefix_decl();
        check_unsupported(cur());
        if (!is_word("SELECT")) fail("expected SELECT");
        next();
        SelectQuery q;
        if (is_word("DISTINCT")) {
            q.distinct = true;
            next();
        }
        check_unsupported(cur());
        if (is_punct("*")) fail("SELECT * unsupported");
        if (is_punct("(")) fail("expressions in SELECT unsupported");
        while (cur().kind == Tok::Kind::var) {
            q.projection.push_back(cur().text);
            next();
            if (is_punct("(")) fail("expressions in SELECT unsupported");
        }
        if (q.projection.empty()) fail("expected projected variables");
        check_unsupported(cur());
        if (is_word("WHERE")) next();
        expect_punct("{");
        group(q);
        expect_punct("}");
        if (is_word("VALUES")) values(q);
        for (;;) {
            check_unsupported(cur());
            if (is_word("LIMIT")) {
                if (q.limit) fail("duplicate LIMIT");
                next();
                q.limit = count();
            } else if (is_word("OFFSET")) {
                if (q.offset) fail("duplicate OFFSET");
                next();
                q.offset = count();
            } else {
                break;
            }
        }
        if (cur().kind != Tok::Kind::end) fail("unexpected '" + cur().text + "'");
        validate(q);
        return q;
    }

private:
    const Tok& cur() const { return toks_[pos_]; }
    void next() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }
    bool is_word(std::string_view w) const { return cur().kind == Tok::Kind::word && upper(cur().text) == w; }
    bool is_punct(std::string_view p) const { return cur().kind == Tok::Kind::punct && cur().text == p; }
    [[noreturn]] void fail(const std::string& msg) const { throw UnsupportedQuery(msg, cur().line, cur().column); }
    [[noreturn]] void syntax(const std::string& msg) const { throw ParseError(msg, cur().line, cur().column); }

    void check_unsupported(const Tok& t) const {
        if (t.kind == Tok::Kind::word) {
            auto w = upper(t.text);
            if (kUnsupportedKeywords.count(w)) throw UnsupportedQuery(w + " unsupported", t.line, t.column);
        }
    }

    void expect_punct(std::string_view p) {
        check_unsupported(cur());
        if (!is_punct(p)) {
            if (cur().kind == Tok::Kind::end) syntax("expected '" + std::string(p) + "' before end of query");
            syntax("expected '" + std::string(p) + "'");
        }
        next();
    }

    std::size_t count() {
        const Tok& t = cur();
        const auto* l = std::get_if<Literal>(&t.literal);
        if (t.kind != Tok::Kind::literal || !l || l->datatype != xsd_integer || l->lexical.front() == '-')
            syntax("expected a non-negative integer");
        next();
        return static_cast<std::size_t>(std::stoull(l->lexical));
    }

    void prefix_decl() {
        next();
        if (cur().kind != Tok::Kind::pname || cur().text.back() != ':') syntax("expected prefix name");
        std::string prefix = cur().text.substr(0, cur().text.size() - 1);
        next();
        if (cur().kind != Tok::Kind::iri) syntax("expected IRI");
        prefixes_[prefix] = cur().text;
        next();
    }

    std::string expand(const Tok& t) const {
        auto colon = t.text.find(':');
        std::string prefix = t.text.substr(0, colon);
        std::string local = t.text.substr(colon + 1);
        if (auto it = prefixes_.find(prefix); it != prefixes_.end()) return it->second + local;
        if (auto base = ns::base_for(prefix)) return std::string(*base) + local;
        throw ParseError("unknown prefix '" + prefix + "'", t.line, t.column);
    }

    std::optional<Term> iri_term() {
        if (cur().kind == Tok::Kind::iri) {
            Term t = iri(cur().text);
            next();
            return t;
        }
        if (cur().kind == Tok::Kind::pname) {
            Term t = iri(expand(cur()));
            next();
            return t;
        }
        return std::nullopt;
    }

    // Literal, with a datatype IRI attached when the lexer saw '^^'.
    Term literal() {
        Tok t = cur();
        next();
        if (t.text != "^^") return t.literal;
        auto dt = iri_term();
        if (!dt) syntax("expected datatype IRI after '^^'");
        auto& l = std::get<Literal>(t.literal);
        return typed(std::move(l.lexical), iri_value(*dt));
    }

    [[noreturn]] void reject_path_or_structure(const char* where) const {
        check_unsupported(cur());
        if (cur().kind == Tok::Kind::punct) {
            const auto& p = cur().text;
            if (p == "[") fail("blank nodes unsupported");
            if (p == "(") fail("collections unsupported");
            if (p == "{") fail("nested group patterns unsupported");
            if (p == "/" || p == "|" || p == "^" || p == "*" || p == "+" || p == "?" || p == "!")
                fail("property paths unsupported");
        }
        if (cur().kind == Tok::Kind::end) syntax(std::string("expected ") + where + " before end of query");
        syntax(std::string("expected ") + where);
    }

    PatternTerm subject() {
        if (cur().kind == Tok::Kind::var) {
            Variable v{cur().text};
            next();
            return v;
        }
        if (auto t = iri_term()) return *t;
        if (cur().kind == Tok::Kind::literal) syntax("literal subjects unsupported");
        reject_path_or_structure("subject");
    }

    PatternTerm predicate() {
        if (cur().kind == Tok::Kind::var) {
            Variable v{cur().text};
            next();
            return v;
        }
        if (cur().kind == Tok::Kind::word && cur().text == "a") {
            next();
            return iri(std::string(rdf_type));
        }
        if (auto t = iri_term()) return *t;
        reject_path_or_structure("predicate");
    }

    PatternTerm object() {
        if (cur().kind == Tok::Kind::var) {
            Variable v{cur().text};
            next();
            return v;
        }
        if (auto t = iri_term()) return *t;
        if (cur().kind == Tok::Kind::literal) return literal();
        if (cur().kind == Tok::Kind::word && (cur().text == "true" || cur().text == "false")) {
            Term t = typed(cur().text, xsd_boolean);
            next();
            return t;
        }
        reject_path_or_structure("object");
    }

    void after_predicate() {
        if (cur().kind == Tok::Kind::punct) {
            const auto& p = cur().text;
            if (p == "/" || p == "|" || p == "^" || p == "*" || p == "+" || p == "?")
                fail("property paths unsupported");
        }
    }

    void group(SelectQuery& q) {
        for (;;) {
            check_unsupported(cur());
            if (is_punct("}") || cur().kind == Tok::Kind::end) return;
            if (is_word("VALUES")) {
                values(q);
                continue;
            }
            if (is_punct("{")) fail("nested group patterns unsupported");
            SourcePosition at{cur().line, cur().column};
            PatternTerm s = subject();
            for (;;) {
                PatternTerm p = predicate();
                after_predicate();
                for (;;) {
                    q.where.push_back({s, p, object()});
                    if (positions_) positions_->push_back(at);
                    if (!is_punct(",")) break;
                    next();
                }
                if (!is_punct(";")) break;
                next();
                if (is_punct(".") || is_punct("}")) break;
            }
            check_unsupported(cur());
            if (is_punct(".")) {
                next();
                continue;
            }
            if (!is_punct("}")) {
                if (cur().kind == Tok::Kind::punct) reject_path_or_structure("'.' or '}'");
                syntax("expected '.' or '}'");
            }
        }
    }

    std::optional<Term> values_cell() {
        if (is_word("UNDEF")) {
            next();
            return std::nullopt;
        }
        if (auto t = iri_term()) return t;
        if (cur().kind == Tok::Kind::literal) return literal();
        syntax("expected a VALUES term");
    }

    void values(SelectQuery& q) {
        if (q.values) fail("multiple VALUES blocks unsupported");
        next();
        ValuesBlock b;
        bool single = cur().kind == Tok::Kind::var;
        if (single) {
            b.variables.push_back(cur().text);
            next();
        } else {
            expect_punct("(");
            while (cur().kind == Tok::Kind::var) {
                b.variables.push_back(cur().text);
                next();
            }
            expect_punct(")");
        }
        expect_punct("{");
        while (!is_punct("}")) {
            if (cur().kind == Tok::Kind::end) syntax("unterminated VALUES block");
            Row row;
            if (single) {
                row.push_back(values_cell());
            } else {
                expect_punct("(");
                while (!is_punct(")")) {
                    if (cur().kind == Tok::Kind::end) syntax("unterminated VALUES row");
                    row.push_back(values_cell());
                }
                next();
                if (row.size() != b.variables.size()) syntax("VALUES row has the wrong number of terms");
            }
            b.rows.push_back(std::move(row));
        }
        next();
        q.values = std::move(b);
    }

    std::vector<Tok> toks_;
    std::vector<SourcePosition>* positions_ = nullptr;
    std::size_t pos_ = 0;
    std::map<std::string, std::string> prefixes_;
};

std::string pattern_term(const PatternTerm& t) {
    if (const auto* v = std::get_if<Variable>(&t)) return "?" + v->name;
    return to_ntriples(std::get<Term>(t));
}

} // namespace

void validate(const SelectQuery& q) {
    std::set<std::string> bound;
    for (const auto& tp : q.where)
        for (const auto* pt : {&tp.subject, &tp.predicate, &tp.object})
            if (const auto* v = std::get_if<Variable>(pt)) bound.insert(v->name);
    if (q.values)
        for (const auto& v : q.values->variables) bound.insert(v);
    for (const auto& v : q.projection)
        if (!bound.count(v)) throw UnsupportedQuery("projected variable ?" + v + " does not occur in the pattern", 1, 1);
}

SelectQuery parse_sparql(std::string_view text) { return Parser(text).run(); }

SelectQuery parse_sparql(std::string_view text, std::vector<SourcePosition>& positions) {
    positions.clear();
    return Parser(text, &positions).run();
}

std::string serialize(const SelectQuery& q) {
    std::string out = "SELECT ";
    if (q.distinct) out += "DISTINCT ";
    for (const auto& v : q.projection) {
        out += '?';
        out += v;
        out += ' ';
    }
    out += "WHERE {\n";
    for (const auto& tp : q.where) {
        out += "  ";
        out += pattern_term(tp.subject);
        out += ' ';
        out += pattern_term(tp.predicate);
        out += ' ';
        out += pattern_term(tp.object);
        out += " .\n";
    }
    if (q.values) {
        out += "  VALUES (";
        for (std::size_t i = 0; i < q.values->variables.size(); ++i) {
            if (i) out += ' ';
            out += '?';
            out += q.values->variables[i];
        }
        out += ") {";
        for (const auto& row : q.values->rows) {
            out += " (";
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ' ';
                out += row[i] ? to_ntriples(*row[i]) : "UNDEF";
            }
            out += ')';
        }
        out += " }\n";
    }
    out += "}";
    if (q.limit) out += "\nLIMIT " + std::to_string(*q.limit);
    if (q.offset) out += "\nOFFSET " + std::to_string(*q.offset);
    out += '\n';
    return out;
}

void finalize_rows(std::vector<Row>& rows, bool distinct, std::optional<std::size_t> offset,
                   std::optional<std::size_t> limit) {
    std::sort(rows.begin(), rows.end());
    if (distinct) rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::size_t skip = std::min(offset.value_or(0), rows.size());
    rows.erase(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(skip));
    if (limit && rows.size() > *limit) rows.resize(*limit);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Evaluator {
public:
    Evaluator(const Graph& g, const SelectQuery& q) : g_(g), q_(q) {
        for (const auto& tp : q.where)
            for (const auto* pt : {&tp.subject, &tp.predicate, &tp.object})
                if (const auto* v = std::get_if<Variable>(pt)) slot(v->name);
        if (q.values)
            for (const auto& v : q.values->variables) slot(v);
        for (const auto& v : q.projection) slot(v);
        for (const auto& tp : q.where) {
            Compiled c;
            for (int k = 0; k < 3; ++k) {
                const PatternTerm& pt = k == 0 ? tp.subject : k == 1 ? tp.predicate : tp.object;
                if (const auto* v = std::get_if<Variable>(&pt)) {
                    c.var[k] = slot(v->name);
                } else {
                    c.var[k] = -1;
                    auto id = g.find(std::get<Term>(pt));
                    if (!id) unsatisfiable_ = true;
                    c.constant[k] = id.value_or(0);
                }
            }
            patterns_.push_back(c);
        }
    }

    ResultSet run() {
        ResultSet r;
        r.variables = q_.projection;
        if (unsatisfiable_) return r;
        std::vector<Row> rows;
        auto emit = [&](const std::vector<std::optional<TermId>>& b) {
            Row row;
            row.reserve(q_.projection.size());
            for (const auto& v : q_.projection) {
                auto id = b[static_cast<std::size_t>(slots_.at(v))];
                row.push_back(id ? std::optional<Term>(term(*id)) : std::nullopt);
            }
            rows.push_back(std::move(row));
        };
        std::vector<bool> done(patterns_.size(), false);
        if (q_.values) {
            for (const auto& vrow : q_.values->rows) {
                std::vector<std::optional<TermId>> b(slots_.size());
                bool consistent = true;
                for (std::size_t i = 0; i < vrow.size(); ++i) {
                    if (!vrow[i]) continue;
                    auto s = static_cast<std::size_t>(slots_.at(q_.values->variables[i]));
                    auto id = external(*vrow[i]);
                    // A variable repeated in the header must agree with itself.
                    if (b[s] && *b[s] != id) consistent = false;
                    b[s] = id;
                }
                if (consistent) solve(b, done, patterns_.size(), emit);
            }
        } else {
            std::vector<std::optional<TermId>> b(slots_.size());
            solve(b, done, patterns_.size(), emit);
        }
        finalize_rows(rows, q_.distinct, q_.offset, q_.limit);
        r.rows = std::move(rows);
        return r;
    }

private:
    struct Compiled {
        int var[3];
        TermId constant[3];
    };

    int slot(const std::string& name) {
        auto [it, inserted] = slots_.emplace(name, static_cast<int>(slots_.size()));
        return it->second;
    }

    // VALUES terms absent from the graph get ids past the graph's range, so
    // they bind but never match a triple.
    TermId external(const Term& t) {
        if (auto id = g_.find(t)) return *id;
        for (std::size_t i = 0; i < extra_.size(); ++i)
            if (extra_[i] == t) return kExternalBase + static_cast<TermId>(i);
        extra_.push_back(t);
        return kExternalBase + static_cast<TermId>(extra_.size() - 1);
    }

    const Term& term(TermId id) const { return id >= kExternalBase ? extra_[id - kExternalBase] : g_.term(id); }

    std::optional<TermId> position(const Compiled& c, int k, const std::vector<std::optional<TermId>>& b) const {
        if (c.var[k] < 0) return c.constant[k];
        return b[static_cast<std::size_t>(c.var[k])];
    }

    template <class Emit>
    void solve(std::vector<std::optional<TermId>>& b, std::vector<bool>& done, std::size_t remaining, Emit& emit) {
        if (remaining == 0) {
            emit(b);
            return;
        }
        std::size_t best = 0, best_cost = SIZE_MAX;
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            if (done[i]) continue;
            const auto& c = patterns_[i];
            auto cost = g_.estimate(position(c, 0, b), position(c, 1, b), position(c, 2, b));
            if (cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        if (best_cost == 0) return;
        const auto& c = patterns_[best];
        done[best] = true;
        auto s = position(c, 0, b), p = position(c, 1, b), o = position(c, 2, b);
        std::vector<Graph::Ids> matches;
        g_.match(s, p, o, [&](const Graph::Ids& ids) { matches.push_back(ids); });
        for (const auto& m : matches) {
            const TermId got[3] = {m.s, m.p, m.o};
            std::vector<std::size_t> newly;
            bool ok = true;
            for (int k = 0; k < 3 && ok; ++k) {
                if (c.var[k] < 0) continue;
                auto idx = static_cast<std::size_t>(c.var[k]);
                if (b[idx]) {
                    ok = *b[idx] == got[k];
                } else {
                    b[idx] = got[k];
                    newly.push_back(idx);
                }
            }
            if (ok) solve(b, done, remaining - 1, emit);
            for (auto idx : newly) b[idx].reset();
        }
        done[best] = false;
    }

    static constexpr TermId kExternalBase = 0x80000000u;

    const Graph& g_;
    const SelectQuery& q_;
    std::map<std::string, int> slots_;
    std::vector<Compiled> patterns_;
    std::vector<Term> extra_;
    bool unsatisfiable_ = false;
};

} // namespace

ResultSet match_bgp(const Graph& g, const SelectQuery& q) { return Evaluator(g, q).run(); }

} // namespace kif::rdf
