#include "kif/rdf/ntriples.hpp"

#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>

#include "kif/digest.hpp"
#include "kif/errors.hpp"

namespace kif::rdf {

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

class LineParser {
public:
    LineParser(std::string_view line, std::size_t line_no, const std::string& skolem_base)
        : s_(line), line_(line_no), skolem_(skolem_base) {}

    // False for blank and comment lines.
    bool parse(Triple& out) {
        skip_ws();
        if (done() || peek() == '#') return false;
        Term subject = resource();
        skip_ws();
        if (peek() != '<') error("predicate must be an IRI");
        Term predicate = resource();
        skip_ws();
        Term object = peek() == '"' ? literal() : resource();
        skip_ws();
        if (peek() != '.') error("expected '.'");
        ++pos_;
        skip_ws();
        if (!done() && peek() != '#') error("unexpected text after '.'");
        out = Triple{std::get<IriTerm>(subject), std::get<IriTerm>(predicate), std::move(object)};
        return true;
    }

private:
    bool done() const { return pos_ >= s_.size(); }
    char peek() const { return done() ? '\0' : s_[pos_]; }
    void skip_ws() {
        while (!done() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
    }
    [[noreturn]] void error(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }

    std::uint32_t hex(std::size_t digits) {
        if (pos_ + digits > s_.size()) error("truncated escape");
        std::uint32_t cp = 0;
        for (std::size_t i = 0; i < digits; ++i) {
            char h = s_[pos_++];
            cp <<= 4;
            if (h >= '0' && h <= '9') cp |= static_cast<std::uint32_t>(h - '0');
            else if (h >= 'a' && h <= 'f') cp |= static_cast<std::uint32_t>(h - 'a' + 10);
            else if (h >= 'A' && h <= 'F') cp |= static_cast<std::uint32_t>(h - 'A' + 10);
            else error("invalid hex digit in escape");
        }
        return cp;
    }

    std::string iri_ref() {
        std::size_t start = pos_;
        ++pos_;  // '<'
        std::string value;
        for (;;) {
            if (done()) error("unterminated IRI");
            char c = s_[pos_];
            if (c == '>') {
                ++pos_;
                break;
            }
            if (c == '\\') {
                ++pos_;
                char e = peek();
                ++pos_;
                if (e == 'u') append_utf8(value, hex(4));
                else if (e == 'U') append_utf8(value, hex(8));
                else error("invalid escape in IRI");
                continue;
            }
            value += c;
            ++pos_;
        }
        if (!is_valid_iri(value)) {
            pos_ = start;
            error("invalid IRI <" + value + ">");
        }
        return value;
    }

    Term resource() {
        if (peek() == '<') return iri(iri_ref());
        if (peek() == '_' && pos_ + 1 < s_.size() && s_[pos_ + 1] == ':') {
            pos_ += 2;
            std::size_t start = pos_;
            while (!done() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                               s_[pos_] == '-' || s_[pos_] == '.'))
                ++pos_;
            while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
            if (pos_ == start) error("empty blank node label");
            return iri(skolem_ + std::string(s_.substr(start, pos_ - start)));
        }
        error("expected an IRI or blank node");
    }

    Term literal() {
        ++pos_;  // '"'
        std::string lexical;
        for (;;) {
            if (done()) error("unterminated literal");
            char c = s_[pos_];
            if (c == '"') {
                ++pos_;
                break;
            }
            if (c != '\\') {
                lexical += c;
                ++pos_;
                continue;
            }
            ++pos_;
            char e = peek();
            ++pos_;
            switch (e) {
            case 't': lexical += '\t'; break;
            case 'b': lexical += '\b'; break;
            case 'n': lexical += '\n'; break;
            case 'r': lexical += '\r'; break;
            case 'f': lexical += '\f'; break;
            case '"': lexical += '"'; break;
            case '\'': lexical += '\''; break;
            case '\\': lexical += '\\'; break;
            case 'u': append_utf8(lexical, hex(4)); break;
            case 'U': append_utf8(lexical, hex(8)); break;
            default: --pos_; error("invalid escape in literal");
            }
        }
        if (peek() == '@') {
            ++pos_;
            std::size_t start = pos_;
            while (!done() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-')) ++pos_;
            if (pos_ == start) error("empty language tag");
            std::string tag(s_.substr(start, pos_ - start));
            for (auto& ch : tag) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            return lang(std::move(lexical), std::move(tag));
        }
        if (peek() == '^') {
            if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '^') error("expected '^^'");
            pos_ += 2;
            if (peek() != '<') error("expected datatype IRI");
            return typed(std::move(lexical), iri_ref());
        }
        return plain(std::move(lexical));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::size_t line_;
    const std::string& skolem_;
};

} // namespace

Graph parse_ntriples(std::string_view text) {
    Graph g;
    std::string skolem;
    if (text.find("_:") != std::string_view::npos) skolem = "urn:skolem:" + sha256_hex(text) + ":";
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        Triple t;
        if (LineParser(text.substr(start, end - start), line_no, skolem).parse(t)) g.insert(t);
        start = end + 1;
    }
    return g;
}

Graph read_ntriples_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ntriples(buf.str());
}

std::string serialize_ntriples(const Graph& g) {
    std::ostringstream out;
    write_ntriples(out, g);
    return out.str();
}

void write_ntriples(std::ostream& out, const Graph& g) {
    for (const auto& t : g.triples()) out << to_ntriples(t) << '\n';
}

} // namespace kif::rdf
