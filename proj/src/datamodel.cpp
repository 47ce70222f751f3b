#include "kif/datamodel.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace kif {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

bool valid_language_tag(std::string_view tag) {
    // BCP-47 shape only: 1-8 letters, then -subtags of 1-8 alphanumerics.
    std::size_t i = 0;
    std::size_t n = 0;
    while (i < tag.size() && is_alpha(tag[i])) ++i, ++n;
    if (n == 0 || n > 8) return false;
    while (i < tag.size()) {
        if (tag[i] != '-') return false;
        ++i;
        n = 0;
        while (i < tag.size() && (is_alpha(tag[i]) || is_digit(tag[i]))) ++i, ++n;
        if (n == 0 || n > 8) return false;
    }
    return true;
}

int parse_fixed(std::string_view digits) {
    int v = 0;
    for (char c : digits) v = v * 10 + (c - '0');
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// Iri

Iri::Iri(std::string value) : value_(std::move(value)) {
    if (value_.empty()) throw InvalidValue("IRI must not be empty");
    if (std::isspace(static_cast<unsigned char>(value_.front())) ||
        std::isspace(static_cast<unsigned char>(value_.back())))
        throw InvalidValue("IRI has surrounding whitespace: '" + value_ + "'");
    if (!is_alpha(value_[0])) throw InvalidValue("IRI has no scheme: '" + value_ + "'");
    std::size_t i = 1;
    while (i < value_.size() &&
           (is_alpha(value_[i]) || is_digit(value_[i]) || value_[i] == '+' ||
            value_[i] == '-' || value_[i] == '.'))
        ++i;
    if (i >= value_.size() || value_[i] != ':')
        throw InvalidValue("IRI has no scheme: '" + value_ + "'");
}

// ---------------------------------------------------------------------------
// Text

Text::Text(std::string content, std::string language)
    : content_(std::move(content)), language_(std::move(language)) {
    for (auto& c : language_) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (!valid_language_tag(language_))
        throw InvalidValue("invalid language tag '" + language_ + "'");
}

// ---------------------------------------------------------------------------
// Decimal

bool Decimal::is_lexical(std::string_view s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++digits;
    if (digits == 0) return false;
    if (i == s.size()) return true;
    if (s[i] != '.') return false;
    ++i;
    digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++digits;
    return digits > 0 && i == s.size();
}

std::optional<Decimal> Decimal::try_parse(std::string_view s) {
    if (!is_lexical(s)) return std::nullopt;
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    auto dot = s.find('.');
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    while (int_part.size() > 1 && int_part.front() == '0') int_part.remove_prefix(1);
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);
    std::string out;
    if (negative && !(int_part == "0" && frac_part.empty())) out += '-';
    out += int_part;
    if (!frac_part.empty()) {
        out += '.';
        out += frac_part;
    }
    return Decimal(std::move(out));
}

Decimal Decimal::parse(std::string_view s) {
    if (auto d = try_parse(s)) return *d;
    throw InvalidValue("invalid decimal '" + std::string(s) + "'");
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    std::string_view x = a.lexical_;
    std::string_view y = b.lexical_;
    bool xneg = !x.empty() && x.front() == '-';
    bool yneg = !y.empty() && y.front() == '-';
    if (xneg != yneg) return xneg ? std::strong_ordering::less : std::strong_ordering::greater;
    if (xneg) {
        x.remove_prefix(1);
        y.remove_prefix(1);
    }
    auto split = [](std::string_view s) {
        auto dot = s.find('.');
        if (dot == std::string_view::npos) return std::pair{s, std::string_view{}};
        return std::pair{s.substr(0, dot), s.substr(dot + 1)};
    };
    auto [xi, xf] = split(x);
    auto [yi, yf] = split(y);
    std::strong_ordering magnitude = std::strong_ordering::equal;
    if (xi.size() != yi.size()) {
        magnitude = xi.size() <=> yi.size();
    } else if (auto c = xi.compare(yi); c != 0) {
        magnitude = c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    } else {
        // Fractions have no trailing zeros, so plain lexicographic order works.
        auto c2 = xf.compare(yf);
        magnitude = c2 < 0 ? std::strong_ordering::less
                  : c2 > 0 ? std::strong_ordering::greater
                           : std::strong_ordering::equal;
    }
    if (!xneg) return magnitude;
    return 0 <=> magnitude;
}

// ---------------------------------------------------------------------------
// Quantity

Quantity::Quantity(Decimal amount, std::optional<Entity> unit, std::optional<Decimal> lower,
                   std::optional<Decimal> upper)
    : amount_(std::move(amount)), unit_(std::move(unit)), lower_(std::move(lower)),
      upper_(std::move(upper)) {
    if (unit_ && !unit_->is_item()) throw InvalidValue("quantity unit must be an item");
    if (lower_ && *lower_ > amount_)
        throw InvalidValue("quantity lower bound " + lower_->str() + " exceeds amount " +
                           amount_.str());
    if (upper_ && amount_ > *upper_)
        throw InvalidValue("quantity amount " + amount_.str() + " exceeds upper bound " +
                           upper_->str());
}

// ---------------------------------------------------------------------------
// Timestamp / Time

Timestamp Timestamp::parse(std::string_view s) {
    const std::string original(s);
    auto fail = [&]() -> InvalidValue { return InvalidValue("invalid timestamp '" + original + "'"); };
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    std::size_t i = 0;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i < 4 || i > 16) throw fail();
    Timestamp ts;
    std::int64_t year = 0;
    std::from_chars(s.data(), s.data() + i, year);
    ts.year = negative ? -year : year;
    s.remove_prefix(i);
    auto two_digits = [&](char sep) {
        if (s.size() < 3 || s[0] != sep || !is_digit(s[1]) || !is_digit(s[2])) throw fail();
        int v = parse_fixed(s.substr(1, 2));
        s.remove_prefix(3);
        return v;
    };
    ts.month = two_digits('-');
    ts.day = two_digits('-');
    if (!s.empty() && s.front() == 'T') {
        s.remove_prefix(1);
        if (s.size() < 2 || !is_digit(s[0]) || !is_digit(s[1])) throw fail();
        ts.hour = parse_fixed(s.substr(0, 2));
        s.remove_prefix(2);
        ts.minute = two_digits(':');
        ts.second = two_digits(':');
    }
    if (!s.empty() && s.front() == 'Z') s.remove_prefix(1);
    if (!s.empty()) throw fail();
    if (ts.month > 12 || ts.day > 31 || ts.hour > 23 || ts.minute > 59 || ts.second > 60)
        throw fail();
    return ts;
}

std::string Timestamp::date_string() const {
    char buf[64];
    std::int64_t y = year < 0 ? -year : year;
    std::snprintf(buf, sizeof buf, "%s%04lld-%02d-%02d", year < 0 ? "-" : "",
                  static_cast<long long>(y), month, day);
    return buf;
}

std::string Timestamp::iso_string() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", hour, minute, second);
    return date_string() + buf;
}

Time::Time(Timestamp timestamp, int precision, int timezone, std::optional<Entity> calendar)
    : timestamp_(timestamp), precision_(precision), timezone_(timezone),
      calendar_(std::move(calendar)) {
    if (precision_ < 0 || precision_ > 14)
        throw InvalidValue("time precision " + std::to_string(precision_) + " outside [0,14]");
    if (timezone_ < -14 * 60 || timezone_ > 14 * 60)
        throw InvalidValue("time zone offset " + std::to_string(timezone_) + " out of range");
    if (calendar_ && !calendar_->is_item()) throw InvalidValue("calendar model must be an item");
    auto& ts = timestamp_;
    if (precision_ < precision::month) ts.month = 1;
    if (precision_ < precision::day) ts.day = 1;
    if (precision_ < precision::hour) ts.hour = 0;
    if (precision_ < precision::minute) ts.minute = 0;
    if (precision_ < precision::second) ts.second = 0;
    if (ts.month < 1 || ts.day < 1)
        throw InvalidValue("timestamp " + ts.date_string() + " lacks components required by precision " +
                           std::to_string(precision_));
}

bool is_deep(const Value& value) noexcept {
    return std::holds_alternative<Quantity>(value) || std::holds_alternative<Time>(value);
}

// ---------------------------------------------------------------------------
// Snak / ReferenceRecord

Snak::Snak(Entity property, SnakKind kind, std::optional<Value> value)
    : property_(std::move(property)), kind_(kind), value_(std::move(value)) {
    if (!property_.is_property())
        throw InvalidValue("snak property must be a property, got item " + property_.iri().str());
}

Snak Snak::value_snak(Entity property, Value value) {
    return Snak(std::move(property), SnakKind::value, std::move(value));
}

Snak Snak::some_value(Entity property) {
    return Snak(std::move(property), SnakKind::some_value, std::nullopt);
}

Snak Snak::no_value(Entity property) {
    return Snak(std::move(property), SnakKind::no_value, std::nullopt);
}

ReferenceRecord::ReferenceRecord(SnakSet snaks) : snaks_(std::move(snaks)) {
    if (snaks_.empty()) throw InvalidValue("reference record needs at least one snak");
}

// ---------------------------------------------------------------------------
// Fingerprint / FilterPattern

Fingerprint Fingerprint::snaks(SnakSet snaks) {
    if (snaks.empty()) throw InvalidValue("snak-set fingerprint must not be empty");
    return Fingerprint(Body(std::move(snaks)));
}

const Entity* Fingerprint::as_entity() const noexcept {
    const Value* v = as_constant();
    return v ? std::get_if<Entity>(v) : nullptr;
}

SnakSet Fingerprint::required_snaks() const {
    if (const Snak* s = std::get_if<Snak>(&body_)) return SnakSet{*s};
    if (const SnakSet* s = std::get_if<SnakSet>(&body_)) return *s;
    return {};
}

FilterPattern::FilterPattern(std::optional<Fingerprint> subject, std::optional<Fingerprint> property,
                             std::optional<Fingerprint> value, SnakMask kinds)
    : subject_(std::move(subject)), property_(std::move(property)), value_(std::move(value)),
      kinds_(kinds) {
    if (kinds_.empty()) throw InvalidValue("filter pattern snak mask must not be empty");
    if (value_) {
        if (!kinds_.has(SnakKind::value))
            throw InvalidValue("filter pattern with a value fingerprint must admit value snaks");
        kinds_ = SnakMask::only(SnakKind::value);
    }
}

void FilterPattern::check_supported() const {
    auto check_snaks = [](const Fingerprint& fp, const char* where) {
        for (const auto& s : fp.required_snaks())
            if (s.kind() != SnakKind::value)
                throw UnsupportedFingerprint(std::string("unsupported fingerprint: ") + where +
                                             " fingerprint snaks must be value snaks");
    };
    if (subject_) {
        if (subject_->kind() == Fingerprint::Kind::constant && !subject_->as_entity())
            throw UnsupportedFingerprint("unsupported fingerprint: subject constant must be an entity");
        check_snaks(*subject_, "subject");
    }
    if (property_) {
        const Entity* e = property_->as_entity();
        if (!e || !e->is_property())
            throw UnsupportedFingerprint(
                "unsupported fingerprint: property fingerprint must be a property entity");
    }
    if (value_) check_snaks(*value_, "value");
}

// ---------------------------------------------------------------------------

std::strong_ordering canonical_compare(const Object& a, const Object& b) { return a <=> b; }

Statement value_statement(Entity subject, Entity property, Value value) {
    return Statement{std::move(subject), Snak::value_snak(std::move(property), std::move(value))};
}

} // namespace kif
