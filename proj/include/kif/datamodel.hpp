#pragma once
// Value types for the Wikibase data model fragment used throughout kif:
// entities, data values, snaks, statements and their annotations, plus the
// filter pattern language. Every type here is immutable after construction,
// totally ordered, and compared structurally.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kif/errors.hpp"

namespace kif {

// Absolute IRI. Requires a scheme followed by ':' and no surrounding spaces.
class Iri {
public:
    explicit Iri(std::string value);

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const Iri&, const Iri&) = default;
    friend auto operator<=>(const Iri&, const Iri&) = default;

private:
    std::string value_;
};

enum class EntityKind : std::uint8_t { item, property };

// An item or a property. Item and Property with the same IRI are different.
class Entity {
public:
    static Entity item(Iri iri) { return Entity(EntityKind::item, std::move(iri)); }
    static Entity property(Iri iri) { return Entity(EntityKind::property, std::move(iri)); }
    static Entity item(std::string iri) { return item(Iri(std::move(iri))); }
    static Entity property(std::string iri) { return property(Iri(std::move(iri))); }

    EntityKind kind() const noexcept { return kind_; }
    const Iri& iri() const noexcept { return iri_; }
    bool is_item() const noexcept { return kind_ == EntityKind::item; }
    bool is_property() const noexcept { return kind_ == EntityKind::property; }

    friend bool operator==(const Entity&, const Entity&) = default;
    friend auto operator<=>(const Entity&, const Entity&) = default;

private:
    Entity(EntityKind kind, Iri iri) : kind_(kind), iri_(std::move(iri)) {}

    EntityKind kind_;
    Iri iri_;
};

// Monolingual text. The language tag is stored lowercase.
class Text {
public:
    explicit Text(std::string content, std::string language = "en");

    const std::string& content() const noexcept { return content_; }
    const std::string& language() const noexcept { return language_; }

    friend bool operator==(const Text&, const Text&) = default;
    friend auto operator<=>(const Text&, const Text&) = default;

private:
    std::string content_;
    std::string language_;
};

class String {
public:
    explicit String(std::string content) : content_(std::move(content)) {}

    const std::string& content() const noexcept { return content_; }

    friend bool operator==(const String&, const String&) = default;
    friend auto operator<=>(const String&, const String&) = default;

private:
    std::string content_;
};

// Exact decimal number kept in normalized lexical form: no '+', no redundant
// leading or trailing zeros, "-0" folded to "0". Ordering is numeric, so
// equality and ordering agree. Exponent notation is not accepted.
class Decimal {
public:
    static Decimal parse(std::string_view text);
    static std::optional<Decimal> try_parse(std::string_view text);
    static bool is_lexical(std::string_view text);

    const std::string& str() const noexcept { return lexical_; }

    friend bool operator==(const Decimal&, const Decimal&) = default;
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

private:
    explicit Decimal(std::string lexical) : lexical_(std::move(lexical)) {}

    std::string lexical_;
};

class Quantity {
public:
    explicit Quantity(Decimal amount, std::optional<Entity> unit = std::nullopt,
                      std::optional<Decimal> lower = std::nullopt,
                      std::optional<Decimal> upper = std::nullopt);

    const Decimal& amount() const noexcept { return amount_; }
    const std::optional<Entity>& unit() const noexcept { return unit_; }
    const std::optional<Decimal>& lower() const noexcept { return lower_; }
    const std::optional<Decimal>& upper() const noexcept { return upper_; }

    friend bool operator==(const Quantity&, const Quantity&) = default;
    friend auto operator<=>(const Quantity&, const Quantity&) = default;

private:
    Decimal amount_;
    std::optional<Entity> unit_;
    std::optional<Decimal> lower_;
    std::optional<Decimal> upper_;
};

// Proleptic calendar date-time. Year may be negative.
struct Timestamp {
    std::int64_t year = 0;
    int month = 1;
    int day = 1;
    int hour = 0;
    int minute = 0;
    int second = 0;

    // Accepts [+-]YYYY-MM-DD with optional THH:MM:SS and optional Z.
    // Month and day may be 00 (Wikidata writes low-precision dates that way).
    static Timestamp parse(std::string_view text);

    std::string date_string() const;  // 1903-01-01
    std::string iso_string() const;   // 1903-01-01T00:00:00Z
    bool has_time_of_day() const noexcept { return hour != 0 || minute != 0 || second != 0; }

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

namespace precision {
inline constexpr int year = 9;
inline constexpr int month = 10;
inline constexpr int day = 11;
inline constexpr int hour = 12;
inline constexpr int minute = 13;
inline constexpr int second = 14;
} // namespace precision

// Date or time value. Components finer than the precision are zero-filled on
// construction (month/day become 1, clock fields become 0).
class Time {
public:
    explicit Time(Timestamp timestamp, int precision = precision::day, int timezone = 0,
                  std::optional<Entity> calendar = std::nullopt);

    const Timestamp& timestamp() const noexcept { return timestamp_; }
    int precision() const noexcept { return precision_; }
    int timezone() const noexcept { return timezone_; }
    const std::optional<Entity>& calendar() const noexcept { return calendar_; }

    friend bool operator==(const Time&, const Time&) = default;
    friend auto operator<=>(const Time&, const Time&) = default;

private:
    Timestamp timestamp_;
    int precision_;
    int timezone_;
    std::optional<Entity> calendar_;
};

// Order of alternatives is the canonical sort rank.
using Value = std::variant<Entity, Iri, Text, String, Quantity, Time>;

// True for values with a structured ("deep") RDF representation.
bool is_deep(const Value& value) noexcept;

enum class SnakKind : std::uint8_t { value, some_value, no_value };

class Snak {
public:
    static Snak value_snak(Entity property, Value value);
    static Snak some_value(Entity property);
    static Snak no_value(Entity property);

    SnakKind kind() const noexcept { return kind_; }
    const Entity& property() const noexcept { return property_; }
    // Present iff kind() == SnakKind::value.
    const std::optional<Value>& value() const noexcept { return value_; }

    friend bool operator==(const Snak&, const Snak&) = default;
    friend auto operator<=>(const Snak&, const Snak&) = default;

private:
    Snak(Entity property, SnakKind kind, std::optional<Value> value);

    Entity property_;
    SnakKind kind_;
    std::optional<Value> value_;
};

// Claim about an entity. Identity is (subject, snak); annotations are not part
// of it.
struct Statement {
    Entity subject;
    Snak snak;

    friend bool operator==(const Statement&, const Statement&) = default;
    friend auto operator<=>(const Statement&, const Statement&) = default;
};

// Sorted, duplicate-free sequence. Serializations iterate in this order.
template <class T>
class CanonicalSet {
public:
    using value_type = T;
    using const_iterator = typename std::vector<T>::const_iterator;

    CanonicalSet() = default;
    CanonicalSet(std::initializer_list<T> items) : CanonicalSet(std::vector<T>(items)) {}
    explicit CanonicalSet(std::vector<T> items) : items_(std::move(items)) {
        std::sort(items_.begin(), items_.end());
        items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
    }

    bool insert(T item) {
        auto it = std::lower_bound(items_.begin(), items_.end(), item);
        if (it != items_.end() && *it == item) return false;
        items_.insert(it, std::move(item));
        return true;
    }

    template <class Range>
    void insert_all(const Range& range) {
        for (const auto& item : range) insert(item);
    }

    bool contains(const T& item) const {
        return std::binary_search(items_.begin(), items_.end(), item);
    }

    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const_iterator begin() const noexcept { return items_.begin(); }
    const_iterator end() const noexcept { return items_.end(); }
    const std::vector<T>& elements() const noexcept { return items_; }

    friend bool operator==(const CanonicalSet&, const CanonicalSet&) = default;
    friend auto operator<=>(const CanonicalSet&, const CanonicalSet&) = default;

private:
    std::vector<T> items_;
};

using SnakSet = CanonicalSet<Snak>;
using TextSet = CanonicalSet<Text>;

class ReferenceRecord {
public:
    explicit ReferenceRecord(SnakSet snaks);
    ReferenceRecord(std::initializer_list<Snak> snaks) : ReferenceRecord(SnakSet(snaks)) {}

    const SnakSet& snaks() const noexcept { return snaks_; }

    friend bool operator==(const ReferenceRecord&, const ReferenceRecord&) = default;
    friend auto operator<=>(const ReferenceRecord&, const ReferenceRecord&) = default;

private:
    SnakSet snaks_;
};

using ReferenceRecordSet = CanonicalSet<ReferenceRecord>;

// Underlying values give the priority order Preferred > Normal > Deprecated.
enum class Rank : std::uint8_t { deprecated = 0, normal = 1, preferred = 2 };

struct AnnotationRecord {
    SnakSet qualifiers;
    ReferenceRecordSet references;
    Rank rank = Rank::normal;

    friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
    friend auto operator<=>(const AnnotationRecord&, const AnnotationRecord&) = default;
};

using AnnotationRecordSet = CanonicalSet<AnnotationRecord>;

// Label, description and aliases of an entity in one language.
struct Descriptor {
    std::optional<Text> label;
    std::optional<Text> description;
    TextSet aliases;

    bool empty() const noexcept { return !label && !description && aliases.empty(); }

    friend bool operator==(const Descriptor&, const Descriptor&) = default;
    friend auto operator<=>(const Descriptor&, const Descriptor&) = default;
};

// Something that identifies an entity (or, in value position, a value):
// a constant, a snak the entity satisfies, or a set of such snaks.
class Fingerprint {
public:
    enum class Kind : std::uint8_t { constant, snak, snak_set };
    using Body = std::variant<Value, Snak, SnakSet>;

    static Fingerprint constant(Value value) { return Fingerprint(Body(std::move(value))); }
    static Fingerprint entity(Entity entity) { return constant(Value(std::move(entity))); }
    static Fingerprint snak(Snak snak) { return Fingerprint(Body(std::move(snak))); }
    static Fingerprint snaks(SnakSet snaks);

    Kind kind() const noexcept { return static_cast<Kind>(body_.index()); }
    const Value* as_constant() const noexcept { return std::get_if<Value>(&body_); }
    const Entity* as_entity() const noexcept;
    // Snaks the identified entity must satisfy (one element for Kind::snak,
    // empty for constants).
    SnakSet required_snaks() const;
    const Body& body() const noexcept { return body_; }

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
    friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;

private:
    explicit Fingerprint(Body body) : body_(std::move(body)) {}

    Body body_;
};

class SnakMask {
public:
    constexpr SnakMask() = default;
    static constexpr SnakMask all() { return SnakMask(0b111); }
    static constexpr SnakMask only(SnakKind kind) { return SnakMask(bit(kind)); }
    static constexpr SnakMask of(std::initializer_list<SnakKind> kinds) {
        std::uint8_t bits = 0;
        for (auto k : kinds) bits |= bit(k);
        return SnakMask(bits);
    }

    constexpr bool has(SnakKind kind) const noexcept { return (bits_ & bit(kind)) != 0; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    constexpr std::uint8_t bits() const noexcept { return bits_; }
    constexpr SnakMask operator&(SnakMask other) const { return SnakMask(bits_ & other.bits_); }
    constexpr SnakMask operator|(SnakMask other) const { return SnakMask(bits_ | other.bits_); }

    friend constexpr bool operator==(SnakMask, SnakMask) = default;
    friend constexpr auto operator<=>(SnakMask, SnakMask) = default;

private:
    constexpr explicit SnakMask(std::uint8_t bits) : bits_(bits) {}
    static constexpr std::uint8_t bit(SnakKind k) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(k));
    }

    std::uint8_t bits_ = 0;
};

// Query over statements. Absent fields match anything. A value fingerprint
// restricts matches to value snaks, so the mask is narrowed accordingly.
class FilterPattern {
public:
    FilterPattern() = default;
    FilterPattern(std::optional<Fingerprint> subject, std::optional<Fingerprint> property,
                  std::optional<Fingerprint> value, SnakMask kinds = SnakMask::all());

    static FilterPattern any() { return FilterPattern(); }

    const std::optional<Fingerprint>& subject() const noexcept { return subject_; }
    const std::optional<Fingerprint>& property() const noexcept { return property_; }
    const std::optional<Fingerprint>& value() const noexcept { return value_; }
    SnakMask snak_kinds() const noexcept { return kinds_; }

    // Throws UnsupportedFingerprint for fingerprints no backend evaluates:
    // non-entity property fingerprints, non-entity subject constants, and
    // fingerprint snaks that are not value snaks.
    void check_supported() const;

    friend bool operator==(const FilterPattern&, const FilterPattern&) = default;
    friend auto operator<=>(const FilterPattern&, const FilterPattern&) = default;

private:
    std::optional<Fingerprint> subject_;
    std::optional<Fingerprint> property_;
    std::optional<Fingerprint> value_;
    SnakMask kinds_ = SnakMask::all();
};

// A statement together with all of its annotation records; the unit of the
// memory-store fixture format.
struct AnnotatedStatement {
    Statement statement;
    AnnotationRecordSet annotations;

    friend bool operator==(const AnnotatedStatement&, const AnnotatedStatement&) = default;
    friend auto operator<=>(const AnnotatedStatement&, const AnnotatedStatement&) = default;
};

struct EntityDescriptor {
    Entity entity;
    Descriptor descriptor;

    friend bool operator==(const EntityDescriptor&, const EntityDescriptor&) = default;
    friend auto operator<=>(const EntityDescriptor&, const EntityDescriptor&) = default;
};

// Any top-level model object. Alternative order is the canonical sort rank
// used when objects of different sorts are compared.
using Object = std::variant<Value, Snak, Statement, ReferenceRecord, Rank, AnnotationRecord,
                            SnakSet, ReferenceRecordSet, AnnotationRecordSet, TextSet, Descriptor,
                            FilterPattern, AnnotatedStatement, EntityDescriptor>;

// Total order on model objects, consistent with ==.
std::strong_ordering canonical_compare(const Object& a, const Object& b);

// Convenience constructors.
Statement value_statement(Entity subject, Entity property, Value value);

} // namespace kif
