#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace huuzlee {

/// Exact decimal number kept in canonical text form.
///
/// Replicas must agree bit for bit, so there is no binary floating point
/// anywhere in the value model. Only parsing, printing and ordering are
/// needed; contracts never do arithmetic.
class Decimal {
public:
    Decimal() : text_("0") {}

    /// Parses `-?[0-9]+(\.[0-9]+)?`. Returns nullopt on anything else.
    static std::optional<Decimal> parse(std::string_view text);

    /// Canonical form: no leading zeros, no trailing fractional zeros, no "-0".
    const std::string& str() const { return text_; }

    friend bool operator==(const Decimal&, const Decimal&) = default;
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b);

private:
    explicit Decimal(std::string canonical) : text_(std::move(canonical)) {}
    std::string text_;
};

struct Unbound {
    friend bool operator==(Unbound, Unbound) { return true; }
};

struct Address {
    std::string name;
    friend bool operator==(const Address&, const Address&) = default;
};

/// A field value. Unbound corresponds to the `{?}` wildcard.
using Value = std::variant<Unbound, std::string, Decimal, Address>;

inline bool is_bound(const Value& v) { return !std::holds_alternative<Unbound>(v); }

/// Human-readable rendering used by templates: strings verbatim, decimals
/// canonical, addresses by name, unbound as "?".
std::string render_value(const Value& v);

/// Literal form used in source and scenario files: "text", 12.5, Name, ?.
std::string value_literal(const Value& v);

/// Message payload: field names form a set, iteration is lexicographic.
using Payload = std::map<std::string, Value>;

} // namespace huuzlee
