#include "huuzlee/value.hpp"

#include <algorithm>
#include <cctype>

namespace huuzlee {

std::optional<Decimal> Decimal::parse(std::string_view text) {
    bool negative = false;
    if (!text.empty() && text.front() == '-') {
        negative = true;
        text.remove_prefix(1);
    }
    auto dot = text.find('.');
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    auto all_digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    if (int_part.empty() || !all_digits(int_part)) return std::nullopt;
    if (dot != std::string_view::npos && (frac_part.empty() || !all_digits(frac_part))) return std::nullopt;

    while (int_part.size() > 1 && int_part.front() == '0') int_part.remove_prefix(1);
    while (!frac_part.empty() && frac_part.back() == '0') frac_part.remove_suffix(1);

    std::string out;
    bool zero = int_part == "0" && frac_part.empty();
    if (negative && !zero) out += '-';
    out += int_part;
    if (!frac_part.empty()) {
        out += '.';
        out += frac_part;
    }
    return Decimal(std::move(out));
}

namespace {

// Compares magnitudes of two canonical, unsigned decimal strings.
std::strong_ordering compare_magnitude(std::string_view a, std::string_view b) {
    auto split = [](std::string_view s) {
        auto dot = s.find('.');
        if (dot == std::string_view::npos) return std::pair{s, std::string_view{}};
        return std::pair{s.substr(0, dot), s.substr(dot + 1)};
    };
    auto [ai, af] = split(a);
    auto [bi, bf] = split(b);
    if (ai.size() != bi.size()) return ai.size() <=> bi.size();
    if (auto c = ai.compare(bi); c != 0) return c <=> 0;
    std::size_t width = std::max(af.size(), bf.size());
    for (std::size_t i = 0; i < width; ++i) {
        char ca = i < af.size() ? af[i] : '0';
        char cb = i < bf.size() ? bf[i] : '0';
        if (ca != cb) return ca <=> cb;
    }
    return std::strong_ordering::equal;
}

} // namespace

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) {
    bool na = !a.text_.empty() && a.text_.front() == '-';
    bool nb = !b.text_.empty() && b.text_.front() == '-';
    if (na != nb) return na ? std::strong_ordering::less : std::strong_ordering::greater;
    std::string_view ma = na ? std::string_view(a.text_).substr(1) : std::string_view(a.text_);
    std::string_view mb = nb ? std::string_view(b.text_).substr(1) : std::string_view(b.text_);
    auto c = compare_magnitude(ma, mb);
    if (na) return 0 <=> c;
    return c;
}

std::string render_value(const Value& v) {
    struct Visitor {
        std::string operator()(Unbound) const { return "?"; }
        std::string operator()(const std::string& s) const { return s; }
        std::string operator()(const Decimal& d) const { return d.str(); }
        std::string operator()(const Address& a) const { return a.name; }
    };
    return std::visit(Visitor{}, v);
}

std::string value_literal(const Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) {
        std::string out = "\"";
        for (char c : *s) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
        return out;
    }
    return render_value(v);
}

} // namespace huuzlee
