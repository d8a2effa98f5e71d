#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "huuzlee/value.hpp"

/// Canonical byte encoding used for every digest in the system.
///
///   string  := <decimal length> ':' <bytes>
///   integer := <decimal> ';'
///   Value   := 'U' | 'S' string | 'N' string | 'A' string
///   Payload := 'P' integer (string Value)*      keys in lexicographic order
///
/// Higher layers compose these with their own one-byte tags.
namespace huuzlee::canon {

class Writer {
public:
    Writer& tag(char c) {
        buf_ += c;
        return *this;
    }
    Writer& str(std::string_view s) {
        buf_ += std::to_string(s.size());
        buf_ += ':';
        buf_ += s;
        return *this;
    }
    Writer& integer(std::uint64_t n) {
        buf_ += std::to_string(n);
        buf_ += ';';
        return *this;
    }
    Writer& flag(bool b) { return tag(b ? 'T' : 'F'); }
    Writer& value(const Value& v);
    Writer& payload(const Payload& p);

    const std::string& bytes() const { return buf_; }
    std::string take() { return std::move(buf_); }

private:
    std::string buf_;
};

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

/// Lower-case hex HMAC-SHA256.
std::string hmac_sha256_hex(std::string_view key, std::string_view message);

/// 64 '0' characters; the genesis predecessor of every hash chain.
const std::string& zero_digest();

bool is_digest(std::string_view s);

} // namespace huuzlee::canon
