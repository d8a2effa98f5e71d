#include "huuzlee/canon.hpp"

#include <array>
#include <stdexcept>

#include <openssl/evp.h>
#include <openssl/hmac.h>

namespace huuzlee::canon {

Writer& Writer::value(const Value& v) {
    struct Visitor {
        Writer& w;
        void operator()(Unbound) const { w.tag('U'); }
        void operator()(const std::string& s) const { w.tag('S').str(s); }
        void operator()(const Decimal& d) const { w.tag('N').str(d.str()); }
        void operator()(const Address& a) const { w.tag('A').str(a.name); }
    };
    std::visit(Visitor{*this}, v);
    return *this;
}

Writer& Writer::payload(const Payload& p) {
    tag('P').integer(p.size());
    for (const auto& [name, v] : p) str(name).value(v);
    return *this;
}

namespace {

std::string to_hex(const unsigned char* data, std::size_t len) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (std::size_t i = 0; i < len; ++i) {
        out += digits[data[i] >> 4];
        out += digits[data[i] & 0xf];
    }
    return out;
}

} // namespace

std::string sha256_hex(std::string_view bytes) {
    // explicit fetch once; the implicit per-call lookup dominates for short inputs
    static EVP_MD* sha256 = EVP_MD_fetch(nullptr, "SHA256", nullptr);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!sha256 || EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, sha256, nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    return to_hex(md.data(), len);
}

std::string hmac_sha256_hex(std::string_view key, std::string_view message) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
              reinterpret_cast<const unsigned char*>(message.data()), message.size(), md.data(), &len))
        throw std::runtime_error("hmac failed");
    return to_hex(md.data(), len);
}

const std::string& zero_digest() {
    static const std::string zeros(64, '0');
    return zeros;
}

bool is_digest(std::string_view s) {
    if (s.size() != 64) return false;
    for (char c : s)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    return true;
}

} // namespace huuzlee::canon
