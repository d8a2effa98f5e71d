#pragma once

// Brute-force reference for record unification. Test-only.

#include <optional>
#include <string>
#include <vector>

#include "huuzlee/value.hpp"

namespace huuzlee::testing {

// Brute force: the unifier exists iff exactly one ground record over the
// value domain agrees with every bound field of both operands.
inline std::optional<Payload> oracle(const Payload& a, const Payload& b, const std::vector<Value>& domain) {
    std::vector<std::string> keys;
    for (const auto& kv : a) keys.push_back(kv.first);
    std::vector<Payload> found;
    std::vector<std::size_t> idx(keys.size(), 0);
    while (true) {
        Payload cand;
        for (std::size_t i = 0; i < keys.size(); ++i) cand[keys[i]] = domain[idx[i]];
        bool fits = true;
        for (const auto& k : keys) {
            if (is_bound(a.at(k)) && a.at(k) != cand[k]) fits = false;
            if (is_bound(b.at(k)) && b.at(k) != cand[k]) fits = false;
        }
        if (fits) found.push_back(cand);
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] == domain.size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    if (found.size() != 1) return std::nullopt;
    return found.front();
}

inline Payload pattern(const std::vector<std::string>& keys, int code, const std::vector<Value>& choices) {
    Payload p;
    for (const auto& k : keys) {
        p[k] = choices[code % choices.size()];
        code /= static_cast<int>(choices.size());
    }
    return p;
}


} // namespace huuzlee::testing
