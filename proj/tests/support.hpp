#pragma once

#include <filesystem>
#include <string>

#include "huuzlee/machine.hpp"
#include "huuzlee/parser.hpp"
#include "huuzlee/source.hpp"

namespace huuzlee::testing {

inline std::filesystem::path corpus(const std::string& name) { return std::filesystem::path(HUUZLEE_CORPUS_DIR) / name; }

inline lang::ActorDefinition parse_text(const std::string& text) { return lang::parse_source({text, "inline"}); }

inline lang::ActorDefinition parse_corpus(const std::string& name) { return lang::parse_source(read_source(corpus(name))); }

inline machine::CompiledMachine compile_corpus(const std::string& name) { return machine::compile(parse_corpus(name)); }

inline lang::FragmentDecl fragment_corpus(const std::string& name) {
    return lang::parse_fragment_source(read_source(corpus(name)));
}

inline machine::Envelope offer(const std::string& type, const std::string& product, const std::string& price,
                               const std::string& quantity, const std::string& buyer, const std::string& seller,
                               const std::string& to = "C") {
    machine::Envelope env;
    env.to = Address{to};
    env.message_type = type;
    env.payload["product"] = product;
    env.payload["price"] = *Decimal::parse(price);
    env.payload["quantity"] = *Decimal::parse(quantity);
    env.payload["buyer"] = Address{buyer};
    env.payload["seller"] = Address{seller};
    env.sender = Address{type == "buyoffermsg" ? buyer : seller};
    return env;
}

} // namespace huuzlee::testing
