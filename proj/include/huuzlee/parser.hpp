#pragma once

#include <set>
#include <string>
#include <vector>

#include "huuzlee/ast.hpp"
#include "huuzlee/lexer.hpp"

namespace huuzlee::lang {

/// Grammar (commas between list items are optional separators):
///
///   actor   := "ACTOR" "{" data model "}"
///   data    := "DATA" "{" record* "}"
///   record  := IDENT "{" field ("," field)* "}"
///   field   := IDENT "{" ("?" | literal) "}"
///   model   := "MODEL" "{" state ("," state)* "}"
///   state   := IDENT "{" handler ("," handler)* "}"
///   handler := "#" IDENT "{" action ("," action)* "}"
///   action  := "transitionTo" ("{" target "}" | "=>" target)
///            | "map" "{" "*THIS" "," DATAREF "}"
///            | "match" "{" DATAREF "," DATAREF ["," "into" DATAREF]
///                      ("," ("@SUCCEEDS"|"@FAILS") (block | action))* "}"
///            | "send" "{" DATAREF "," ["#" IDENT ","] (compose | DATAREF) "}"
///            | "terminateActor"
///            | "'...'"
///   compose := "compose" ">>>" (TEXT | DATAREF | "-->")* "<<<"
///   target  := STATEREF | "_"
class ParseError : public SyntaxError {
public:
    ParseError(Position pos, std::set<std::string> expected, const std::string& found);
    ParseError(std::string code, Position pos, const std::string& message)
        : SyntaxError(std::move(code), pos, message) {}

    const std::set<std::string>& expected() const { return expected_; }

private:
    std::set<std::string> expected_;
};

ActorDefinition parse(const std::vector<Token>& tokens);

/// tokenize + parse.
ActorDefinition parse_source(const SourceUnit& src);

// ---- behaviour fragments (.bhv) ----------------------------------------

/// `*THIS.field` inside a guard condition.
struct PayloadField {
    std::string field;
    friend bool operator==(const PayloadField&, const PayloadField&) = default;
};

using Operand = std::variant<PayloadField, DataRef, Value>;

struct Condition {
    Operand lhs;
    std::string op; // == != < <= > >=
    Operand rhs;
    Position pos;
    friend bool operator==(const Condition&, const Condition&) = default;
};

struct InterceptorDecl {
    enum class Phase { Guard, Before, After };
    Phase phase = Phase::Guard;
    std::string state_pattern;   // state name or "*"
    std::string message_pattern; // message type or "*"
    std::vector<Condition> conditions; // Guard only
    std::vector<Action> actions;       // Before / After only
    Position pos;
    friend bool operator==(const InterceptorDecl&, const InterceptorDecl&) = default;
};

///   fragment    := "BEHAVIOR" IDENT "{" interceptor ("," interceptor)* "}"
///   interceptor := "guard" pattern "{" condition ("," condition)* "}"
///                | ("before" | "after") pattern "{" action ("," action)* "}"
///   pattern     := (IDENT | "*") ":" (IDENT | "*")
///   condition   := operand CMP operand
///   operand     := "*THIS." IDENT | DATAREF | literal
struct FragmentDecl {
    std::string name;
    std::vector<InterceptorDecl> interceptors;
    Position pos;
    friend bool operator==(const FragmentDecl&, const FragmentDecl&) = default;
};

FragmentDecl parse_fragment(const std::vector<Token>& tokens);
FragmentDecl parse_fragment_source(const SourceUnit& src);

} // namespace huuzlee::lang
