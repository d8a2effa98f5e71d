#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "huuzlee/source.hpp"

namespace huuzlee::lang {

enum class TokenKind {
    Ident,
    Number,
    String,       // "double quoted" literal, escapes resolved
    NoOpString,   // 'single quoted' no-op marker
    LBrace,
    RBrace,
    Comma,
    Colon,
    Arrow,        // =>
    Compare,      // == != < <= > >=
    HandlerTag,   // #name
    StateRef,     // $Name
    DataRef,      // @record or @record.field
    ThisRef,      // *THIS or *THIS.field
    Star,         // bare *
    Wildcard,     // ?
    TemplateOpen, // >>>
    TemplateText,
    Continuation, // -->
    TemplateClose,// <<<
    End,
};

std::string_view to_string(TokenKind kind);

struct Token {
    TokenKind kind;
    std::string text;
    Position pos;
};

class LexError : public SyntaxError {
public:
    LexError(Position pos, const std::string& message) : SyntaxError("LexError", pos, message) {}
};

/// Splits a source unit into tokens. The result always ends with an End token.
///
/// `//` starts a comment running to end of line (outside strings and
/// templates). Inside `>>> ... <<<` the text is raw: only `@ref` and `-->`
/// are recognised.
std::vector<Token> tokenize(const SourceUnit& src);

} // namespace huuzlee::lang
