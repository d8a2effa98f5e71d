#include "huuzlee/lexer.hpp"

#include <cctype>

namespace huuzlee::lang {

std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::String: return "string";
    case TokenKind::NoOpString: return "'...'";
    case TokenKind::LBrace: return "{";
    case TokenKind::RBrace: return "}";
    case TokenKind::Comma: return ",";
    case TokenKind::Colon: return ":";
    case TokenKind::Arrow: return "=>";
    case TokenKind::Compare: return "comparison";
    case TokenKind::HandlerTag: return "#handler";
    case TokenKind::StateRef: return "$state";
    case TokenKind::DataRef: return "@data";
    case TokenKind::ThisRef: return "*THIS";
    case TokenKind::Star: return "*";
    case TokenKind::Wildcard: return "?";
    case TokenKind::TemplateOpen: return ">>>";
    case TokenKind::TemplateText: return "template text";
    case TokenKind::Continuation: return "-->";
    case TokenKind::TemplateClose: return "<<<";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        while (true) {
            skip_trivia();
            if (at_end()) break;
            lex_token();
        }
        tokens_.push_back({TokenKind::End, "", here()});
        return std::move(tokens_);
    }

private:
    bool at_end() const { return i_ >= text_.size(); }
    char peek(std::size_t ahead = 0) const { return i_ + ahead < text_.size() ? text_[i_ + ahead] : '\0'; }
    bool starts_with(std::string_view s) const { return text_.substr(i_, s.size()) == s; }
    Position here() const { return {line_, col_}; }

    void advance(std::size_t n = 1) {
        for (std::size_t k = 0; k < n && i_ < text_.size(); ++k) {
            if (text_[i_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++i_;
        }
    }

    void emit(TokenKind kind, std::string text, Position pos) { tokens_.push_back({kind, std::move(text), pos}); }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (starts_with("//")) {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    std::string read_ident() {
        std::string out;
        while (!at_end() && ident_char(peek())) {
            out += peek();
            advance();
        }
        return out;
    }

    // ident ( '.' ident )?
    std::string read_path(Position pos) {
        std::string out = read_ident();
        if (peek() == '.' && ident_start(peek(1))) {
            advance();
            out += '.';
            out += read_ident();
        } else if (peek() == '.' && !in_template_) {
            throw LexError(pos, "expected field name after '.'");
        }
        return out;
    }

    void lex_token() {
        Position pos = here();
        char c = peek();

        if (ident_start(c)) {
            emit(TokenKind::Ident, read_ident(), pos);
            return;
        }
        if (digit(c) || (c == '-' && digit(peek(1)))) {
            lex_number(pos);
            return;
        }
        switch (c) {
        case '{': advance(); emit(TokenKind::LBrace, "{", pos); return;
        case '}': advance(); emit(TokenKind::RBrace, "}", pos); return;
        case ',': advance(); emit(TokenKind::Comma, ",", pos); return;
        case ':': advance(); emit(TokenKind::Colon, ":", pos); return;
        case '?': advance(); emit(TokenKind::Wildcard, "?", pos); return;
        case '"': lex_string(pos); return;
        case '\'': lex_noop(pos); return;
        case '#': sigil(TokenKind::HandlerTag, pos, false); return;
        case '$': sigil(TokenKind::StateRef, pos, false); return;
        case '@': sigil(TokenKind::DataRef, pos, true); return;
        case '*':
            if (ident_start(peek(1))) {
                sigil(TokenKind::ThisRef, pos, true);
            } else {
                advance();
                emit(TokenKind::Star, "*", pos);
            }
            return;
        default: break;
        }
        if (starts_with(">>>")) {
            advance(3);
            emit(TokenKind::TemplateOpen, ">>>", pos);
            lex_template();
            return;
        }
        for (std::string_view op : {"==", "!=", "<=", ">="}) {
            if (starts_with(op)) {
                advance(2);
                emit(TokenKind::Compare, std::string(op), pos);
                return;
            }
        }
        if (starts_with("=>")) {
            advance(2);
            emit(TokenKind::Arrow, "=>", pos);
            return;
        }
        if (c == '<' || c == '>') {
            advance();
            emit(TokenKind::Compare, std::string(1, c), pos);
            return;
        }
        throw LexError(pos, std::string("unexpected character '") + c + "'");
    }

    void sigil(TokenKind kind, Position pos, bool allow_field) {
        char s = peek();
        advance();
        if (!ident_start(peek())) throw LexError(pos, std::string("expected name after '") + s + "'");
        emit(kind, allow_field ? read_path(pos) : read_ident(), pos);
    }

    void lex_number(Position pos) {
        std::string out;
        if (peek() == '-') {
            out += '-';
            advance();
        }
        while (digit(peek())) {
            out += peek();
            advance();
        }
        if (peek() == '.' && digit(peek(1))) {
            out += '.';
            advance();
            while (digit(peek())) {
                out += peek();
                advance();
            }
        }
        if (ident_char(peek())) throw LexError(pos, "malformed number");
        emit(TokenKind::Number, out, pos);
    }

    void lex_string(Position pos) {
        advance();
        std::string out;
        while (true) {
            if (at_end()) throw LexError(pos, "unterminated string");
            char c = peek();
            if (c == '"') break;
            if (c == '\\') {
                advance();
                if (at_end()) throw LexError(pos, "unterminated string");
                c = peek();
                if (c != '"' && c != '\\') throw LexError(here(), "unknown escape");
            }
            out += c;
            advance();
        }
        advance();
        emit(TokenKind::String, out, pos);
    }

    void lex_noop(Position pos) {
        advance();
        std::string out;
        while (!at_end() && peek() != '\'') {
            out += peek();
            advance();
        }
        if (at_end()) throw LexError(pos, "unterminated quoted string");
        advance();
        emit(TokenKind::NoOpString, out, pos);
    }

    // Raw text until "<<<"; recognises @refs and "-->" continuations.
    void lex_template() {
        in_template_ = true;
        std::string text;
        Position text_pos = here();
        auto flush = [&] {
            if (!text.empty()) emit(TokenKind::TemplateText, std::move(text), text_pos);
            text.clear();
        };
        while (true) {
            if (at_end()) throw LexError(tokens_.back().pos, "unterminated template, expected <<<");
            if (starts_with("<<<")) {
                flush();
                Position pos = here();
                advance(3);
                emit(TokenKind::TemplateClose, "<<<", pos);
                break;
            }
            if (starts_with("-->")) {
                flush();
                Position pos = here();
                advance(3);
                emit(TokenKind::Continuation, "-->", pos);
                text_pos = here();
                continue;
            }
            if (peek() == '@' && ident_start(peek(1))) {
                flush();
                Position pos = here();
                advance();
                emit(TokenKind::DataRef, read_path(pos), pos);
                text_pos = here();
                continue;
            }
            if (text.empty()) text_pos = here();
            text += peek();
            advance();
        }
        in_template_ = false;
    }

    std::string_view text_;
    std::size_t i_ = 0;
    std::uint32_t line_ = 1;
    std::uint32_t col_ = 1;
    bool in_template_ = false;
    std::vector<Token> tokens_;
};

} // namespace

std::vector<Token> tokenize(const SourceUnit& src) {
    if (src.text.empty()) throw LexError({1, 1}, "empty input");
    return Lexer(src.text).run();
}

} // namespace huuzlee::lang
