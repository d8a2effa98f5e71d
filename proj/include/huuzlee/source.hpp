#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace huuzlee {

/// Line/column of a token, 1-based.
///
/// Positions are metadata: two AST nodes parsed from differently laid out
/// text are structurally equal, so Position always compares equal.
struct Position {
    std::uint32_t line = 0;
    std::uint32_t column = 0;

    friend bool operator==(const Position&, const Position&) { return true; }
};

struct SourceUnit {
    std::string text;
    std::string origin; // file path or inline label
};

/// Reads a whole file. Throws std::runtime_error when it cannot be opened.
SourceUnit read_source(const std::filesystem::path& path);

/// Structured finding: (file, line, column, code, message).
struct Diagnostic {
    std::string file;
    std::uint32_t line = 0;
    std::uint32_t column = 0;
    std::string code;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

/// Base of all positioned syntax errors (lexer, parser, file formats).
class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::string code, Position pos, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)), pos_(pos) {}

    const std::string& code() const { return code_; }
    Position position() const { return pos_; }

    Diagnostic to_diagnostic(const std::string& file) const {
        return {file, pos_.line, pos_.column, code_, what()};
    }

private:
    std::string code_;
    Position pos_;
};

} // namespace huuzlee
