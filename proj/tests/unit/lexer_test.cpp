#include <gtest/gtest.h>

#include "huuzlee/lexer.hpp"

using namespace huuzlee;
using namespace huuzlee::lang;

namespace {

std::vector<TokenKind> kinds(const std::string& text) {
    std::vector<TokenKind> out;
    for (const auto& t : tokenize({text, "inline"})) out.push_back(t.kind);
    return out;
}

} // namespace

TEST(Lexer, TransitionBraceForm) {
    auto toks = tokenize({"transitionTo { $OPEN }", "inline"});
    ASSERT_EQ(toks.size(), 5u);
    EXPECT_EQ(toks[0].kind, TokenKind::Ident);
    EXPECT_EQ(toks[0].text, "transitionTo");
    EXPECT_EQ(toks[1].kind, TokenKind::LBrace);
    EXPECT_EQ(toks[2].kind, TokenKind::StateRef);
    EXPECT_EQ(toks[2].text, "OPEN");
    EXPECT_EQ(toks[3].kind, TokenKind::RBrace);
    EXPECT_EQ(toks[4].kind, TokenKind::End);
}

TEST(Lexer, EmptyInputIsAnError) {
    try {
        tokenize({"", "inline"});
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_NE(std::string(e.what()).find("empty input"), std::string::npos);
    }
}

TEST(Lexer, WildcardField) {
    EXPECT_EQ(kinds("price {?}"), (std::vector<TokenKind>{TokenKind::Ident, TokenKind::LBrace, TokenKind::Wildcard,
                                                          TokenKind::RBrace, TokenKind::End}));
}

TEST(Lexer, SigilsAndPunctuation) {
    auto toks = tokenize({"#Enter @contract.buyer *THIS * => , 'do nothing' 12.5 \"a\\\"b\" _", "inline"});
    std::vector<TokenKind> expect{TokenKind::HandlerTag, TokenKind::DataRef, TokenKind::ThisRef, TokenKind::Star,
                                  TokenKind::Arrow,      TokenKind::Comma,   TokenKind::NoOpString, TokenKind::Number,
                                  TokenKind::String,     TokenKind::Ident,   TokenKind::End};
    ASSERT_EQ(toks.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(toks[i].kind, expect[i]) << i;
    EXPECT_EQ(toks[0].text, "Enter");
    EXPECT_EQ(toks[1].text, "contract.buyer");
    EXPECT_EQ(toks[8].text, "a\"b");
}

TEST(Lexer, TemplateTokens) {
    auto toks = tokenize({"compose >>> Buy @c.q unit\n --> of @c.p <<<", "inline"});
    std::vector<TokenKind> expect{TokenKind::Ident,        TokenKind::TemplateOpen, TokenKind::TemplateText,
                                  TokenKind::DataRef,      TokenKind::TemplateText, TokenKind::Continuation,
                                  TokenKind::TemplateText, TokenKind::DataRef,      TokenKind::TemplateText,
                                  TokenKind::TemplateClose, TokenKind::End};
    ASSERT_EQ(toks.size(), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_EQ(toks[i].kind, expect[i]) << i;
}

TEST(Lexer, CommentsAreSkipped) {
    EXPECT_EQ(kinds("// hello\nfoo // trailing\n"), (std::vector<TokenKind>{TokenKind::Ident, TokenKind::End}));
}

TEST(Lexer, PositionsAreOneBased) {
    auto toks = tokenize({"a\n  $B", "inline"});
    EXPECT_EQ(toks[0].pos.line, 1u);
    EXPECT_EQ(toks[0].pos.column, 1u);
    EXPECT_EQ(toks[1].pos.line, 2u);
    EXPECT_EQ(toks[1].pos.column, 3u);
}

TEST(Lexer, ForeignCharacterCarriesPosition) {
    try {
        tokenize({"ACTOR {\n  ~\n}", "inline"});
        FAIL() << "expected LexError";
    } catch (const LexError& e) {
        EXPECT_EQ(e.position().line, 2u);
        EXPECT_EQ(e.position().column, 3u);
    }
}

TEST(Lexer, UnterminatedTemplate) { EXPECT_THROW(tokenize({"compose >>> abc", "inline"}), LexError); }
