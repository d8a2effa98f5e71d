#include <gtest/gtest.h>

#include "huuzlee/validate.hpp"
#include "support.hpp"

using namespace huuzlee;
using namespace huuzlee::lang;
using huuzlee::testing::parse_corpus;
using huuzlee::testing::parse_text;

namespace {

std::vector<std::string> codes(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& d : validate(parse_text(text), "inline")) out.push_back(d.code);
    return out;
}

} // namespace

TEST(Validate, Figure6IsClean) { EXPECT_TRUE(validate(parse_corpus("figure6.hzl"), "figure6.hzl").empty()); }

TEST(Validate, CaseInsensitiveStateResolution) {
    EXPECT_TRUE(codes("ACTOR { DATA { } MODEL { Open { #m { transitionTo { $OPEN } } } } }").empty());
    EXPECT_TRUE(codes("ACTOR { DATA { } MODEL { Open { #m { transitionTo { $open } } } } }").empty());
}

TEST(Validate, UnresolvedState) {
    auto diags = validate(parse_text("ACTOR { DATA { } MODEL { S { #m {\n  transitionTo { $Missing } } } } }"), "x.hzl");
    ASSERT_EQ(diags.size(), 1u);
    EXPECT_EQ(diags[0].code, "UnresolvedState");
    EXPECT_NE(diags[0].message.find("Missing"), std::string::npos);
    EXPECT_EQ(diags[0].file, "x.hzl");
    EXPECT_EQ(diags[0].line, 2u);
    EXPECT_EQ(diags[0].column, 3u);
}

TEST(Validate, DuplicateEnter) {
    EXPECT_EQ(codes("ACTOR { DATA { } MODEL { S { #Enter { 'a' }, #Enter { 'b' } } } }"),
              std::vector<std::string>{"DuplicateHandler"});
}

TEST(Validate, DuplicateMessageHandler) {
    EXPECT_EQ(codes("ACTOR { DATA { } MODEL { S { #m { 'a' }, #m { 'b' } } } }"), std::vector<std::string>{"DuplicateHandler"});
}

TEST(Validate, DuplicateStatesDifferingOnlyInCase) {
    EXPECT_EQ(codes("ACTOR { DATA { } MODEL { S { #m { 'a' } }, s { #m { 'b' } } } }"),
              std::vector<std::string>{"DuplicateState"});
}

TEST(Validate, DataReferences) {
    EXPECT_EQ(codes("ACTOR { DATA { r { a {?} } } MODEL { S { #m { map { *THIS, @q } } } } }"),
              std::vector<std::string>{"UnresolvedRecord"});
    EXPECT_EQ(codes("ACTOR { DATA { r { a {?} } } MODEL { S { #m { send { @r.b, compose >>> hi <<< } } } } }"),
              std::vector<std::string>{"UnresolvedField"});
    EXPECT_EQ(codes("ACTOR { DATA { r { a {?} } } MODEL { S { #m { send { @r.a, compose >>> hi @r.z <<< } } } } }"),
              std::vector<std::string>{"UnresolvedField"});
}

TEST(Validate, FieldReferencesAreCaseSensitive) {
    EXPECT_EQ(codes("ACTOR { DATA { r { a {?} } } MODEL { S { #m { send { @r.A, compose >>> hi <<< } } } } }"),
              std::vector<std::string>{"UnresolvedField"});
}

TEST(Validate, MatchOperandsMustShareFields) {
    EXPECT_EQ(codes("ACTOR { DATA { a { x {?} } b { y {?} } } MODEL { S { #m { match { @a, @b } } } } }"),
              std::vector<std::string>{"SchemaMismatch"});
}

TEST(Validate, RecordSendNeedsType) {
    EXPECT_EQ(codes("ACTOR { DATA { a { x {?} } } MODEL { S { #m { send { @a.x, @a } } } } }"),
              std::vector<std::string>{"BadSendBody"});
}

TEST(Validate, DiagnosticsCarryPositions) {
    auto def = parse_text("ACTOR { DATA { r { a {?}, a {?} } } MODEL {\n S { #m { transitionTo { $X } }, #m { map { *THIS, @q } } } } }");
    auto diags = validate(def, "inline");
    ASSERT_FALSE(diags.empty());
    for (const auto& d : diags) {
        EXPECT_GE(d.line, 1u) << d.code;
        EXPECT_GE(d.column, 1u) << d.code;
    }
}
