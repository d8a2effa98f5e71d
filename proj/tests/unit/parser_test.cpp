#include <gtest/gtest.h>

#include "huuzlee/parser.hpp"
#include "support.hpp"

using namespace huuzlee;
using namespace huuzlee::lang;
using huuzlee::testing::parse_corpus;
using huuzlee::testing::parse_text;

TEST(Parser, Figure6Shape) {
    auto def = parse_corpus("figure6.hzl");
    ASSERT_EQ(def.records.size(), 3u);
    EXPECT_EQ(def.records[0].name, "buyoffer");
    EXPECT_EQ(def.records[1].name, "selloffer");
    EXPECT_EQ(def.records[2].name, "contract");
    ASSERT_EQ(def.states.size(), 3u);
    EXPECT_EQ(def.states[0].name, "Initially");
    EXPECT_EQ(def.states[1].name, "Open");
    EXPECT_EQ(def.states[2].name, "Closed");
    for (const auto& r : def.records) {
        ASSERT_EQ(r.fields.size(), 5u);
        for (const auto& f : r.fields) EXPECT_FALSE(is_bound(f.initial)) << r.name << "." << f.name;
    }
    const auto& open = def.states[1];
    ASSERT_EQ(open.handlers.size(), 4u);
    EXPECT_EQ(open.handlers[1].trigger, Trigger::on("buyoffermsg"));
    EXPECT_EQ(open.handlers[2].trigger, Trigger::on("selloffermsg"));
    EXPECT_EQ(open.handlers[3].trigger, Trigger::exit());
}

TEST(Parser, Figure6ExitTemplates) {
    auto def = parse_corpus("figure6.hzl");
    const auto& exit = def.states[1].handlers[3];
    ASSERT_EQ(exit.actions.size(), 2u);
    const auto& send = std::get<Send>(exit.actions[0].node);
    EXPECT_EQ(send.address.str(), "contract.buyer");
    const auto& t = std::get<Template>(send.body);
    std::vector<TemplateSegment> expect{
        std::string("Contract Notice: Buy "), DataRef{"contract", "quantity", {}}, std::string(" unit of "),
        DataRef{"contract", "product", {}},   std::string(" at "),                DataRef{"contract", "price", {}},
        std::string(" from "),                DataRef{"contract", "seller", {}}};
    EXPECT_EQ(t.segments, expect);
}

TEST(Parser, MatchBranchesAcceptBareAction) {
    auto def = parse_corpus("figure6.hzl");
    const auto& m = std::get<Match>(def.states[1].handlers[1].actions[1].node);
    EXPECT_EQ(m.left.record, "selloffer");
    EXPECT_EQ(m.right.record, "buyoffer");
    EXPECT_FALSE(m.into.has_value());
    ASSERT_EQ(m.on_success.size(), 1u);
    EXPECT_EQ(std::get<TransitionTo>(m.on_success[0].node).target, std::optional<std::string>("Closed"));
    ASSERT_EQ(m.on_fail.size(), 1u);
    EXPECT_TRUE(std::get<TransitionTo>(m.on_fail[0].node).self_hold());
}

TEST(Parser, MinimalUnit) {
    auto def = parse_text("ACTOR { DATA { } MODEL { Initially { #Enter { 'do nothing' } } } }");
    EXPECT_TRUE(def.records.empty());
    ASSERT_EQ(def.states.size(), 1u);
    ASSERT_EQ(def.states[0].handlers.size(), 1u);
    EXPECT_TRUE(std::holds_alternative<NoOp>(def.states[0].handlers[0].actions[0].node));
}

TEST(Parser, MissingModel) {
    try {
        parse_text("ACTOR { DATA { } }");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), "ParseError");
        EXPECT_EQ(e.expected(), std::set<std::string>{"MODEL"});
        EXPECT_EQ(e.position().line, 1u);
        EXPECT_EQ(e.position().column, 18u);
    }
}

TEST(Parser, UnknownAction) {
    try {
        parse_text("ACTOR { DATA { } MODEL { S { #Enter { explode } } } }");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.code(), "UnknownAction");
    }
}

TEST(Parser, ArrowAndBraceTransitionsAreOneNode) {
    auto a = parse_text("ACTOR { DATA { } MODEL { S { #m { transitionTo { $S } } } } }");
    auto b = parse_text("ACTOR { DATA { } MODEL { S { #m { transitionTo => $S } } } }");
    EXPECT_EQ(a, b);
}

TEST(Parser, LiteralInitialValues) {
    auto def = parse_text("ACTOR { DATA { r { a {?}, b {12.50}, c {\"x\"}, d {Alice} } } MODEL { S { #Enter { 'do nothing' } } } }");
    const auto& f = def.records[0].fields;
    EXPECT_EQ(f[0].initial, Value{Unbound{}});
    EXPECT_EQ(f[1].initial, Value{*Decimal::parse("12.5")});
    EXPECT_EQ(f[2].initial, Value{std::string("x")});
    EXPECT_EQ(f[3].initial, Value{Address{"Alice"}});
}

TEST(Parser, ExplicitIntoAndRecordSend) {
    auto def = parse_text(R"(ACTOR { DATA { a { x {?} } b { x {?} } c { x {?} } p { to {?} } }
      MODEL { S { #m { match { @a, @b, into @c }, send { @p.to, #note, @c } } } } })");
    const auto& acts = def.states[0].handlers[0].actions;
    EXPECT_EQ(std::get<Match>(acts[0].node).into->record, "c");
    const auto& s = std::get<Send>(acts[1].node);
    EXPECT_EQ(s.message_type, std::optional<std::string>("note"));
    EXPECT_EQ(std::get<DataRef>(s.body).record, "c");
}

TEST(Parser, TrailingGarbage) { EXPECT_THROW(parse_text("ACTOR { DATA { } MODEL { S { #Enter { 'x' } } } } }"), ParseError); }

TEST(Parser, FragmentSyntax) {
    auto frag = parse_fragment_source({R"(BEHAVIOR cap {
      guard Open:buyoffermsg { *THIS.quantity <= 100, *THIS.product != "gold" },
      before *:* { 'do nothing' },
      after Open:selloffermsg { transitionTo => _ }
    })", "inline"});
    EXPECT_EQ(frag.name, "cap");
    ASSERT_EQ(frag.interceptors.size(), 3u);
    EXPECT_EQ(frag.interceptors[0].phase, InterceptorDecl::Phase::Guard);
    ASSERT_EQ(frag.interceptors[0].conditions.size(), 2u);
    EXPECT_EQ(frag.interceptors[0].conditions[0].op, "<=");
    EXPECT_EQ(frag.interceptors[0].conditions[0].lhs, Operand{PayloadField{"quantity"}});
    EXPECT_EQ(frag.interceptors[1].state_pattern, "*");
    EXPECT_EQ(frag.interceptors[2].message_pattern, "selloffermsg");
}
