#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "huuzlee/ontology.hpp"
#include "support.hpp"

using namespace huuzlee;
using namespace huuzlee::ontology;
using huuzlee::testing::corpus;
using huuzlee::testing::parse_corpus;

namespace {

Registry trade() { return load_registry(read_source(corpus("trade.terms"))); }

std::string code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const SyntaxError& e) {
        return e.code();
    }
    return "none";
}

} // namespace

TEST(Iri, Parse) {
    auto i = Iri::parse("trade:contract#price");
    ASSERT_TRUE(i);
    EXPECT_EQ(i->scheme, "trade");
    EXPECT_EQ(i->path, "contract");
    EXPECT_EQ(i->fragment, "price");
    EXPECT_TRUE(Iri::parse("https://example.org/terms/price"));
    for (const char* bad : {"price", ":x", "trade:", "trade:a#", "trade:a#b#c", "tr ade:x", "1x:y", "trade:a b"})
        EXPECT_FALSE(Iri::parse(bad)) << bad;
}

TEST(Registry, SingleEntry) {
    auto reg = load_registry({"trade:contract#price | Price | Property\n", "inline"});
    ASSERT_EQ(reg.size(), 1u);
    EXPECT_EQ(reg.find("trade:contract#price")->label, "Price");
    EXPECT_EQ(reg.find("trade:contract#price")->kind, TermKind::Property);
}

TEST(Registry, Errors) {
    EXPECT_EQ(code_of([] { load_registry({"a:b | A | Concept\na:b | B | Concept\n", "x"}); }), "DuplicateTermId");
    EXPECT_EQ(code_of([] { load_registry({"price | A | Concept\n", "x"}); }), "MalformedIri");
    EXPECT_EQ(code_of([] { load_registry({"a:b | A\n", "x"}); }), "MalformedLine");
    EXPECT_EQ(code_of([] { load_registry({"a:b | A | Thing\n", "x"}); }), "UnknownKind");
}

TEST(Registry, DuplicateReportsLine) {
    try {
        load_registry({"# c\na:b | A | Concept\n\na:b | B | Concept\n", "x"});
        FAIL();
    } catch (const SyntaxError& e) {
        EXPECT_EQ(e.position().line, 4u);
    }
}

TEST(Registry, ShippedTradeVocabulary) { EXPECT_GE(trade().size(), 9u); }

TEST(Annotate, FullFigure6AnnotationIsStrictClean) {
    auto def = parse_corpus("figure6.hzl");
    auto adef = annotate(def, "figure6", load_annotations(read_source(corpus("figure6.ann"))), trade());
    EXPECT_TRUE(adef.unbound().empty());
    EXPECT_TRUE(check_strict(adef).empty());
    EXPECT_EQ(adef.term_of("contract.price")->id, "trade:contract#price");
}

TEST(Annotate, EmptyAnnotationLeavesEverythingUnbound) {
    auto def = parse_corpus("figure6.hzl");
    auto adef = annotate(def, "figure6", {}, trade());
    // 15 fields, 3 states, 2 consumed and 2 emitted message types
    EXPECT_EQ(adef.unbound().size(), 22u);
    auto diags = check_strict(adef);
    EXPECT_EQ(diags.size(), 22u);
    for (const auto& d : diags) EXPECT_EQ(d.code, "Unbound");
}

TEST(Annotate, UnknownQualifiedName) {
    auto def = parse_corpus("figure6.hzl");
    EXPECT_EQ(code_of([&] { annotate(def, "figure6", {{"ghost.field", "trade:contract#price", {}}}, trade()); }),
              "UnknownQualifiedName");
    EXPECT_EQ(code_of([&] { annotate(def, "figure6", {{"other/buyoffer.price", "trade:contract#price", {}}}, trade()); }),
              "UnknownQualifiedName");
    EXPECT_EQ(code_of([&] { annotate(def, "figure6", {{"buyoffer.price", "trade:nothing", {}}}, trade()); }),
              "UnknownTerm");
}

TEST(Annotate, ActorPrefixIsOptional) {
    auto def = parse_corpus("figure6.hzl");
    auto adef = annotate(def, "figure6", {{"buyoffer.price", "trade:contract#price", {}}, {"$OPEN", "trade:state#Open", {}}},
                         trade());
    EXPECT_EQ(adef.term_of("buyoffer.price")->id, "trade:contract#price");
    EXPECT_EQ(adef.term_of("$Open")->id, "trade:state#Open");
}

TEST(Strict, KindMismatch) {
    auto def = parse_corpus("figure6.hzl");
    auto bindings = load_annotations(read_source(corpus("figure6.ann")));
    for (auto& b : bindings)
        if (b.name == "figure6/buyoffer.price") b.term = "trade:state#Open";
    auto diags = check_strict(annotate(def, "figure6", bindings, trade()));
    ASSERT_EQ(diags.size(), 1u);
    EXPECT_EQ(diags[0].code, "KindMismatch");
    EXPECT_NE(diags[0].message.find("price"), std::string::npos);
}

TEST(Strict, MissingMessageBinding) {
    auto def = parse_corpus("figure6.hzl");
    auto bindings = load_annotations(read_source(corpus("figure6.ann")));
    std::erase_if(bindings, [](const Binding& b) { return b.name == "figure6/#buyoffermsg"; });
    auto diags = check_strict(annotate(def, "figure6", bindings, trade()));
    ASSERT_EQ(diags.size(), 1u);
    EXPECT_EQ(diags[0].message, "Unbound(#buyoffermsg)");
    EXPECT_GE(diags[0].line, 1u);
}

TEST(Strict, SoundnessOverRandomBindingSubsets) {
    // check_strict == [] exactly when every non-record name has a kind-correct term
    auto def = parse_corpus("figure6.hzl");
    auto full = load_annotations(read_source(corpus("figure6.ann")));
    auto reg = trade();
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
        std::vector<Binding> subset;
        for (auto b : full) {
            if (rng() % 20 == 0) continue;
            if (rng() % 25 == 0) b.term = reg.terms()[rng() % reg.size()].id;
            subset.push_back(b);
        }
        auto adef = annotate(def, "figure6", subset, reg);
        bool all_good = true;
        for (const auto& it : adef.items) {
            if (it.kind == NameKind::Record) {
                if (it.term && it.term->kind != TermKind::Concept) all_good = false;
                continue;
            }
            TermKind want = it.kind == NameKind::Field     ? TermKind::Property
                            : it.kind == NameKind::Message ? TermKind::MessageKind
                                                           : TermKind::StateKind;
            if (!it.term || it.term->kind != want) all_good = false;
        }
        EXPECT_EQ(check_strict(adef).empty(), all_good);
    }
}

TEST(Annotate, DoesNotAffectExecution) {
    auto def = parse_corpus("figure6.hzl");
    auto before = machine::machine_digest(machine::compile(def));
    annotate(def, "figure6", load_annotations(read_source(corpus("figure6.ann"))), trade());
    EXPECT_EQ(machine::machine_digest(machine::compile(def)), before);
}
