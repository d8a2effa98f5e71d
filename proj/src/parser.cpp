#include "huuzlee/parser.hpp"

#include <algorithm>
#include <cctype>

namespace huuzlee::lang {

namespace {

std::string join_expected(const std::set<std::string>& expected) {
    std::string out;
    for (const auto& e : expected) {
        if (!out.empty()) out += ", ";
        out += e;
    }
    return out;
}

} // namespace

ParseError::ParseError(Position pos, std::set<std::string> expected, const std::string& found)
    : SyntaxError("ParseError", pos, "expected " + join_expected(expected) + " but found " + found),
      expected_(std::move(expected)) {}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

Position position_of(const Action& a) {
    return std::visit([](const auto& n) { return n.pos; }, a.node);
}

namespace {

DataRef make_ref(const Token& t) {
    DataRef ref;
    auto dot = t.text.find('.');
    ref.record = t.text.substr(0, dot);
    if (dot != std::string::npos) ref.field = t.text.substr(dot + 1);
    ref.pos = t.pos;
    return ref;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

void rtrim(std::string& s) {
    while (!s.empty() && is_space(s.back())) s.pop_back();
}

void ltrim(std::string& s) {
    std::size_t i = 0;
    while (i < s.size() && is_space(s[i])) ++i;
    s.erase(0, i);
}

// Whitespace runs spanning a line break become one space.
std::string collapse_line_breaks(const std::string& s) {
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_space(s[i])) {
            out += s[i++];
            continue;
        }
        std::size_t j = i;
        bool newline = false;
        while (j < s.size() && is_space(s[j])) {
            newline = newline || s[j] == '\n' || s[j] == '\r';
            ++j;
        }
        if (newline)
            out += ' ';
        else
            out.append(s, i, j - i);
        i = j;
    }
    return out;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {}

    ActorDefinition actor() {
        ActorDefinition def;
        def.pos = peek().pos;
        keyword("ACTOR");
        expect(TokenKind::LBrace);

        keyword("DATA");
        expect(TokenKind::LBrace);
        while (peek().kind == TokenKind::Ident) {
            def.records.push_back(record());
            accept(TokenKind::Comma);
        }
        expect(TokenKind::RBrace);

        keyword("MODEL");
        expect(TokenKind::LBrace);
        do {
            def.states.push_back(state());
            accept(TokenKind::Comma);
        } while (peek().kind == TokenKind::Ident);
        expect(TokenKind::RBrace);

        expect(TokenKind::RBrace);
        expect(TokenKind::End);
        return def;
    }

    FragmentDecl fragment() {
        FragmentDecl frag;
        frag.pos = peek().pos;
        keyword("BEHAVIOR");
        frag.name = expect(TokenKind::Ident).text;
        expect(TokenKind::LBrace);
        do {
            frag.interceptors.push_back(interceptor());
            accept(TokenKind::Comma);
        } while (peek().kind == TokenKind::Ident);
        expect(TokenKind::RBrace);
        expect(TokenKind::End);
        return frag;
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = std::min(i_ + ahead, toks_.size() - 1);
        return toks_[i];
    }

    const Token& next() {
        const Token& t = toks_[i_];
        if (i_ + 1 < toks_.size()) ++i_;
        return t;
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::End) return "end of input";
        return "'" + t.text + "'";
    }

    [[noreturn]] void fail(std::set<std::string> expected) const {
        throw ParseError(peek().pos, std::move(expected), describe(peek()));
    }

    const Token& expect(TokenKind kind) {
        if (peek().kind != kind) fail({std::string(to_string(kind))});
        return next();
    }

    bool accept(TokenKind kind) {
        if (peek().kind != kind) return false;
        next();
        return true;
    }

    bool at_keyword(std::string_view word) const {
        return peek().kind == TokenKind::Ident && peek().text == word;
    }

    void keyword(std::string_view word) {
        if (!at_keyword(word)) fail({std::string(word)});
        next();
    }

    RecordDecl record() {
        RecordDecl rec;
        rec.pos = peek().pos;
        rec.name = expect(TokenKind::Ident).text;
        expect(TokenKind::LBrace);
        do {
            FieldDecl field;
            field.pos = peek().pos;
            field.name = expect(TokenKind::Ident).text;
            expect(TokenKind::LBrace);
            field.initial = literal_or_wildcard();
            expect(TokenKind::RBrace);
            rec.fields.push_back(std::move(field));
            accept(TokenKind::Comma);
        } while (peek().kind == TokenKind::Ident);
        expect(TokenKind::RBrace);
        return rec;
    }

    Value literal_or_wildcard() {
        const Token& t = peek();
        switch (t.kind) {
        case TokenKind::Wildcard: next(); return Unbound{};
        case TokenKind::String: return next().text;
        case TokenKind::Ident: return Address{next().text};
        case TokenKind::Number: {
            auto d = Decimal::parse(t.text);
            if (!d) fail({"number"});
            next();
            return *d;
        }
        default: fail({"?", "number", "string", "identifier"});
        }
    }

    StateDecl state() {
        StateDecl st;
        st.pos = peek().pos;
        st.name = expect(TokenKind::Ident).text;
        expect(TokenKind::LBrace);
        do {
            st.handlers.push_back(handler());
            accept(TokenKind::Comma);
        } while (peek().kind == TokenKind::HandlerTag);
        expect(TokenKind::RBrace);
        return st;
    }

    HandlerDecl handler() {
        HandlerDecl h;
        h.pos = peek().pos;
        const std::string& tag = expect(TokenKind::HandlerTag).text;
        if (tag == "Enter")
            h.trigger = Trigger::enter();
        else if (tag == "Exit")
            h.trigger = Trigger::exit();
        else
            h.trigger = Trigger::on(tag);
        h.actions = action_block();
        return h;
    }

    std::vector<Action> action_block() {
        expect(TokenKind::LBrace);
        std::vector<Action> actions;
        do {
            actions.push_back(action());
            accept(TokenKind::Comma);
        } while (peek().kind != TokenKind::RBrace && peek().kind != TokenKind::End);
        expect(TokenKind::RBrace);
        return actions;
    }

    static bool is_branch(const Token& t) {
        return t.kind == TokenKind::DataRef && (t.text == "SUCCEEDS" || t.text == "FAILS");
    }

    Action action() {
        const Token& t = peek();
        Position pos = t.pos;
        if (t.kind == TokenKind::NoOpString) {
            next();
            return {NoOp{pos}};
        }
        if (t.kind != TokenKind::Ident) fail({"action"});
        const std::string word = t.text;
        if (word == "transitionTo") {
            next();
            TransitionTo tr{std::nullopt, pos};
            if (accept(TokenKind::Arrow)) {
                tr.target = transition_target();
            } else {
                expect(TokenKind::LBrace);
                tr.target = transition_target();
                expect(TokenKind::RBrace);
            }
            return {tr};
        }
        if (word == "map") {
            next();
            expect(TokenKind::LBrace);
            const Token& src = expect(TokenKind::ThisRef);
            if (src.text != "THIS") throw ParseError(src.pos, {"*THIS"}, describe(src));
            accept(TokenKind::Comma);
            MapThis m{make_ref(expect(TokenKind::DataRef)), pos};
            accept(TokenKind::Comma);
            expect(TokenKind::RBrace);
            return {m};
        }
        if (word == "match") {
            next();
            return {match(pos)};
        }
        if (word == "send") {
            next();
            return {send(pos)};
        }
        if (word == "terminateActor") {
            next();
            return {TerminateActor{pos}};
        }
        throw ParseError("UnknownAction", pos, "unknown action '" + word + "'");
    }

    // Returns nullopt for "_" (self hold).
    std::optional<std::string> transition_target() {
        if (peek().kind == TokenKind::StateRef) return next().text;
        if (peek().kind == TokenKind::Ident && peek().text == "_") {
            next();
            return std::nullopt;
        }
        fail({"$state", "_"});
    }

    Match match(Position pos) {
        Match m;
        m.pos = pos;
        expect(TokenKind::LBrace);
        m.left = make_ref(expect(TokenKind::DataRef));
        accept(TokenKind::Comma);
        m.right = make_ref(expect(TokenKind::DataRef));
        accept(TokenKind::Comma);
        if (at_keyword("into")) {
            next();
            m.into = make_ref(expect(TokenKind::DataRef));
            accept(TokenKind::Comma);
        }
        bool seen_success = false, seen_fail = false;
        while (is_branch(peek())) {
            const Token& b = next();
            bool success = b.text == "SUCCEEDS";
            bool& seen = success ? seen_success : seen_fail;
            if (seen) throw ParseError("ParseError", b.pos, "duplicate @" + b.text + " branch");
            seen = true;
            std::vector<Action> body;
            if (peek().kind == TokenKind::LBrace)
                body = action_block();
            else
                body.push_back(action());
            (success ? m.on_success : m.on_fail) = std::move(body);
            accept(TokenKind::Comma);
        }
        if (peek().kind != TokenKind::RBrace) fail({"@SUCCEEDS", "@FAILS", "}"});
        next();
        return m;
    }

    Send send(Position pos) {
        Send s;
        s.pos = pos;
        expect(TokenKind::LBrace);
        s.address = make_ref(expect(TokenKind::DataRef));
        accept(TokenKind::Comma);
        if (peek().kind == TokenKind::HandlerTag) {
            s.message_type = next().text;
            accept(TokenKind::Comma);
        }
        if (at_keyword("compose")) {
            next();
            s.body = compose();
        } else if (peek().kind == TokenKind::DataRef) {
            s.body = make_ref(next());
        } else {
            fail({"compose", "@data"});
        }
        accept(TokenKind::Comma);
        expect(TokenKind::RBrace);
        return s;
    }

    Template compose() {
        expect(TokenKind::TemplateOpen);
        std::vector<TemplateSegment> segs;
        bool trim_next = false;
        auto append_text = [&](std::string text) {
            if (!segs.empty() && std::holds_alternative<std::string>(segs.back()))
                std::get<std::string>(segs.back()) += text;
            else
                segs.emplace_back(std::move(text));
        };
        while (peek().kind != TokenKind::TemplateClose) {
            const Token& t = next();
            switch (t.kind) {
            case TokenKind::TemplateText: {
                std::string text = t.text;
                if (trim_next) ltrim(text);
                trim_next = false;
                append_text(std::move(text));
                break;
            }
            case TokenKind::DataRef:
                trim_next = false;
                segs.emplace_back(make_ref(t));
                break;
            case TokenKind::Continuation:
                if (!segs.empty() && std::holds_alternative<std::string>(segs.back()))
                    rtrim(std::get<std::string>(segs.back()));
                append_text(" ");
                trim_next = true;
                break;
            default: throw ParseError(t.pos, {"<<<"}, describe(t));
            }
        }
        next();

        Template out;
        for (auto& seg : segs) {
            if (auto* text = std::get_if<std::string>(&seg)) *text = collapse_line_breaks(*text);
        }
        if (!segs.empty())
            if (auto* text = std::get_if<std::string>(&segs.front())) ltrim(*text);
        if (!segs.empty())
            if (auto* text = std::get_if<std::string>(&segs.back())) rtrim(*text);
        for (auto& seg : segs) {
            if (auto* text = std::get_if<std::string>(&seg); text && text->empty()) continue;
            out.segments.push_back(std::move(seg));
        }
        return out;
    }

    // ---- fragments --------------------------------------------------------

    InterceptorDecl interceptor() {
        InterceptorDecl ic;
        ic.pos = peek().pos;
        if (at_keyword("guard"))
            ic.phase = InterceptorDecl::Phase::Guard;
        else if (at_keyword("before"))
            ic.phase = InterceptorDecl::Phase::Before;
        else if (at_keyword("after"))
            ic.phase = InterceptorDecl::Phase::After;
        else
            fail({"guard", "before", "after"});
        next();
        ic.state_pattern = pattern_part();
        expect(TokenKind::Colon);
        ic.message_pattern = pattern_part();
        if (ic.phase == InterceptorDecl::Phase::Guard) {
            expect(TokenKind::LBrace);
            do {
                ic.conditions.push_back(condition());
                accept(TokenKind::Comma);
            } while (peek().kind != TokenKind::RBrace && peek().kind != TokenKind::End);
            expect(TokenKind::RBrace);
        } else {
            ic.actions = action_block();
        }
        return ic;
    }

    std::string pattern_part() {
        if (accept(TokenKind::Star)) return "*";
        return expect(TokenKind::Ident).text;
    }

    Condition condition() {
        Condition c;
        c.pos = peek().pos;
        c.lhs = operand();
        c.op = expect(TokenKind::Compare).text;
        c.rhs = operand();
        return c;
    }

    Operand operand() {
        const Token& t = peek();
        if (t.kind == TokenKind::ThisRef) {
            if (t.text.rfind("THIS.", 0) != 0) fail({"*THIS.field"});
            next();
            return PayloadField{t.text.substr(5)};
        }
        if (t.kind == TokenKind::DataRef) return make_ref(next());
        return literal_or_wildcard();
    }

    const std::vector<Token>& toks_;
    std::size_t i_ = 0;
};

} // namespace

ActorDefinition parse(const std::vector<Token>& tokens) {
    if (tokens.empty()) throw ParseError({1, 1}, {"ACTOR"}, "end of input");
    return Parser(tokens).actor();
}

ActorDefinition parse_source(const SourceUnit& src) { return parse(tokenize(src)); }

FragmentDecl parse_fragment(const std::vector<Token>& tokens) {
    if (tokens.empty()) throw ParseError({1, 1}, {"BEHAVIOR"}, "end of input");
    return Parser(tokens).fragment();
}

FragmentDecl parse_fragment_source(const SourceUnit& src) { return parse_fragment(tokenize(src)); }

} // namespace huuzlee::lang
