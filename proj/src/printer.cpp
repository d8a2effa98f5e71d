#include "huuzlee/printer.hpp"

#include <sstream>

namespace huuzlee::lang {

namespace {

std::string ref(const DataRef& r) { return "@" + r.str(); }

class Printer {
public:
    std::string str() const { return out_.str(); }

    void actor(const ActorDefinition& def) {
        line("ACTOR {");
        ++depth_;
        line("DATA {");
        ++depth_;
        for (const auto& rec : def.records) record(rec);
        --depth_;
        line("}");
        line("MODEL {");
        ++depth_;
        for (std::size_t i = 0; i < def.states.size(); ++i) state(def.states[i], i + 1 == def.states.size());
        --depth_;
        line("}");
        --depth_;
        line("}");
    }

    void fragment(const FragmentDecl& frag) {
        line("BEHAVIOR " + frag.name + " {");
        ++depth_;
        for (std::size_t i = 0; i < frag.interceptors.size(); ++i) {
            const auto& ic = frag.interceptors[i];
            bool last = i + 1 == frag.interceptors.size();
            std::string head;
            switch (ic.phase) {
            case InterceptorDecl::Phase::Guard: head = "guard "; break;
            case InterceptorDecl::Phase::Before: head = "before "; break;
            case InterceptorDecl::Phase::After: head = "after "; break;
            }
            head += ic.state_pattern + ":" + ic.message_pattern + " {";
            line(head);
            ++depth_;
            if (ic.phase == InterceptorDecl::Phase::Guard) {
                for (std::size_t k = 0; k < ic.conditions.size(); ++k) {
                    const auto& c = ic.conditions[k];
                    line(operand(c.lhs) + " " + c.op + " " + operand(c.rhs) + comma(k, ic.conditions.size()));
                }
            } else {
                actions(ic.actions);
            }
            --depth_;
            line(last ? "}" : "},");
        }
        --depth_;
        line("}");
    }

private:
    static std::string comma(std::size_t i, std::size_t n) { return i + 1 < n ? "," : ""; }

    void line(const std::string& text) { out_ << std::string(depth_ * 2, ' ') << text << '\n'; }

    void record(const RecordDecl& rec) {
        line(rec.name + " {");
        ++depth_;
        for (std::size_t i = 0; i < rec.fields.size(); ++i) {
            const auto& f = rec.fields[i];
            line(f.name + " {" + value_literal(f.initial) + "}" + comma(i, rec.fields.size()));
        }
        --depth_;
        line("}");
    }

    void state(const StateDecl& st, bool last) {
        line(st.name + " {");
        ++depth_;
        for (std::size_t i = 0; i < st.handlers.size(); ++i) {
            const auto& h = st.handlers[i];
            line("#" + h.trigger.name() + " {");
            ++depth_;
            actions(h.actions);
            --depth_;
            line(i + 1 < st.handlers.size() ? "}," : "}");
        }
        --depth_;
        line(last ? "}" : "},");
    }

    void actions(const std::vector<Action>& list) {
        for (std::size_t i = 0; i < list.size(); ++i) action(list[i], comma(i, list.size()));
    }

    void action(const Action& a, const std::string& trailer) {
        std::visit(
            [&](const auto& node) {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, TransitionTo>) {
                    line("transitionTo { " + (node.target ? "$" + *node.target : std::string("_")) + " }" + trailer);
                } else if constexpr (std::is_same_v<T, MapThis>) {
                    line("map { *THIS, " + ref(node.target) + " }" + trailer);
                } else if constexpr (std::is_same_v<T, Match>) {
                    match(node, trailer);
                } else if constexpr (std::is_same_v<T, Send>) {
                    std::string head = "send { " + ref(node.address) + ", ";
                    if (node.message_type) head += "#" + *node.message_type + ", ";
                    if (const auto* t = std::get_if<Template>(&node.body))
                        head += "compose " + print_template(*t);
                    else
                        head += ref(std::get<DataRef>(node.body));
                    line(head + " }" + trailer);
                } else if constexpr (std::is_same_v<T, TerminateActor>) {
                    line("terminateActor" + trailer);
                } else {
                    line("'do nothing'" + trailer);
                }
            },
            a.node);
    }

    void match(const Match& m, const std::string& trailer) {
        std::string head = "match { " + ref(m.left) + ", " + ref(m.right);
        if (m.into) head += ", into " + ref(*m.into);
        bool any_branch = !m.on_success.empty() || !m.on_fail.empty();
        if (!any_branch) {
            line(head + " }" + trailer);
            return;
        }
        line(head + ",");
        ++depth_;
        if (!m.on_success.empty()) {
            line("@SUCCEEDS {");
            ++depth_;
            actions(m.on_success);
            --depth_;
            line(m.on_fail.empty() ? "}" : "},");
        }
        if (!m.on_fail.empty()) {
            line("@FAILS {");
            ++depth_;
            actions(m.on_fail);
            --depth_;
            line("}");
        }
        --depth_;
        line("}" + trailer);
    }

    static std::string operand(const Operand& op) {
        if (const auto* p = std::get_if<PayloadField>(&op)) return "*THIS." + p->field;
        if (const auto* r = std::get_if<DataRef>(&op)) return ref(*r);
        return value_literal(std::get<Value>(op));
    }

    std::ostringstream out_;
    int depth_ = 0;
};

} // namespace

std::string print_template(const Template& t) {
    std::string out = ">>> ";
    for (const auto& seg : t.segments) {
        if (const auto* text = std::get_if<std::string>(&seg))
            out += *text;
        else
            out += ref(std::get<DataRef>(seg));
    }
    out += " <<<";
    return out;
}

std::string pretty_print(const ActorDefinition& def) {
    Printer p;
    p.actor(def);
    return p.str();
}

std::string pretty_print(const FragmentDecl& frag) {
    Printer p;
    p.fragment(frag);
    return p.str();
}

} // namespace huuzlee::lang
