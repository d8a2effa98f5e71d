#include "huuzlee/machine.hpp"
#include "program_compiler.hpp"

namespace huuzlee::machine {

namespace {

Phase to_phase(lang::InterceptorDecl::Phase p) {
    switch (p) {
    case lang::InterceptorDecl::Phase::Guard: return Phase::Guard;
    case lang::InterceptorDecl::Phase::Before: return Phase::Before;
    case lang::InterceptorDecl::Phase::After: return Phase::After;
    }
    return Phase::Guard;
}

} // namespace

CompiledMachine compose_behaviors(const CompiledMachine& base, const std::vector<lang::FragmentDecl>& fragments) {
    CompiledMachine out = base;
    std::vector<std::string> names;
    for (const auto& st : base.states) names.push_back(st.name);
    detail::ProgramCompiler pc(*base.schema, names);

    for (const auto& frag : fragments) {
        for (const auto& decl : frag.interceptors) {
            Interceptor ic;
            ic.fragment = frag.name;
            ic.phase = to_phase(decl.phase);
            for (const auto& c : decl.conditions) ic.conditions.push_back(pc.condition(c));
            ic.program = pc.program(decl.actions);

            std::vector<int> states;
            if (decl.state_pattern == "*") {
                for (std::size_t i = 0; i < out.states.size(); ++i) states.push_back(static_cast<int>(i));
            } else {
                int s = out.state_index(decl.state_pattern);
                if (s < 0)
                    throw CompileError("UnresolvedPattern", "fragment '" + frag.name + "': no state '" + decl.state_pattern + "'");
                states.push_back(s);
            }

            int hits = 0;
            for (int s : states) {
                for (auto& [msg, handler] : out.states[s].handlers) {
                    if (decl.message_pattern != "*" && decl.message_pattern != msg) continue;
                    ++hits;
                    switch (ic.phase) {
                    case Phase::Guard: handler.guards.push_back(ic); break;
                    case Phase::Before: handler.before.push_back(ic); break;
                    case Phase::After: handler.after.push_back(ic); break;
                    }
                }
            }
            if (hits == 0)
                throw CompileError("UnresolvedPattern", "fragment '" + frag.name + "': pattern " + decl.state_pattern + ":" +
                                                            decl.message_pattern + " intercepts no handler");
        }
    }
    return out;
}

} // namespace huuzlee::machine
