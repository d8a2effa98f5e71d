#pragma once

#include <string>
#include <vector>

#include "huuzlee/machine.hpp"

namespace huuzlee::machine::detail {

/// Lowers AST actions to index-based programs against a fixed schema and
/// state list. Throws CompileError("UnresolvedReference") on names it
/// cannot resolve.
class ProgramCompiler {
public:
    ProgramCompiler(const Schema& schema, std::vector<std::string> state_names)
        : schema_(schema), states_(std::move(state_names)) {}

    Program program(const std::vector<lang::Action>& actions) const;
    GuardCondition condition(const lang::Condition& c) const;

private:
    Op op(const lang::Action& a) const;
    int record(const lang::DataRef& ref) const;
    FieldSlot slot(const lang::DataRef& ref) const;
    int state(const std::string& name) const;
    int implicit_match_target(int left) const;

    const Schema& schema_;
    std::vector<std::string> states_;
};

} // namespace huuzlee::machine::detail
