#pragma once

#include <string>

#include "huuzlee/ast.hpp"
#include "huuzlee/parser.hpp"

namespace huuzlee::lang {

/// Canonical two-space indented text. Re-parsing the output yields a
/// structurally equal definition.
std::string pretty_print(const ActorDefinition& def);

std::string pretty_print(const FragmentDecl& frag);

std::string print_template(const Template& t);

} // namespace huuzlee::lang
