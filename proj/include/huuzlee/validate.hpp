#pragma once

#include <string>
#include <vector>

#include "huuzlee/ast.hpp"

namespace huuzlee::lang {

/// Static checks on a parsed definition. Empty result means the definition
/// can be compiled. Codes: NoStates, DuplicateState, DuplicateRecord,
/// DuplicateField, DuplicateHandler, EmptyHandler, UnresolvedState,
/// UnresolvedRecord, UnresolvedField, BadMapTarget, BadMatchOperand,
/// SchemaMismatch, BadAddressRef, BadTemplateRef, BadSendBody.
std::vector<Diagnostic> validate(const ActorDefinition& def, const std::string& file = {});

/// Index of the state named `name` (case-insensitive), or -1.
int resolve_state(const ActorDefinition& def, std::string_view name);

} // namespace huuzlee::lang
