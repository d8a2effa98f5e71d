#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "huuzlee/machine.hpp"
#include "huuzlee/ontology.hpp"

namespace huuzlee::analyzer {

/// What a peer can observe of one message receipt: the consumed type, the
/// sorted emitted types (duplicates kept) and whether the actor terminated.
struct Label {
    std::string consumed;
    std::vector<std::string> emitted;
    bool terminates = false;

    auto operator<=>(const Label&) const = default;
    bool operator==(const Label&) const = default;
};

/// `buyoffermsg {ContractAdvice,ContractNotice} end` or `... live`.
std::string to_string(const Label& l);

struct Transition {
    int from = 0;
    Label label;
    int to = 0; // machine state reached; a terminating label leads nowhere observable

    auto operator<=>(const Transition&) const = default;
    bool operator==(const Transition&) const = default;
};

/// Pseudo-label of the spawn-time #Enter run.
inline constexpr const char* kBootstrap = "<bootstrap>";
/// Name of the pseudo-state that precedes bootstrap.
inline constexpr const char* kStart = "<start>";

/// Labeled transition system of one machine. States are the machine's
/// states in declaration order. When bootstrap is unobservable (no
/// emissions, no termination, one outcome) `initial` is the state it
/// settles in; otherwise a `<start>` state is appended whose `<bootstrap>`
/// transitions lead to each outcome.
struct ProtocolSignature {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<Transition> transitions; // sorted, no duplicates
};

class TooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxStates = 256;

/// Static scan of every handler. Match actions fork into success and fail
/// paths; guarded handlers get a veto path; Before/After programs, #Exit,
/// #Enter chains and termination fold into the triggering label. Paths that
/// fail for structural reasons (transition loops, transitions in #Exit)
/// leave the actor unchanged and yield `(type, {}, live)` self-loops.
ProtocolSignature extract_protocol(const machine::CompiledMachine& m);

/// Replaces message types by the ontology terms bound to them (`#name`).
/// Unbound names keep their text.
ProtocolSignature relabel_terms(const ProtocolSignature& sig, const ontology::AnnotatedDefinition& ann);

/// Distinguishing experiment. After following `path` on both sides, the
/// side named by `side` (0 = first argument, 1 = second) can take `label`
/// and the other side either cannot take it at all (`missing`) or only into
/// states that behave differently.
struct Witness {
    std::vector<Label> path;
    Label label;
    int side = 0;
    bool missing = true;
};

std::string to_string(const Witness& w);

struct Verdict {
    bool holds = false;
    std::optional<Witness> witness; // set iff !holds
};

/// Strong bisimilarity of the initial states by partition refinement.
/// Throws TooLarge above kMaxStates states on either side.
Verdict check_equivalence(const ProtocolSignature& a, const ProtocolSignature& b);

/// Whether `spec` simulates `impl` from their initial states (only states
/// reachable in `impl` are considered). Throws TooLarge.
Verdict check_conformance(const ProtocolSignature& impl, const ProtocolSignature& spec);

/// Line-oriented dump:
///   initial <state>
///   trans <from> <consumed> {<emitted,...>} <live|end> <to>
std::string export_signature(const ProtocolSignature& sig);

} // namespace huuzlee::analyzer
