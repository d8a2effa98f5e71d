#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "huuzlee/ast.hpp"
#include "huuzlee/parser.hpp"
#include "huuzlee/value.hpp"

namespace huuzlee::machine {

struct RecordSchema {
    std::string name;
    std::vector<std::string> fields; // declaration order

    int field_index(std::string_view field) const;
    friend bool operator==(const RecordSchema&, const RecordSchema&) = default;
};

using Schema = std::vector<RecordSchema>;

/// Immutable record store of one actor. Records and fields are addressed by
/// declaration index; named lookups exist for tests and tooling.
class DataStore {
public:
    using Records = std::vector<std::vector<Value>>;

    DataStore() = default;
    DataStore(std::shared_ptr<const Schema> schema, Records records);

    const Schema& schema() const { return *schema_; }
    const std::shared_ptr<const Schema>& schema_ptr() const { return schema_; }
    const Records& records() const { return records_; }

    const Value& at(int record, int field) const { return records_[record][field]; }
    /// nullptr when record or field is unknown.
    const Value* find(std::string_view record, std::string_view field) const;
    /// Named copy of one record; throws std::out_of_range for unknown names.
    Payload record(std::string_view name) const;

    /// Copy with one field replaced.
    DataStore with(std::string_view record, std::string_view field, Value v) const;

    friend bool operator==(const DataStore& a, const DataStore& b) { return a.records_ == b.records_; }

private:
    std::shared_ptr<const Schema> schema_;
    Records records_;
};

// ---- compiled programs ----------------------------------------------------

struct FieldSlot {
    int record = -1;
    int field = -1;
    friend bool operator==(const FieldSlot&, const FieldSlot&) = default;
};

struct Op;
using Program = std::vector<Op>;

/// -1 means self hold (`_`).
struct OpTransition {
    int target = -1;
};
struct OpMap {
    int record = -1;
};
struct OpMatch {
    int left = -1;
    int right = -1;
    int into = -1; // -1: no target
    Program on_success;
    Program on_fail;
};
struct CompiledTemplate {
    std::vector<std::variant<std::string, FieldSlot>> segments;
};
struct OpSend {
    FieldSlot address;
    std::string message_type;
    std::variant<CompiledTemplate, int> body; // template or whole record
};
struct OpTerminate {};
struct OpNoop {};

struct Op {
    std::variant<OpTransition, OpMap, OpMatch, OpSend, OpTerminate, OpNoop> node;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct PayloadOperand {
    std::string field;
};
using GuardOperand = std::variant<PayloadOperand, FieldSlot, Value>;

struct GuardCondition {
    GuardOperand lhs;
    CompareOp op = CompareOp::Eq;
    GuardOperand rhs;
};

enum class Phase { Guard, Before, After };

struct Interceptor {
    std::string fragment;
    Phase phase = Phase::Guard;
    std::vector<GuardCondition> conditions; // Guard
    Program program;                        // Before / After
};

struct Handler {
    Program program;
    std::vector<Interceptor> guards;
    std::vector<Interceptor> before;
    std::vector<Interceptor> after; // stored in composition order, run reversed
};

struct CompiledState {
    std::string name;
    std::optional<Program> enter;
    std::optional<Program> exit;
    std::map<std::string, Handler, std::less<>> handlers;
};

class CompileError : public std::runtime_error {
public:
    CompileError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

struct CompiledMachine {
    std::vector<CompiledState> states;
    int initial_state = 0;
    std::shared_ptr<const Schema> schema;
    DataStore initial_store;

    int state_index(std::string_view name) const; // case-insensitive, -1 if absent
    const Handler* handler(int state, std::string_view message_type) const;
};

/// Requires validate(def) to be empty; throws CompileError otherwise.
CompiledMachine compile(const lang::ActorDefinition& def);

/// Digest over the canonical serialization of the whole machine.
std::string machine_digest(const CompiledMachine& m);

/// Message type of a compose send without explicit `#type`: the leading text
/// before the first ':' with non-alphanumerics removed ("Contract Notice:"
/// gives "ContractNotice"); "compose" when there is no such prefix.
std::string derive_message_type(const lang::Template& t);

// ---- execution --------------------------------------------------------------

struct Envelope {
    Address to;
    std::string message_type;
    Payload payload;
    std::optional<std::uint64_t> seq;
    Address sender;

    friend bool operator==(const Envelope&, const Envelope&) = default;
};

enum class Status { Completed, Failed, Rejected };

std::string_view to_string(Status s);

struct TransitionResult {
    int next_state = 0;
    DataStore new_store;
    std::vector<Envelope> outbox;
    bool terminated = false;
    Status status = Status::Completed;
    std::string reason; // empty when Completed

    friend bool operator==(const TransitionResult&, const TransitionResult&) = default;
};

/// Maximum number of consecutive transitions triggered from #Enter programs
/// within one step.
inline constexpr int kMaxEnterChain = 8;

/// One message receipt. Pure and all-or-nothing: on Failed or Rejected the
/// result carries the input state and store and an empty outbox.
TransitionResult step(const CompiledMachine& m, int state, const DataStore& store, const Envelope& msg,
                      bool terminated = false);

/// Runs the initial state's #Enter program (and any chained transitions).
TransitionResult bootstrap(const CompiledMachine& m);
/// Same, starting from `store` instead of the declared initial values.
TransitionResult bootstrap(const CompiledMachine& m, const DataStore& store);

// ---- unification and templates ---------------------------------------------

struct UnifyOutcome {
    enum class Kind { Success, Conflict, Incomplete, SchemaMismatch };
    Kind kind = Kind::Success;
    Payload unified;   // Success only
    std::string field; // offending field for Conflict / Incomplete

    bool ok() const { return kind == Kind::Success; }
};

/// Field-wise unification: every field needs at least one bound side, and
/// bound sides must agree. The unified field takes the bound value.
UnifyOutcome unify_records(const Payload& a, const Payload& b);

class RenderError : public std::runtime_error {
public:
    RenderError(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// Throws RenderError("UnboundFieldInTemplate") when a referenced field is
/// unbound, RenderError("UnresolvedReference") when it does not exist.
std::string render_template(const lang::Template& t, const DataStore& store);

// ---- behaviour composition ---------------------------------------------------

/// Applies fragments in order. Guards run first in fragment order, then
/// Before effects, the base handler, then After effects in reverse order.
/// Throws CompileError("UnresolvedPattern") when a pattern names an unknown
/// state or intercepts no handler, CompileError("UnresolvedReference") for
/// bad data references inside fragment programs.
CompiledMachine compose_behaviors(const CompiledMachine& base, const std::vector<lang::FragmentDecl>& fragments);

// ---- canonical forms --------------------------------------------------------

std::string canonical(const DataStore& store);
std::string canonical(const Envelope& env);
std::string canonical(const TransitionResult& r, const CompiledMachine& m);
std::string store_digest(const DataStore& store);

} // namespace huuzlee::machine
