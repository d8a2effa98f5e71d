#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "huuzlee/source.hpp"
#include "huuzlee/value.hpp"

namespace huuzlee::lang {

/// `@record` or `@record.field`.
struct DataRef {
    std::string record;
    std::optional<std::string> field;
    Position pos;

    std::string str() const { return field ? record + "." + *field : record; }
    friend bool operator==(const DataRef&, const DataRef&) = default;
};

using TemplateSegment = std::variant<std::string, DataRef>;

/// Body of `compose >>> ... <<<` after continuation collapsing: adjacent text
/// is merged, the first and last segments carry no outer whitespace.
struct Template {
    std::vector<TemplateSegment> segments;
    friend bool operator==(const Template&, const Template&) = default;
};

struct Action;

/// `transitionTo { $X }` / `transitionTo => $X`; no target means `_`.
struct TransitionTo {
    std::optional<std::string> target;
    Position pos;
    bool self_hold() const { return !target.has_value(); }
    friend bool operator==(const TransitionTo&, const TransitionTo&) = default;
};

/// `map { *THIS, @record }`
struct MapThis {
    DataRef target;
    Position pos;
    friend bool operator==(const MapThis&, const MapThis&) = default;
};

struct Match {
    DataRef left;
    DataRef right;
    std::optional<DataRef> into;
    std::vector<Action> on_success;
    std::vector<Action> on_fail;
    Position pos;
    friend bool operator==(const Match&, const Match&) = default;
};

/// `send { @rec.addr, [#type,] compose >>> ... <<< }` or
/// `send { @rec.addr, #type, @record }`.
struct Send {
    using Body = std::variant<Template, DataRef>;
    DataRef address;
    std::optional<std::string> message_type;
    Body body;
    Position pos;
    friend bool operator==(const Send&, const Send&) = default;
};

struct TerminateActor {
    Position pos;
    friend bool operator==(const TerminateActor&, const TerminateActor&) = default;
};

struct NoOp {
    Position pos;
    friend bool operator==(const NoOp&, const NoOp&) = default;
};

struct Action {
    std::variant<TransitionTo, MapThis, Match, Send, TerminateActor, NoOp> node;
    friend bool operator==(const Action&, const Action&) = default;
};

Position position_of(const Action& a);

struct Trigger {
    enum class Kind { Enter, Exit, Message };
    Kind kind = Kind::Message;
    std::string message; // only for Kind::Message

    static Trigger enter() { return {Kind::Enter, {}}; }
    static Trigger exit() { return {Kind::Exit, {}}; }
    static Trigger on(std::string msg) { return {Kind::Message, std::move(msg)}; }

    std::string name() const {
        switch (kind) {
        case Kind::Enter: return "Enter";
        case Kind::Exit: return "Exit";
        default: return message;
        }
    }
    friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct HandlerDecl {
    Trigger trigger;
    std::vector<Action> actions;
    Position pos;
    friend bool operator==(const HandlerDecl&, const HandlerDecl&) = default;
};

struct StateDecl {
    std::string name;
    std::vector<HandlerDecl> handlers;
    Position pos;
    friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct FieldDecl {
    std::string name;
    Value initial; // Unbound renders as {?}
    Position pos;
    friend bool operator==(const FieldDecl&, const FieldDecl&) = default;
};

struct RecordDecl {
    std::string name;
    std::vector<FieldDecl> fields;
    Position pos;

    const FieldDecl* find_field(std::string_view field) const {
        for (const auto& f : fields)
            if (f.name == field) return &f;
        return nullptr;
    }
    friend bool operator==(const RecordDecl&, const RecordDecl&) = default;
};

/// One parsed ACTOR unit. The first state is the initial state.
struct ActorDefinition {
    std::vector<RecordDecl> records;
    std::vector<StateDecl> states;
    Position pos;

    const RecordDecl* find_record(std::string_view name) const {
        for (const auto& r : records)
            if (r.name == name) return &r;
        return nullptr;
    }
    friend bool operator==(const ActorDefinition&, const ActorDefinition&) = default;
};

/// Case-insensitive comparison used for `$State` resolution.
bool iequals(std::string_view a, std::string_view b);

} // namespace huuzlee::lang
