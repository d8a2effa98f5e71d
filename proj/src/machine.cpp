#include "huuzlee/machine.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "huuzlee/canon.hpp"
#include "huuzlee/validate.hpp"
#include "program_compiler.hpp"

namespace huuzlee::machine {

int RecordSchema::field_index(std::string_view field) const {
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] == field) return static_cast<int>(i);
    return -1;
}

namespace {

int record_index(const Schema& schema, std::string_view name) {
    for (std::size_t i = 0; i < schema.size(); ++i)
        if (schema[i].name == name) return static_cast<int>(i);
    return -1;
}

} // namespace

DataStore::DataStore(std::shared_ptr<const Schema> schema, Records records)
    : schema_(std::move(schema)), records_(std::move(records)) {}

const Value* DataStore::find(std::string_view record, std::string_view field) const {
    if (!schema_) return nullptr;
    int r = record_index(*schema_, record);
    if (r < 0) return nullptr;
    int f = (*schema_)[r].field_index(field);
    if (f < 0) return nullptr;
    return &records_[r][f];
}

Payload DataStore::record(std::string_view name) const {
    int r = schema_ ? record_index(*schema_, name) : -1;
    if (r < 0) throw std::out_of_range("unknown record " + std::string(name));
    Payload out;
    const auto& rs = (*schema_)[r];
    for (std::size_t f = 0; f < rs.fields.size(); ++f) out[rs.fields[f]] = records_[r][f];
    return out;
}

DataStore DataStore::with(std::string_view record, std::string_view field, Value v) const {
    int r = schema_ ? record_index(*schema_, record) : -1;
    int f = r < 0 ? -1 : (*schema_)[r].field_index(field);
    if (f < 0) throw std::out_of_range("unknown field " + std::string(record) + "." + std::string(field));
    Records copy = records_;
    copy[r][f] = std::move(v);
    return DataStore(schema_, std::move(copy));
}

int CompiledMachine::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (lang::iequals(states[i].name, name)) return static_cast<int>(i);
    return -1;
}

const Handler* CompiledMachine::handler(int state, std::string_view message_type) const {
    if (state < 0 || state >= static_cast<int>(states.size())) return nullptr;
    const auto& hs = states[state].handlers;
    auto it = hs.find(message_type);
    return it == hs.end() ? nullptr : &it->second;
}

std::string derive_message_type(const lang::Template& t) {
    if (!t.segments.empty()) {
        if (const auto* text = std::get_if<std::string>(&t.segments.front())) {
            auto colon = text->find(':');
            if (colon != std::string::npos) {
                std::string out;
                for (char c : text->substr(0, colon))
                    if (std::isalnum(static_cast<unsigned char>(c))) out += c;
                if (!out.empty() && std::isalpha(static_cast<unsigned char>(out.front()))) return out;
            }
        }
    }
    return "compose";
}

// ---- ProgramCompiler ---------------------------------------------------------

namespace detail {

int ProgramCompiler::record(const lang::DataRef& ref) const {
    int r = record_index(schema_, ref.record);
    if (r < 0 || ref.field) throw CompileError("UnresolvedReference", "cannot resolve record '@" + ref.str() + "'");
    return r;
}

FieldSlot ProgramCompiler::slot(const lang::DataRef& ref) const {
    int r = record_index(schema_, ref.record);
    int f = (r < 0 || !ref.field) ? -1 : schema_[r].field_index(*ref.field);
    if (f < 0) throw CompileError("UnresolvedReference", "cannot resolve field '@" + ref.str() + "'");
    return {r, f};
}

int ProgramCompiler::state(const std::string& name) const {
    for (std::size_t i = 0; i < states_.size(); ++i)
        if (lang::iequals(states_[i], name)) return static_cast<int>(i);
    throw CompileError("UnresolvedReference", "cannot resolve state '$" + name + "'");
}

int ProgramCompiler::implicit_match_target(int left) const {
    int c = record_index(schema_, "contract");
    if (c < 0) return -1;
    auto names = [&](int r) {
        std::set<std::string> s(schema_[r].fields.begin(), schema_[r].fields.end());
        return s;
    };
    return names(c) == names(left) ? c : -1;
}

Program ProgramCompiler::program(const std::vector<lang::Action>& actions) const {
    Program out;
    out.reserve(actions.size());
    for (const auto& a : actions) out.push_back(op(a));
    return out;
}

Op ProgramCompiler::op(const lang::Action& a) const {
    return std::visit(
        [&](const auto& node) -> Op {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, lang::TransitionTo>) {
                return {OpTransition{node.target ? state(*node.target) : -1}};
            } else if constexpr (std::is_same_v<T, lang::MapThis>) {
                return {OpMap{record(node.target)}};
            } else if constexpr (std::is_same_v<T, lang::Match>) {
                OpMatch m;
                m.left = record(node.left);
                m.right = record(node.right);
                m.into = node.into ? record(*node.into) : implicit_match_target(m.left);
                m.on_success = program(node.on_success);
                m.on_fail = program(node.on_fail);
                return {std::move(m)};
            } else if constexpr (std::is_same_v<T, lang::Send>) {
                OpSend s;
                s.address = slot(node.address);
                if (const auto* t = std::get_if<lang::Template>(&node.body)) {
                    CompiledTemplate ct;
                    for (const auto& seg : t->segments) {
                        if (const auto* text = std::get_if<std::string>(&seg))
                            ct.segments.emplace_back(*text);
                        else
                            ct.segments.emplace_back(slot(std::get<lang::DataRef>(seg)));
                    }
                    s.body = std::move(ct);
                    s.message_type = node.message_type ? *node.message_type : derive_message_type(*t);
                } else {
                    if (!node.message_type) throw CompileError("UnresolvedReference", "record send needs #type");
                    s.body = record(std::get<lang::DataRef>(node.body));
                    s.message_type = *node.message_type;
                }
                return {std::move(s)};
            } else if constexpr (std::is_same_v<T, lang::TerminateActor>) {
                return {OpTerminate{}};
            } else {
                return {OpNoop{}};
            }
        },
        a.node);
}

namespace {

CompareOp compare_op(const std::string& op) {
    if (op == "==") return CompareOp::Eq;
    if (op == "!=") return CompareOp::Ne;
    if (op == "<") return CompareOp::Lt;
    if (op == "<=") return CompareOp::Le;
    if (op == ">") return CompareOp::Gt;
    if (op == ">=") return CompareOp::Ge;
    throw CompileError("UnresolvedReference", "unknown comparison " + op);
}

} // namespace

GuardCondition ProgramCompiler::condition(const lang::Condition& c) const {
    auto operand = [&](const lang::Operand& o) -> GuardOperand {
        if (const auto* p = std::get_if<lang::PayloadField>(&o)) return PayloadOperand{p->field};
        if (const auto* r = std::get_if<lang::DataRef>(&o)) return slot(*r);
        return std::get<Value>(o);
    };
    return {operand(c.lhs), compare_op(c.op), operand(c.rhs)};
}

} // namespace detail

// ---- compile ------------------------------------------------------------------

CompiledMachine compile(const lang::ActorDefinition& def) {
    auto diags = lang::validate(def);
    if (!diags.empty())
        throw CompileError("InvalidDefinition", "definition has " + std::to_string(diags.size()) +
                                                    " diagnostic(s), first: " + diags.front().message);

    auto schema = std::make_shared<Schema>();
    DataStore::Records initial;
    for (const auto& rec : def.records) {
        RecordSchema rs{rec.name, {}};
        std::vector<Value> values;
        for (const auto& f : rec.fields) {
            rs.fields.push_back(f.name);
            values.push_back(f.initial);
        }
        schema->push_back(std::move(rs));
        initial.push_back(std::move(values));
    }

    std::vector<std::string> names;
    for (const auto& st : def.states) names.push_back(st.name);
    detail::ProgramCompiler pc(*schema, names);

    CompiledMachine m;
    m.initial_state = 0;
    for (const auto& st : def.states) {
        CompiledState cs;
        cs.name = st.name;
        for (const auto& h : st.handlers) {
            Program p = pc.program(h.actions);
            switch (h.trigger.kind) {
            case lang::Trigger::Kind::Enter: cs.enter = std::move(p); break;
            case lang::Trigger::Kind::Exit: cs.exit = std::move(p); break;
            case lang::Trigger::Kind::Message: cs.handlers[h.trigger.message].program = std::move(p); break;
            }
        }
        m.states.push_back(std::move(cs));
    }
    m.schema = schema;
    m.initial_store = DataStore(schema, std::move(initial));
    return m;
}

// ---- canonical forms ------------------------------------------------------------

namespace {

void write_program(canon::Writer& w, const Program& p);

void write_slot(canon::Writer& w, FieldSlot s) { w.integer(static_cast<std::uint64_t>(s.record)).integer(static_cast<std::uint64_t>(s.field)); }

void write_index(canon::Writer& w, int i) {
    // -1 encodes as 'X'
    if (i < 0)
        w.tag('X');
    else
        w.tag('I').integer(static_cast<std::uint64_t>(i));
}

void write_op(canon::Writer& w, const Op& op) {
    std::visit(
        [&](const auto& node) {
            using T = std::decay_t<decltype(node)>;
            if constexpr (std::is_same_v<T, OpTransition>) {
                w.tag('t');
                write_index(w, node.target);
            } else if constexpr (std::is_same_v<T, OpMap>) {
                w.tag('m');
                write_index(w, node.record);
            } else if constexpr (std::is_same_v<T, OpMatch>) {
                w.tag('u');
                write_index(w, node.left);
                write_index(w, node.right);
                write_index(w, node.into);
                write_program(w, node.on_success);
                write_program(w, node.on_fail);
            } else if constexpr (std::is_same_v<T, OpSend>) {
                w.tag('s');
                write_slot(w, node.address);
                w.str(node.message_type);
                if (const auto* t = std::get_if<CompiledTemplate>(&node.body)) {
                    w.tag('c').integer(t->segments.size());
                    for (const auto& seg : t->segments) {
                        if (const auto* text = std::get_if<std::string>(&seg))
                            w.tag('x').str(*text);
                        else
                            write_slot(w.tag('f'), std::get<FieldSlot>(seg));
                    }
                } else {
                    w.tag('r');
                    write_index(w, std::get<int>(node.body));
                }
            } else if constexpr (std::is_same_v<T, OpTerminate>) {
                w.tag('z');
            } else {
                w.tag('n');
            }
        },
        op.node);
}

void write_program(canon::Writer& w, const Program& p) {
    w.tag('[').integer(p.size());
    for (const auto& op : p) write_op(w, op);
    w.tag(']');
}

void write_operand(canon::Writer& w, const GuardOperand& o) {
    if (const auto* p = std::get_if<PayloadOperand>(&o))
        w.tag('p').str(p->field);
    else if (const auto* s = std::get_if<FieldSlot>(&o))
        write_slot(w.tag('f'), *s);
    else
        w.tag('v').value(std::get<Value>(o));
}

void write_interceptors(canon::Writer& w, const std::vector<Interceptor>& list) {
    w.integer(list.size());
    for (const auto& ic : list) {
        w.str(ic.fragment).integer(static_cast<std::uint64_t>(ic.phase));
        w.integer(ic.conditions.size());
        for (const auto& c : ic.conditions) {
            write_operand(w, c.lhs);
            w.integer(static_cast<std::uint64_t>(c.op));
            write_operand(w, c.rhs);
        }
        write_program(w, ic.program);
    }
}

void write_optional_program(canon::Writer& w, const std::optional<Program>& p) {
    if (p)
        write_program(w.tag('Y'), *p);
    else
        w.tag('N');
}

} // namespace

std::string machine_digest(const CompiledMachine& m) {
    canon::Writer w;
    w.tag('M').integer(m.schema ? m.schema->size() : 0);
    if (m.schema)
        for (const auto& rs : *m.schema) {
            w.str(rs.name).integer(rs.fields.size());
            for (const auto& f : rs.fields) w.str(f);
        }
    w.str(canonical(m.initial_store));
    w.integer(static_cast<std::uint64_t>(m.initial_state)).integer(m.states.size());
    for (const auto& st : m.states) {
        w.str(st.name);
        write_optional_program(w, st.enter);
        write_optional_program(w, st.exit);
        w.integer(st.handlers.size());
        for (const auto& [msg, h] : st.handlers) {
            w.str(msg);
            write_program(w, h.program);
            write_interceptors(w, h.guards);
            write_interceptors(w, h.before);
            write_interceptors(w, h.after);
        }
    }
    return canon::sha256_hex(w.bytes());
}

std::string canonical(const DataStore& store) {
    canon::Writer w;
    if (!store.schema_ptr()) {
        w.tag('D').integer(0);
        return w.take();
    }
    const Schema& schema = store.schema();
    std::vector<int> order(schema.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return schema[a].name < schema[b].name; });
    w.tag('D').integer(schema.size());
    for (int r : order) {
        w.str(schema[r].name);
        Payload named;
        for (std::size_t f = 0; f < schema[r].fields.size(); ++f) named[schema[r].fields[f]] = store.at(r, static_cast<int>(f));
        w.payload(named);
    }
    return w.take();
}

std::string canonical(const Envelope& env) {
    canon::Writer w;
    w.tag('E').str(env.to.name).str(env.message_type).payload(env.payload);
    if (env.seq)
        w.tag('Q').integer(*env.seq);
    else
        w.tag('-');
    w.str(env.sender.name);
    return w.take();
}

std::string canonical(const TransitionResult& r, const CompiledMachine& m) {
    canon::Writer w;
    w.tag('R').str(to_string(r.status)).str(r.reason);
    w.str(m.states.at(static_cast<std::size_t>(r.next_state)).name);
    w.str(canonical(r.new_store));
    w.integer(r.outbox.size());
    for (const auto& e : r.outbox) w.str(canonical(e));
    w.flag(r.terminated);
    return w.take();
}

std::string store_digest(const DataStore& store) { return canon::sha256_hex(canonical(store)); }

std::string_view to_string(Status s) {
    switch (s) {
    case Status::Completed: return "Completed";
    case Status::Failed: return "Failed";
    case Status::Rejected: return "Rejected";
    }
    return "?";
}

} // namespace huuzlee::machine
