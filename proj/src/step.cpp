#include <algorithm>

#include "huuzlee/machine.hpp"

namespace huuzlee::machine {

// ---- unification ------------------------------------------------------------------

UnifyOutcome unify_records(const Payload& a, const Payload& b) {
    UnifyOutcome out;
    bool same_keys = a.size() == b.size() &&
                     std::equal(a.begin(), a.end(), b.begin(), [](const auto& x, const auto& y) { return x.first == y.first; });
    if (!same_keys) {
        out.kind = UnifyOutcome::Kind::SchemaMismatch;
        return out;
    }
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib) {
        const Value& va = ia->second;
        const Value& vb = ib->second;
        if (!is_bound(va) && !is_bound(vb)) {
            out = {UnifyOutcome::Kind::Incomplete, {}, ia->first};
            return out;
        }
        if (is_bound(va) && is_bound(vb) && va != vb) {
            out = {UnifyOutcome::Kind::Conflict, {}, ia->first};
            return out;
        }
        out.unified[ia->first] = is_bound(va) ? va : vb;
    }
    return out;
}

// ---- template rendering ------------------------------------------------------------

std::string render_template(const lang::Template& t, const DataStore& store) {
    std::string out;
    for (const auto& seg : t.segments) {
        if (const auto* text = std::get_if<std::string>(&seg)) {
            out += *text;
            continue;
        }
        const auto& ref = std::get<lang::DataRef>(seg);
        const Value* v = ref.field ? store.find(ref.record, *ref.field) : nullptr;
        if (!v) throw RenderError("UnresolvedReference", "no field '@" + ref.str() + "'");
        if (!is_bound(*v)) throw RenderError("UnboundFieldInTemplate", "field '@" + ref.str() + "' is unbound");
        out += render_value(*v);
    }
    return out;
}

// ---- step -----------------------------------------------------------------------------

namespace {

bool compare(const Value& a, CompareOp op, const Value& b) {
    switch (op) {
    case CompareOp::Eq: return a == b;
    case CompareOp::Ne: return a != b;
    default: break;
    }
    const auto* da = std::get_if<Decimal>(&a);
    const auto* db = std::get_if<Decimal>(&b);
    if (!da || !db) return false; // ordering is defined on decimals only
    switch (op) {
    case CompareOp::Lt: return *da < *db;
    case CompareOp::Le: return *da <= *db;
    case CompareOp::Gt: return *da > *db;
    case CompareOp::Ge: return *da >= *db;
    default: return false;
    }
}

/// Scratch state of one step. Works on a private copy of the records; the
/// caller's store is never touched.
class Execution {
public:
    Execution(const CompiledMachine& m, const DataStore& store, const Envelope* msg)
        : m_(m), records_(store.records()), msg_(msg) {}

    // Returns false and sets error_ on failure.
    bool run(const Program& p) {
        for (const auto& op : p)
            if (!std::visit([&](const auto& node) { return exec(node); }, op.node)) return false;
        return true;
    }

    bool guard_passes(const Interceptor& ic) const {
        for (const auto& c : ic.conditions)
            if (!compare(operand(c.lhs), c.op, operand(c.rhs))) return false;
        return true;
    }

    // Performs pending transitions from `state`. `enter_triggered` is true
    // when the first pending transition was requested by an #Enter program.
    bool settle(int& state, bool enter_triggered) {
        int chained = 0;
        while (pending_ && *pending_ >= 0) {
            int target = *pending_;
            pending_.reset();
            if (enter_triggered && ++chained > kMaxEnterChain) return fail("TransitionLoop");
            enter_triggered = true;
            if (const auto& exit = m_.states[state].exit) {
                if (!run(*exit)) return false;
                if (pending_) return fail("TransitionInExit");
            }
            state = target;
            if (const auto& enter = m_.states[state].enter) {
                if (!run(*enter)) return false;
            }
            if (terminated_) break;
        }
        pending_.reset();
        return true;
    }

    bool fail(std::string reason) {
        error_ = std::move(reason);
        return false;
    }

    const std::string& error() const { return error_; }
    bool terminated() const { return terminated_; }
    std::vector<Envelope>& outbox() { return outbox_; }
    DataStore::Records& records() { return records_; }

private:
    Value operand(const GuardOperand& o) const {
        if (const auto* p = std::get_if<PayloadOperand>(&o)) {
            if (!msg_) return Unbound{};
            auto it = msg_->payload.find(p->field);
            return it == msg_->payload.end() ? Value{Unbound{}} : it->second;
        }
        if (const auto* s = std::get_if<FieldSlot>(&o)) return records_[s->record][s->field];
        return std::get<Value>(o);
    }

    bool exec(const OpTransition& t) {
        pending_ = t.target;
        return true;
    }

    bool exec(const OpMap& op) {
        if (!msg_) return fail("NoMessage");
        const auto& rs = (*m_.schema)[op.record];
        auto& rec = records_[op.record];
        for (const auto& [name, v] : msg_->payload) {
            int f = rs.field_index(name);
            if (f < 0) return fail("UnknownField(" + name + ")");
            rec[f] = v;
        }
        return true;
    }

    bool exec(const OpMatch& op) {
        const auto& left = records_[op.left];
        const auto& right = records_[op.right];
        auto empty = [](const std::vector<Value>& r) { return std::none_of(r.begin(), r.end(), is_bound); };
        bool ok = !empty(left) && !empty(right);
        std::vector<Value> unified(left.size());
        for (std::size_t f = 0; ok && f < left.size(); ++f) {
            const Value& a = left[f];
            const Value& b = right[f];
            if (!is_bound(a) && !is_bound(b))
                ok = false;
            else if (is_bound(a) && is_bound(b) && a != b)
                ok = false;
            else
                unified[f] = is_bound(a) ? a : b;
        }
        if (ok && op.into >= 0) records_[op.into] = unify_into(op, unified);
        return run(ok ? op.on_success : op.on_fail);
    }

    // Left and right share field names but maybe not order; `into` too.
    std::vector<Value> unify_into(const OpMatch& op, const std::vector<Value>& unified) const {
        const auto& from = (*m_.schema)[op.left];
        const auto& to = (*m_.schema)[op.into];
        std::vector<Value> out(to.fields.size());
        for (std::size_t f = 0; f < from.fields.size(); ++f) out[to.field_index(from.fields[f])] = unified[f];
        return out;
    }

    bool exec(const OpSend& op) {
        const Value& addr = records_[op.address.record][op.address.field];
        const auto* to = std::get_if<Address>(&addr);
        if (!to) return fail("BadAddress");
        Envelope env;
        env.to = *to;
        env.message_type = op.message_type;
        if (const auto* t = std::get_if<CompiledTemplate>(&op.body)) {
            std::string text;
            for (const auto& seg : t->segments) {
                if (const auto* s = std::get_if<std::string>(&seg)) {
                    text += *s;
                    continue;
                }
                const auto& slot = std::get<FieldSlot>(seg);
                const Value& v = records_[slot.record][slot.field];
                if (!is_bound(v)) return fail("UnboundFieldInTemplate");
                text += render_value(v);
            }
            env.payload["text"] = std::move(text);
        } else {
            int r = std::get<int>(op.body);
            const auto& rs = (*m_.schema)[r];
            for (std::size_t f = 0; f < rs.fields.size(); ++f) env.payload[rs.fields[f]] = records_[r][f];
        }
        outbox_.push_back(std::move(env));
        return true;
    }

    bool exec(const OpTerminate&) {
        terminated_ = true;
        return true;
    }

    bool exec(const OpNoop&) { return true; }

    const CompiledMachine& m_;
    DataStore::Records records_;
    const Envelope* msg_;
    std::vector<Envelope> outbox_;
    std::optional<int> pending_;
    bool terminated_ = false;
    std::string error_;
};

TransitionResult unchanged(int state, const DataStore& store, bool terminated, Status status, std::string reason) {
    return {state, store, {}, terminated, status, std::move(reason)};
}

} // namespace

TransitionResult step(const CompiledMachine& m, int state, const DataStore& store, const Envelope& msg, bool terminated) {
    if (terminated) return unchanged(state, store, true, Status::Rejected, "Terminated");
    const Handler* h = m.handler(state, msg.message_type);
    if (!h) return unchanged(state, store, false, Status::Rejected, "NoHandler");

    Execution ex(m, store, &msg);
    for (const auto& g : h->guards)
        if (!ex.guard_passes(g)) return unchanged(state, store, false, Status::Failed, "PolicyVeto(" + g.fragment + ")");

    auto failed = [&] { return unchanged(state, store, false, Status::Failed, ex.error()); };
    for (const auto& b : h->before)
        if (!ex.run(b.program)) return failed();
    if (!ex.run(h->program)) return failed();
    for (auto it = h->after.rbegin(); it != h->after.rend(); ++it)
        if (!ex.run(it->program)) return failed();

    int next = state;
    if (!ex.settle(next, false)) return failed();
    return {next, DataStore(store.schema_ptr(), std::move(ex.records())), std::move(ex.outbox()), ex.terminated(),
            Status::Completed, {}};
}

TransitionResult bootstrap(const CompiledMachine& m) { return bootstrap(m, m.initial_store); }

TransitionResult bootstrap(const CompiledMachine& m, const DataStore& store) {
    int state = m.initial_state;
    Execution ex(m, store, nullptr);
    auto failed = [&] { return unchanged(state, store, false, Status::Failed, ex.error()); };
    if (const auto& enter = m.states[state].enter)
        if (!ex.run(*enter)) return failed();
    int next = state;
    if (!ex.settle(next, true)) return failed();
    return {next, DataStore(store.schema_ptr(), std::move(ex.records())), std::move(ex.outbox()), ex.terminated(),
            Status::Completed, {}};
}

} // namespace huuzlee::machine
