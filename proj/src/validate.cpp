#include "huuzlee/validate.hpp"

#include <set>

namespace huuzlee::lang {

int resolve_state(const ActorDefinition& def, std::string_view name) {
    for (std::size_t i = 0; i < def.states.size(); ++i)
        if (iequals(def.states[i].name, name)) return static_cast<int>(i);
    return -1;
}

namespace {

class Validator {
public:
    Validator(const ActorDefinition& def, std::string file) : def_(def), file_(std::move(file)) {}

    std::vector<Diagnostic> run() {
        if (def_.states.empty()) report(def_.pos, "NoStates", "actor declares no states; the first state is initial");
        check_records();
        check_states();
        return std::move(out_);
    }

private:
    void report(Position pos, std::string code, std::string message) {
        out_.push_back({file_, pos.line, pos.column, std::move(code), std::move(message)});
    }

    void check_records() {
        std::set<std::string> names;
        for (const auto& rec : def_.records) {
            if (!names.insert(rec.name).second)
                report(rec.pos, "DuplicateRecord", "record '" + rec.name + "' declared twice");
            std::set<std::string> fields;
            for (const auto& f : rec.fields)
                if (!fields.insert(f.name).second)
                    report(f.pos, "DuplicateField", "field '" + f.name + "' declared twice in '" + rec.name + "'");
        }
    }

    void check_states() {
        for (std::size_t i = 0; i < def_.states.size(); ++i) {
            const auto& st = def_.states[i];
            for (std::size_t j = 0; j < i; ++j)
                if (iequals(def_.states[j].name, st.name))
                    report(st.pos, "DuplicateState", "state '" + st.name + "' clashes with '" + def_.states[j].name + "'");
            std::set<std::string> seen;
            for (const auto& h : st.handlers) {
                std::string key = (h.trigger.kind == Trigger::Kind::Message ? "msg:" : "") + h.trigger.name();
                if (!seen.insert(key).second)
                    report(h.pos, "DuplicateHandler", "state '" + st.name + "' has more than one #" + h.trigger.name());
                if (h.actions.empty())
                    report(h.pos, "EmptyHandler", "handler #" + h.trigger.name() + " has no actions; use 'do nothing'");
                actions(h.actions);
            }
        }
    }

    void actions(const std::vector<Action>& list) {
        for (const auto& a : list) std::visit([&](const auto& node) { check(node); }, a.node);
    }

    const RecordDecl* resolve(const DataRef& ref) {
        const RecordDecl* rec = def_.find_record(ref.record);
        if (!rec) {
            report(ref.pos, "UnresolvedRecord", "unknown record '@" + ref.record + "'");
            return nullptr;
        }
        if (ref.field && !rec->find_field(*ref.field)) {
            report(ref.pos, "UnresolvedField", "record '" + ref.record + "' has no field '" + *ref.field + "'");
            return nullptr;
        }
        return rec;
    }

    const RecordDecl* whole_record(const DataRef& ref, const char* code) {
        if (ref.field) {
            report(ref.pos, code, "expected a whole record, got '@" + ref.str() + "'");
            return nullptr;
        }
        return resolve(ref);
    }

    static std::set<std::string> field_names(const RecordDecl& r) {
        std::set<std::string> out;
        for (const auto& f : r.fields) out.insert(f.name);
        return out;
    }

    void check(const TransitionTo& t) {
        if (t.target && resolve_state(def_, *t.target) < 0)
            report(t.pos, "UnresolvedState", "no state matches '$" + *t.target + "'");
    }

    void check(const MapThis& m) { whole_record(m.target, "BadMapTarget"); }

    void check(const Match& m) {
        const RecordDecl* l = whole_record(m.left, "BadMatchOperand");
        const RecordDecl* r = whole_record(m.right, "BadMatchOperand");
        if (l && r && field_names(*l) != field_names(*r))
            report(m.pos, "SchemaMismatch", "'" + l->name + "' and '" + r->name + "' have different fields");
        if (m.into) {
            const RecordDecl* into = whole_record(*m.into, "BadMatchOperand");
            if (l && into && field_names(*l) != field_names(*into))
                report(m.into->pos, "SchemaMismatch", "'" + into->name + "' cannot hold the unified record");
        }
        actions(m.on_success);
        actions(m.on_fail);
    }

    void check(const Send& s) {
        if (!s.address.field)
            report(s.address.pos, "BadAddressRef", "send address must name a field, got '@" + s.address.str() + "'");
        else
            resolve(s.address);
        if (const auto* t = std::get_if<Template>(&s.body)) {
            for (const auto& seg : t->segments) {
                const auto* r = std::get_if<DataRef>(&seg);
                if (!r) continue;
                if (!r->field)
                    report(r->pos, "BadTemplateRef", "template reference '@" + r->str() + "' must name a field");
                else
                    resolve(*r);
            }
        } else {
            whole_record(std::get<DataRef>(s.body), "BadSendBody");
            if (!s.message_type)
                report(s.pos, "BadSendBody", "sending a record needs an explicit #messageType");
        }
    }

    void check(const TerminateActor&) {}
    void check(const NoOp&) {}

    const ActorDefinition& def_;
    std::string file_;
    std::vector<Diagnostic> out_;
};

} // namespace

std::vector<Diagnostic> validate(const ActorDefinition& def, const std::string& file) {
    return Validator(def, file).run();
}

} // namespace huuzlee::lang
