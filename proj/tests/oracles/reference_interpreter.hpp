#pragma once

// Direct AST interpreter used as a differential oracle for machine::step.
// Works on names rather than compiled indices and shares no code with the
// compiled engine beyond the value types.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "huuzlee/ast.hpp"
#include "huuzlee/value.hpp"

namespace huuzlee::testing {

struct RefMessage {
    std::string to;
    std::string type;
    Payload payload;
    friend bool operator==(const RefMessage&, const RefMessage&) = default;
};

struct RefResult {
    std::string state;
    std::map<std::string, Payload> store;
    std::vector<RefMessage> outbox;
    bool terminated = false;
    std::string status; // Completed | Failed | Rejected
    std::string reason;
};

class ReferenceInterpreter {
public:
    explicit ReferenceInterpreter(const lang::ActorDefinition& def) : def_(def) {}

    std::map<std::string, Payload> initial_store() const {
        std::map<std::string, Payload> out;
        for (const auto& r : def_.records)
            for (const auto& f : r.fields) out[r.name][f.name] = f.initial;
        return out;
    }

    RefResult step(const std::string& state, const std::map<std::string, Payload>& store, const std::string& type,
                   const Payload& payload, bool terminated) const {
        RefResult keep{state, store, {}, terminated, "", ""};
        if (terminated) {
            keep.status = "Rejected";
            keep.reason = "Terminated";
            return keep;
        }
        const auto* st = find_state(state);
        const lang::HandlerDecl* h = nullptr;
        for (const auto& hd : st->handlers)
            if (hd.trigger == lang::Trigger::on(type)) h = &hd;
        if (!h) {
            keep.status = "Rejected";
            keep.reason = "NoHandler";
            return keep;
        }
        Run run{*this, store, &payload};
        std::string cur = st->name;
        if (!run.actions(h->actions) || !run.settle(cur, false)) {
            keep.status = "Failed";
            keep.reason = run.error;
            return keep;
        }
        return {cur, run.store, run.outbox, run.terminated, "Completed", ""};
    }

    RefResult bootstrap() const {
        auto store = initial_store();
        Run run{*this, store, nullptr};
        std::string cur = def_.states.front().name;
        for (const auto& hd : def_.states.front().handlers)
            if (hd.trigger == lang::Trigger::enter() && !run.actions(hd.actions))
                return {cur, store, {}, false, "Failed", run.error};
        if (!run.settle(cur, true)) return {cur, store, {}, false, "Failed", run.error};
        return {cur, run.store, run.outbox, run.terminated, "Completed", ""};
    }

private:
    static bool same_name(const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
                return false;
        return true;
    }

    const lang::StateDecl* find_state(const std::string& name) const {
        for (const auto& s : def_.states)
            if (same_name(s.name, name)) return &s;
        return nullptr;
    }

    const lang::HandlerDecl* lifecycle(const std::string& state, const lang::Trigger& t) const {
        for (const auto& hd : find_state(state)->handlers)
            if (hd.trigger == t) return &hd;
        return nullptr;
    }

    static std::string type_from_text(const lang::Template& t) {
        if (t.segments.empty() || !std::holds_alternative<std::string>(t.segments[0])) return "compose";
        const auto& s = std::get<std::string>(t.segments[0]);
        auto colon = s.find(':');
        if (colon == std::string::npos) return "compose";
        std::string out;
        for (char c : s.substr(0, colon))
            if (std::isalnum(static_cast<unsigned char>(c))) out += c;
        if (out.empty() || !std::isalpha(static_cast<unsigned char>(out[0]))) return "compose";
        return out;
    }

    struct Run {
        const ReferenceInterpreter& self;
        std::map<std::string, Payload> store;
        const Payload* msg;
        std::vector<RefMessage> outbox;
        // outer optional: any request; inner: target, none means hold
        std::optional<std::optional<std::string>> pending;
        bool terminated = false;
        std::string error;

        bool fail(std::string why) {
            error = std::move(why);
            return false;
        }

        bool actions(const std::vector<lang::Action>& list) {
            for (const auto& a : list)
                if (!action(a)) return false;
            return true;
        }

        bool action(const lang::Action& a) {
            if (const auto* t = std::get_if<lang::TransitionTo>(&a.node)) {
                pending = t->target;
                return true;
            }
            if (const auto* m = std::get_if<lang::MapThis>(&a.node)) {
                if (!msg) return fail("NoMessage");
                auto& rec = store[m->target.record];
                for (const auto& [k, v] : *msg) {
                    if (!rec.count(k)) return fail("UnknownField(" + k + ")");
                    rec[k] = v;
                }
                return true;
            }
            if (const auto* m = std::get_if<lang::Match>(&a.node)) {
                const auto& l = store[m->left.record];
                const auto& r = store[m->right.record];
                auto all_unbound = [](const Payload& p) {
                    return std::none_of(p.begin(), p.end(), [](const auto& kv) { return is_bound(kv.second); });
                };
                bool ok = !all_unbound(l) && !all_unbound(r);
                Payload unified;
                for (const auto& [k, v] : l) {
                    const Value& w = r.at(k);
                    if (!is_bound(v) && !is_bound(w)) ok = false;
                    if (is_bound(v) && is_bound(w) && v != w) ok = false;
                    unified[k] = is_bound(v) ? v : w;
                }
                if (ok) {
                    std::optional<std::string> into;
                    if (m->into) {
                        into = m->into->record;
                    } else if (store.count("contract")) {
                        bool same = store["contract"].size() == l.size();
                        for (const auto& kv : l) same = same && store["contract"].count(kv.first);
                        if (same) into = "contract";
                    }
                    if (into) store[*into] = unified;
                }
                return actions(ok ? m->on_success : m->on_fail);
            }
            if (const auto* s = std::get_if<lang::Send>(&a.node)) {
                const Value& addr = store[s->address.record][*s->address.field];
                if (!std::holds_alternative<Address>(addr)) return fail("BadAddress");
                RefMessage out;
                out.to = std::get<Address>(addr).name;
                if (const auto* t = std::get_if<lang::Template>(&s->body)) {
                    std::string text;
                    for (const auto& seg : t->segments) {
                        if (const auto* str = std::get_if<std::string>(&seg)) {
                            text += *str;
                        } else {
                            const auto& ref = std::get<lang::DataRef>(seg);
                            const Value& v = store[ref.record][*ref.field];
                            if (!is_bound(v)) return fail("UnboundFieldInTemplate");
                            text += render_value(v);
                        }
                    }
                    out.type = s->message_type ? *s->message_type : type_from_text(*t);
                    out.payload["text"] = text;
                } else {
                    out.type = *s->message_type;
                    out.payload = store[std::get<lang::DataRef>(s->body).record];
                }
                outbox.push_back(std::move(out));
                return true;
            }
            if (std::holds_alternative<lang::TerminateActor>(a.node)) {
                terminated = true;
                return true;
            }
            return true; // NoOp
        }

        bool settle(std::string& cur, bool from_enter) {
            int hops = 0;
            while (pending && pending->has_value()) {
                std::string target = **pending;
                pending.reset();
                if (from_enter && ++hops > 8) return fail("TransitionLoop");
                from_enter = true;
                if (const auto* ex = self.lifecycle(cur, lang::Trigger::exit())) {
                    if (!actions(ex->actions)) return false;
                    if (pending) return fail("TransitionInExit");
                }
                cur = self.find_state(target)->name;
                if (const auto* en = self.lifecycle(cur, lang::Trigger::enter()))
                    if (!actions(en->actions)) return false;
                if (terminated) break;
            }
            pending.reset();
            return true;
        }
    };

    const lang::ActorDefinition& def_;
};

} // namespace huuzlee::testing
