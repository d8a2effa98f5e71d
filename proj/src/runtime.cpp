#include "huuzlee/runtime.hpp"

#include <algorithm>
#include <random>

#include "json.hpp"

#include "huuzlee/canon.hpp"

namespace huuzlee::runtime {

std::string actor_digest(const ActorInstance& a) {
    canon::Writer w;
    w.tag('I').str(a.machine->states[a.state].name).str(machine::canonical(a.store)).flag(a.terminated);
    return canon::sha256_hex(w.bytes());
}

std::string_view to_string(TraceKind k) {
    switch (k) {
    case TraceKind::Bootstrap: return "bootstrap";
    case TraceKind::Step: return "step";
    case TraceKind::DeadLetter: return "dead-letter";
    }
    return "?";
}

Address World::spawn(std::shared_ptr<const CompiledMachine> m, const Address& address, const Payload& init) {
    if (find(address)) throw AddressInUse(address.name);
    DataStore store = m->initial_store;
    for (const auto& [key, v] : init) {
        auto dot = key.find('.');
        if (dot == std::string::npos || !store.find(key.substr(0, dot), key.substr(dot + 1)))
            throw std::invalid_argument("no field '" + key + "' to initialise");
        store = store.with(key.substr(0, dot), key.substr(dot + 1), v);
    }
    if (!batch_open_) {
        batch_start_.push_back(actors_.size());
        batch_open_ = true;
    }
    order_dirty_ = true;
    actors_.push_back({address, m, m->initial_state, store, {}, false});
    std::size_t idx = actors_.size() - 1;

    // bootstrap: the initial state's #Enter with no message
    auto r = machine::bootstrap(*m, store);
    ActorInstance& a = actors_[idx];
    TraceEntry e;
    e.tick = trace_.ticks;
    e.kind = TraceKind::Bootstrap;
    e.actor = address;
    e.envelope = {address, "<bootstrap>", {}, std::nullopt, address};
    e.state_before = m->states[a.state].name;
    e.pre_digest = actor_digest(a);
    e.status = r.status;
    e.reason = r.reason;
    if (r.status == Status::Completed) {
        a.state = r.next_state;
        a.store = r.new_store;
        a.terminated = r.terminated;
    }
    e.state_after = m->states[a.state].name;
    e.emitted = r.status == Status::Completed ? r.outbox.size() : 0;
    e.terminated = a.terminated;
    e.post_digest = actor_digest(a);
    trace_.entries.push_back(std::move(e));
    if (r.status == Status::Completed) route(address, std::move(r.outbox));
    return address;
}

ActorInstance* World::find_mut(const Address& a) {
    for (auto& act : actors_)
        if (act.address == a) return &act;
    return nullptr;
}

const ActorInstance* World::find(const Address& a) const {
    for (const auto& act : actors_)
        if (act.address == a) return &act;
    return nullptr;
}

void World::deliver(Envelope env) {
    batch_open_ = false;
    ++created_;
    ActorInstance* a = find_mut(env.to);
    if (!a) {
        ++dead_;
        TraceEntry e;
        e.tick = trace_.ticks;
        e.kind = TraceKind::DeadLetter;
        e.actor = env.to;
        e.status = Status::Rejected;
        e.reason = "DeadLetter";
        e.envelope = std::move(env);
        if (observer_) observer_->on_dead_letter(e.envelope);
        trace_.entries.push_back(std::move(e));
        return;
    }
    if (observer_) observer_->on_enqueue(*a, env);
    if (a->terminated) {
        process(static_cast<std::size_t>(a - actors_.data()), env);
        return;
    }
    a->mailbox.push_back(std::move(env));
}

void World::route(const Address& from, std::vector<Envelope> outbox) {
    for (auto& env : outbox) {
        env.sender = from;
        deliver(std::move(env));
    }
}

void World::process(std::size_t idx, const Envelope& env) {
    ++consumed_;
    ActorInstance& a = actors_[idx];
    if (observer_) observer_->on_dequeue(a, env);
    TraceEntry e;
    e.tick = trace_.ticks;
    e.kind = TraceKind::Step;
    e.actor = a.address;
    e.envelope = env;
    e.state_before = a.machine->states[a.state].name;
    e.pre_digest = actor_digest(a);
    auto r = machine::step(*a.machine, a.state, a.store, env, a.terminated);
    e.status = r.status;
    e.reason = r.reason;
    a.state = r.next_state;
    a.store = r.new_store;
    a.terminated = r.terminated;
    e.state_after = a.machine->states[a.state].name;
    e.emitted = r.outbox.size();
    e.terminated = a.terminated;
    e.post_digest = actor_digest(a);
    if (observer_) observer_->on_result(a, env, r);
    trace_.entries.push_back(std::move(e));
    route(a.address, std::move(r.outbox));
}

const std::vector<std::size_t>& World::order() {
    if (!order_dirty_) return order_;
    order_.clear();
    for (std::size_t b = 0; b < batch_start_.size(); ++b) {
        std::size_t lo = batch_start_[b];
        std::size_t hi = b + 1 < batch_start_.size() ? batch_start_[b + 1] : actors_.size();
        std::vector<std::size_t> batch;
        for (std::size_t i = lo; i < hi; ++i) batch.push_back(i);
        if (seed_ != 0) {
            // Fisher-Yates on raw engine output: identical on every platform
            std::mt19937_64 rng(seed_ ^ (0x9e3779b97f4a7c15ULL * (b + 1)));
            for (std::size_t i = batch.size(); i > 1; --i) std::swap(batch[i - 1], batch[rng() % i]);
        }
        order_.insert(order_.end(), batch.begin(), batch.end());
    }
    order_dirty_ = false;
    return order_;
}

bool World::quiescent() const {
    return std::all_of(actors_.begin(), actors_.end(), [](const ActorInstance& a) { return a.mailbox.empty(); });
}

std::uint64_t World::pending() const {
    std::uint64_t n = 0;
    for (const auto& a : actors_) n += a.mailbox.size();
    return n;
}

bool World::run(std::uint64_t max_ticks) {
    batch_open_ = false;
    std::uint64_t budget = max_ticks;
    while (!quiescent()) {
        if (budget == 0) {
            trace_.max_ticks_exceeded = true;
            return false;
        }
        const auto& ord = order();
        std::size_t n = ord.size();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t pos = (cursor_ + k) % n;
            std::size_t idx = ord[pos];
            if (actors_[idx].mailbox.empty()) continue;
            Envelope env = std::move(actors_[idx].mailbox.front());
            actors_[idx].mailbox.pop_front();
            cursor_ = (pos + 1) % n;
            process(idx, env);
            break;
        }
        ++trace_.ticks;
        --budget;
    }
    return true;
}

std::string World::digest() const {
    std::vector<const ActorInstance*> sorted;
    for (const auto& a : actors_) sorted.push_back(&a);
    std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->address.name < y->address.name; });
    canon::Writer w;
    w.tag('W').integer(sorted.size());
    for (const auto* a : sorted) {
        w.str(a->address.name)
            .str(a->machine->states[a->state].name)
            .str(machine::canonical(a->store))
            .flag(a->terminated);
    }
    return canon::sha256_hex(w.bytes());
}

namespace {

nlohmann::json payload_json(const Payload& p) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : p) out[k] = value_literal(v);
    return out;
}

} // namespace

std::string export_trace(const Trace& trace) {
    std::string out;
    for (const auto& e : trace.entries) {
        nlohmann::json j;
        j["tick"] = e.tick;
        j["kind"] = to_string(e.kind);
        j["actor"] = e.actor.name;
        j["from"] = e.envelope.sender.name;
        j["type"] = e.envelope.message_type;
        j["payload"] = payload_json(e.envelope.payload);
        j["status"] = machine::to_string(e.status);
        j["reason"] = e.reason;
        j["state_before"] = e.state_before;
        j["state_after"] = e.state_after;
        j["emitted"] = e.emitted;
        j["terminated"] = e.terminated;
        j["pre"] = e.pre_digest;
        j["post"] = e.post_digest;
        if (e.envelope.seq) j["seq"] = *e.envelope.seq;
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace huuzlee::runtime
