#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "huuzlee/machine.hpp"

namespace huuzlee::runtime {

using machine::CompiledMachine;
using machine::DataStore;
using machine::Envelope;
using machine::Status;
using machine::TransitionResult;

struct ActorInstance {
    Address address;
    std::shared_ptr<const CompiledMachine> machine;
    int state = 0;
    DataStore store;
    std::deque<Envelope> mailbox;
    bool terminated = false;
};

/// Digest of one actor's (state, store, terminated) triple.
std::string actor_digest(const ActorInstance& a);

enum class TraceKind { Bootstrap, Step, DeadLetter };

std::string_view to_string(TraceKind k);

struct TraceEntry {
    std::uint64_t tick = 0;
    TraceKind kind = TraceKind::Step;
    Address actor; // destination
    Envelope envelope;
    Status status = Status::Completed;
    std::string reason;
    std::string state_before; // state names; empty for dead letters
    std::string state_after;
    std::size_t emitted = 0;
    bool terminated = false;
    std::string pre_digest; // actor digests; empty for dead letters
    std::string post_digest;
};

struct Trace {
    std::vector<TraceEntry> entries;
    std::uint64_t ticks = 0; // ticks consumed so far
    bool max_ticks_exceeded = false;
};

/// One JSON object per line, keys sorted, no insignificant whitespace.
std::string export_trace(const Trace& trace);

/// Lifecycle hooks used by the ledger. `on_enqueue` fires when an envelope
/// reaches a live mailbox, `on_dequeue` when it is handed to step and
/// `on_result` right after. Dead letters fire `on_dead_letter` only.
class WorldObserver {
public:
    virtual ~WorldObserver() = default;
    virtual void on_enqueue(const ActorInstance&, const Envelope&) {}
    virtual void on_dequeue(const ActorInstance&, const Envelope&) {}
    virtual void on_result(const ActorInstance&, const Envelope&, const TransitionResult&) {}
    virtual void on_dead_letter(const Envelope&) {}
};

class AddressInUse : public std::runtime_error {
public:
    explicit AddressInUse(const std::string& addr) : std::runtime_error("address in use: " + addr) {}
};

/// Single-node world. Actors are scheduled round-robin in creation order,
/// one message per tick. Actors spawned back to back (without a delivery or
/// run in between) form one batch; a non-zero seed permutes the order
/// within each batch and nothing else.
class World {
public:
    explicit World(std::uint64_t seed = 0) : seed_(seed) {}

    World(const World&) = default;
    World& operator=(const World&) = default;

    /// Creates the actor and runs its bootstrap (#Enter of the initial
    /// state). `init` overrides initial field values, keyed "record.field".
    /// Throws AddressInUse, or std::invalid_argument for unknown init keys.
    Address spawn(std::shared_ptr<const CompiledMachine> m, const Address& address, const Payload& init = {});

    /// Routes one envelope. Unknown destinations become dead-letter trace
    /// entries; a terminated destination is stepped immediately and traced
    /// as Rejected.
    void deliver(Envelope env);

    /// Processes messages until every mailbox is empty or `max_ticks` more
    /// ticks have elapsed. Returns false when cut off with mail pending.
    bool run(std::uint64_t max_ticks);

    bool quiescent() const;
    const Trace& trace() const { return trace_; }
    const ActorInstance* find(const Address& a) const;
    const std::vector<ActorInstance>& actors() const { return actors_; }

    /// Hash over (address, state, store, terminated) of every actor in
    /// address order.
    std::string digest() const;

    void set_observer(WorldObserver* obs) { observer_ = obs; }

    /// Envelope accounting: created == consumed + dead + pending.
    std::uint64_t created() const { return created_; }
    std::uint64_t consumed() const { return consumed_; }
    std::uint64_t dead_letters() const { return dead_; }
    std::uint64_t pending() const;

private:
    ActorInstance* find_mut(const Address& a);
    void route(const Address& from, std::vector<Envelope> outbox);
    void process(std::size_t idx, const Envelope& env);
    const std::vector<std::size_t>& order();

    std::uint64_t seed_;
    std::vector<ActorInstance> actors_;
    std::vector<std::size_t> batch_start_; // index of the first actor in each batch
    bool batch_open_ = false;
    std::vector<std::size_t> order_;
    bool order_dirty_ = false;
    std::size_t cursor_ = 0; // position in order_ where the next scan starts
    Trace trace_;
    WorldObserver* observer_ = nullptr;
    std::uint64_t created_ = 0, consumed_ = 0, dead_ = 0;
};

} // namespace huuzlee::runtime
