#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "huuzlee/runtime.hpp"

namespace huuzlee::ledger {

enum class EntryStatus { Attempted, Live, Completed, Failed };

std::string_view to_string(EntryStatus s);
std::optional<EntryStatus> parse_status(std::string_view s);

/// One lifecycle event. On disk each entry is one line of tab-separated
/// `key=value` cells in this fixed order:
///
///   index prev seq actor msg payload status reason state hash
///
/// `reason` is `-` when empty. `hash` is the SHA-256 (lowercase hex) of the
/// line bytes before `\thash=`; `prev` is the previous entry's hash, all
/// zeros for index 0.
struct LedgerEntry {
    std::uint64_t index = 0;
    std::string prev_hash;
    std::uint64_t seq = 0;
    std::string actor;
    std::string message_type;
    std::string payload_digest;
    EntryStatus status = EntryStatus::Attempted;
    std::string reason;
    std::string state_digest;
    std::string entry_hash;

    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Line without the trailing `\thash=...` cell and without newline.
std::string entry_body(const LedgerEntry& e);
/// Full line including the hash cell, without newline.
std::string entry_line(const LedgerEntry& e);
/// Strict inverse of entry_line: exact cell order, canonical numbers,
/// lowercase hex. Does not check the hash.
std::optional<LedgerEntry> parse_entry(std::string_view line);

struct Event {
    std::uint64_t seq = 0;
    std::string actor;
    std::string message_type;
    std::string payload_digest;
    EntryStatus status = EntryStatus::Attempted;
    std::string reason;
    std::string state_digest;
};

/// Append-only chain held in memory.
class Ledger {
public:
    /// Throws std::invalid_argument when a text field holds a tab or newline.
    const LedgerEntry& append(const Event& ev);
    const std::vector<LedgerEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    /// File form: one line per entry, each terminated by '\n'.
    std::string text() const;
    void write(const std::filesystem::path& path) const;

private:
    std::vector<LedgerEntry> entries_;
};

struct VerifyReport {
    bool ok = true;
    std::size_t entries = 0;                // entries that verified
    std::optional<std::uint64_t> first_bad; // first entry that fails
    std::string problem;
};

/// Verifies file text: every line parses, hashes recompute, indices run
/// from 0 without gaps and every prev matches its predecessor's hash.
VerifyReport verify_chain(std::string_view text);
VerifyReport verify_chain(const std::vector<LedgerEntry>& entries);

/// Parses file text; throws std::runtime_error at the first malformed line.
std::vector<LedgerEntry> parse_ledger(std::string_view text);

struct Filter {
    std::optional<std::string> actor;
    std::optional<EntryStatus> status;
    std::optional<std::uint64_t> seq_min;
    std::optional<std::uint64_t> seq_max;
};

/// Order-preserving filtered view.
std::vector<LedgerEntry> query(const std::vector<LedgerEntry>& entries, const Filter& f);

std::string payload_digest(const Payload& p);

/// Writes ATTEMPTED when an envelope reaches a mailbox, LIVE when it is
/// handed to step and COMPLETED or FAILED after. Rejected receipts become
/// FAILED with their reason; dead letters are ATTEMPTED then
/// FAILED(DeadLetter) against the zero digest.
class Recorder : public runtime::WorldObserver {
public:
    explicit Recorder(Ledger& ledger) : ledger_(ledger) {}

    /// Sequence number stamped on subsequent entries (0 on a single node).
    void set_seq(std::uint64_t seq) { seq_ = seq; }

    void on_enqueue(const runtime::ActorInstance& a, const machine::Envelope& env) override;
    void on_dequeue(const runtime::ActorInstance& a, const machine::Envelope& env) override;
    void on_result(const runtime::ActorInstance& a, const machine::Envelope& env,
                   const machine::TransitionResult& r) override;
    void on_dead_letter(const machine::Envelope& env) override;

private:
    void write(const std::string& actor, const machine::Envelope& env, EntryStatus st, std::string reason,
               std::string state);

    Ledger& ledger_;
    std::uint64_t seq_ = 0;
};

} // namespace huuzlee::ledger
