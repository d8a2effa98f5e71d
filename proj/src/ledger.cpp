#include "huuzlee/ledger.hpp"

#include <fstream>
#include <stdexcept>

#include "huuzlee/canon.hpp"

namespace huuzlee::ledger {

std::string_view to_string(EntryStatus s) {
    switch (s) {
    case EntryStatus::Attempted: return "ATTEMPTED";
    case EntryStatus::Live: return "LIVE";
    case EntryStatus::Completed: return "COMPLETED";
    case EntryStatus::Failed: return "FAILED";
    }
    return "?";
}

std::optional<EntryStatus> parse_status(std::string_view s) {
    for (auto st : {EntryStatus::Attempted, EntryStatus::Live, EntryStatus::Completed, EntryStatus::Failed})
        if (to_string(st) == s) return st;
    return std::nullopt;
}

std::string entry_body(const LedgerEntry& e) {
    std::string out;
    out += "index=" + std::to_string(e.index);
    out += "\tprev=" + e.prev_hash;
    out += "\tseq=" + std::to_string(e.seq);
    out += "\tactor=" + e.actor;
    out += "\tmsg=" + e.message_type;
    out += "\tpayload=" + e.payload_digest;
    out += "\tstatus=" + std::string(to_string(e.status));
    out += "\treason=" + (e.reason.empty() ? std::string("-") : e.reason);
    out += "\tstate=" + e.state_digest;
    return out;
}

std::string entry_line(const LedgerEntry& e) { return entry_body(e) + "\thash=" + e.entry_hash; }

namespace {

std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (s.empty() || s.size() > 19 || (s.size() > 1 && s[0] == '0')) return std::nullopt;
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

bool plain_text(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c == '\t' || c == '\n' || c == '\r') return false;
    return true;
}

} // namespace

std::optional<LedgerEntry> parse_entry(std::string_view line) {
    static constexpr std::string_view keys[] = {"index=",   "prev=",   "seq=",    "actor=", "msg=",
                                                "payload=", "status=", "reason=", "state=", "hash="};
    std::string_view v[10];
    std::size_t start = 0;
    for (int i = 0; i < 10; ++i) {
        auto tab = line.find('\t', start);
        if ((tab == std::string_view::npos) != (i == 9)) return std::nullopt;
        auto cell = line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
        if (!cell.starts_with(keys[i])) return std::nullopt;
        v[i] = cell.substr(keys[i].size());
        start = tab + 1;
    }
    LedgerEntry e;
    auto index = parse_uint(v[0]);
    auto seq = parse_uint(v[2]);
    auto status = parse_status(v[6]);
    if (!index || !seq || !status) return std::nullopt;
    if (!canon::is_digest(v[1]) || !canon::is_digest(v[5]) || !canon::is_digest(v[8]) || !canon::is_digest(v[9]))
        return std::nullopt;
    if (!plain_text(v[3]) || !plain_text(v[4]) || !plain_text(v[7])) return std::nullopt;
    e.index = *index;
    e.prev_hash = std::string(v[1]);
    e.seq = *seq;
    e.actor = std::string(v[3]);
    e.message_type = std::string(v[4]);
    e.payload_digest = std::string(v[5]);
    e.status = *status;
    e.reason = v[7] == "-" ? std::string() : std::string(v[7]);
    e.state_digest = std::string(v[8]);
    e.entry_hash = std::string(v[9]);
    return e;
}

const LedgerEntry& Ledger::append(const Event& ev) {
    for (const auto* s : {&ev.actor, &ev.message_type, &ev.reason})
        if (s->find_first_of("\t\n\r") != std::string::npos) throw std::invalid_argument("ledger field holds a control character");
    if (ev.actor.empty() || ev.message_type.empty() || ev.reason == "-")
        throw std::invalid_argument("ledger entry needs an actor and message type");
    LedgerEntry e;
    e.index = entries_.size();
    e.prev_hash = entries_.empty() ? canon::zero_digest() : entries_.back().entry_hash;
    e.seq = ev.seq;
    e.actor = ev.actor;
    e.message_type = ev.message_type;
    e.payload_digest = ev.payload_digest;
    e.status = ev.status;
    e.reason = ev.reason;
    e.state_digest = ev.state_digest;
    e.entry_hash = canon::sha256_hex(entry_body(e));
    entries_.push_back(std::move(e));
    return entries_.back();
}

std::string Ledger::text() const {
    std::string out;
    for (const auto& e : entries_) {
        out += entry_line(e);
        out += '\n';
    }
    return out;
}

void Ledger::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text();
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

VerifyReport verify_chain(const std::vector<LedgerEntry>& entries) {
    VerifyReport rep;
    std::string prev = canon::zero_digest();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        auto bad = [&](std::string why) {
            rep.ok = false;
            rep.first_bad = i;
            rep.problem = std::move(why);
            return rep;
        };
        if (e.index != i) return bad("index " + std::to_string(e.index) + " where " + std::to_string(i) + " expected");
        if (e.prev_hash != prev) return bad("prev does not link to the preceding entry");
        if (canon::sha256_hex(entry_body(e)) != e.entry_hash) return bad("hash does not match the entry");
        prev = e.entry_hash;
        rep.entries = i + 1;
    }
    return rep;
}

VerifyReport verify_chain(std::string_view text) {
    VerifyReport rep;
    std::string prev = canon::zero_digest();
    std::size_t start = 0;
    std::uint64_t i = 0;
    auto bad = [&](std::string why) {
        rep.ok = false;
        rep.first_bad = i;
        rep.problem = std::move(why);
        return rep;
    };
    for (; start < text.size(); ++i) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) return bad("last line is not terminated");
        std::string_view l = text.substr(start, nl - start);
        auto e = parse_entry(l);
        // the hash covers the raw bytes, so they must be in canonical form
        if (!e || entry_line(*e) != l) return bad("malformed entry");
        if (e->index != i) return bad("index " + std::to_string(e->index) + " where " + std::to_string(i) + " expected");
        if (e->prev_hash != prev) return bad("prev does not link to the preceding entry");
        std::string_view body = l.substr(0, l.size() - e->entry_hash.size() - 6); // "\thash=" + digest
        if (canon::sha256_hex(body) != e->entry_hash) return bad("hash does not match the entry");
        prev = e->entry_hash;
        rep.entries = i + 1;
        start = nl + 1;
    }
    return rep;
}

std::vector<LedgerEntry> parse_ledger(std::string_view text) {
    std::vector<LedgerEntry> out;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        std::string_view l = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        auto e = parse_entry(l);
        if (!e) throw std::runtime_error("malformed ledger line " + std::to_string(out.size() + 1));
        out.push_back(std::move(*e));
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return out;
}

std::vector<LedgerEntry> query(const std::vector<LedgerEntry>& entries, const Filter& f) {
    std::vector<LedgerEntry> out;
    for (const auto& e : entries) {
        if (f.actor && e.actor != *f.actor) continue;
        if (f.status && e.status != *f.status) continue;
        if (f.seq_min && e.seq < *f.seq_min) continue;
        if (f.seq_max && e.seq > *f.seq_max) continue;
        out.push_back(e);
    }
    return out;
}

std::string payload_digest(const Payload& p) {
    canon::Writer w;
    w.payload(p);
    return canon::sha256_hex(w.bytes());
}

void Recorder::write(const std::string& actor, const machine::Envelope& env, EntryStatus st, std::string reason,
                     std::string state) {
    ledger_.append({seq_, actor, env.message_type, payload_digest(env.payload), st, std::move(reason), std::move(state)});
}

void Recorder::on_enqueue(const runtime::ActorInstance& a, const machine::Envelope& env) {
    write(a.address.name, env, EntryStatus::Attempted, {}, runtime::actor_digest(a));
}

void Recorder::on_dequeue(const runtime::ActorInstance& a, const machine::Envelope& env) {
    write(a.address.name, env, EntryStatus::Live, {}, runtime::actor_digest(a));
}

void Recorder::on_result(const runtime::ActorInstance& a, const machine::Envelope& env,
                         const machine::TransitionResult& r) {
    bool ok = r.status == machine::Status::Completed;
    write(a.address.name, env, ok ? EntryStatus::Completed : EntryStatus::Failed, r.reason, runtime::actor_digest(a));
}

void Recorder::on_dead_letter(const machine::Envelope& env) {
    write(env.to.name, env, EntryStatus::Attempted, {}, canon::zero_digest());
    write(env.to.name, env, EntryStatus::Failed, "DeadLetter", canon::zero_digest());
}

} // namespace huuzlee::ledger
