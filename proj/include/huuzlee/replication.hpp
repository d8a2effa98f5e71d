#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "huuzlee/ledger.hpp"
#include "huuzlee/runtime.hpp"
#include "huuzlee/source.hpp"

namespace huuzlee::replication {

class BadConfig : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ReplicaConfig {
    int n = 1;
    int f = 0;
    std::vector<std::string> roles; // empty or one label per node

    int quorum() const { return 2 * f + 1; }
    static constexpr int primary = 0;
};

/// Throws BadConfig unless f >= 0, n == 3f+1 and roles is empty or has n
/// labels.
void check_config(const ReplicaConfig& cfg);

enum class FaultKind { Silent, Equivocate, CorruptDigest, Delay, ForgeAuth };

std::string_view to_string(FaultKind k);
std::optional<FaultKind> parse_fault(std::string_view s);

/// Faults only touch what a node sends to others; its own bookkeeping stays
/// honest.
///   Silent         sends nothing.
///   Equivocate     honest to the first half of the other nodes (by id),
///                  forged requests and digests to the rest.
///   CorruptDigest  lies about its post-execution state digest.
///   Delay          holds every outgoing message for `ticks` extra ticks.
///   ForgeAuth      signs with a wrong key; receivers must discard.
struct FaultProfile {
    int node = 0;
    FaultKind kind = FaultKind::Silent;
    std::uint64_t ticks = 0; // Delay only
};

/// Links between `a` and `b` are cut for ticks in [from, to).
struct Partition {
    std::uint64_t from = 0;
    std::uint64_t to = 0;
    std::set<int> a;
    std::set<int> b;
};

struct NetConfig {
    std::uint64_t seed = 1;
    std::uint32_t drop_ppm = 0; // per message, parts per million
    std::uint64_t delay_min = 1;
    std::uint64_t delay_max = 1;
    std::vector<Partition> partitions;
    std::uint64_t max_ticks = 100000;
};

/// Everything a `.net` file describes.
struct NetFile {
    ReplicaConfig replicas;
    NetConfig net;
    std::vector<FaultProfile> faults;
};

/// Line format (`#` comments):
///   n = 4
///   f = 1
///   seed = 7
///   roles = a, b, c, d
///   drop = 0.01            fraction, at most six decimals
///   delay = 1..5
///   max-ticks = 100000
///   fault <node> <Silent|Equivocate|CorruptDigest|Delay|ForgeAuth> [ticks]
///   partition <from>..<to> <ids...> | <ids...>
/// Throws SyntaxError("NetConfigError"). Does not check n == 3f+1.
NetFile parse_net(const SourceUnit& src);
NetFile load_net(const std::filesystem::path& path);

struct CommitCertificate {
    std::uint64_t seq = 0;
    std::string request_digest;
    std::vector<int> signers; // nodes whose matching commits were counted
};

struct Execution {
    std::uint64_t seq = 0;
    std::uint64_t request_id = 0;
    std::string request_digest;
    std::string state_digest;
    CommitCertificate certificate;
};

struct ReplicaReport {
    int node = 0;
    std::string role;
    std::optional<FaultProfile> fault;
    std::vector<Execution> executed; // in seq order
    bool divergence = false;         // saw a quorum of votes disagreeing with its own digest
    std::set<int> flagged;           // nodes whose execution votes disagreed with the agreed digest
    std::uint64_t discarded_auth = 0;
    std::string final_digest;
    ledger::Ledger ledger;
};

struct ReplicationReport {
    int n = 0;
    int f = 0;
    std::uint64_t seed = 0;
    std::size_t requests = 0;
    std::vector<ReplicaReport> replicas;
    std::uint64_t ticks = 0;

    bool assumption_breach = false;  // more faulty nodes than f
    bool liveness = true;            // every request executed by at least f+1 honest replicas
    bool agreement = true;           // honest replicas agree on request and digest at every common seq
    bool total_order = true;         // every honest replica executed a gap-free prefix 1..k
    bool ledgers_consistent = true;  // honest ledgers are prefixes of one another
    bool honest_divergence = false;  // some honest replica raised a divergence flag
    std::set<int> flagged;           // union over honest replicas
    std::vector<std::string> findings;

    bool safe() const { return agreement && total_order && ledgers_consistent && !honest_divergence; }
};

/// n copies of a world driven by a PBFT-style three-phase protocol over a
/// simulated network. Node 0 is the fixed primary; there is no view change.
class ReplicaSet {
public:
    /// Throws BadConfig.
    ReplicaSet(const runtime::World& initial, ReplicaConfig cfg);

    /// Queues a client request and returns its id (1, 2, ...). Requests are
    /// sequenced in id order.
    std::uint64_t submit(machine::Envelope env);

    /// Runs the protocol until no message is in flight or the tick limit is
    /// reached. A pure function of the initial world, configs, faults and
    /// submitted requests.
    ReplicationReport run(const NetConfig& net, const std::vector<FaultProfile>& faults) const;

    const ReplicaConfig& config() const { return cfg_; }
    /// Digests of the n initial copies (all equal).
    std::vector<std::string> initial_digests() const;

private:
    runtime::World initial_;
    ReplicaConfig cfg_;
    std::vector<machine::Envelope> requests_;
};

/// Text report: one `replica` line per node, one `exec` line per (replica,
/// seq), then a `verdict` line.
std::string export_report(const ReplicationReport& r);

} // namespace huuzlee::replication
