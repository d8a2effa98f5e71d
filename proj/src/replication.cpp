#include "huuzlee/replication.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <queue>
#include <random>
#include <sstream>

#include "huuzlee/canon.hpp"

namespace huuzlee::replication {

void check_config(const ReplicaConfig& cfg) {
    if (cfg.f < 0) throw BadConfig("f must be non-negative");
    if (cfg.n != 3 * cfg.f + 1)
        throw BadConfig("n must equal 3f+1 (n=" + std::to_string(cfg.n) + ", f=" + std::to_string(cfg.f) + ")");
    if (!cfg.roles.empty() && cfg.roles.size() != static_cast<std::size_t>(cfg.n))
        throw BadConfig("roles must name every node (" + std::to_string(cfg.roles.size()) + " of " +
                        std::to_string(cfg.n) + ")");
}

std::string_view to_string(FaultKind k) {
    switch (k) {
    case FaultKind::Silent: return "Silent";
    case FaultKind::Equivocate: return "Equivocate";
    case FaultKind::CorruptDigest: return "CorruptDigest";
    case FaultKind::Delay: return "Delay";
    case FaultKind::ForgeAuth: return "ForgeAuth";
    }
    return "?";
}

std::optional<FaultKind> parse_fault(std::string_view s) {
    for (auto k : {FaultKind::Silent, FaultKind::Equivocate, FaultKind::CorruptDigest, FaultKind::Delay,
                   FaultKind::ForgeAuth})
        if (to_string(k) == s) return k;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// .net files

namespace {

[[noreturn]] void net_fail(std::uint32_t line, const std::string& msg) {
    throw SyntaxError("NetConfigError", {line, 1}, msg);
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::uint64_t number(std::string_view s, std::uint32_t line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) net_fail(line, "expected a number, got '" + std::string(s) + "'");
    return v;
}

std::pair<std::uint64_t, std::uint64_t> range(std::string_view s, std::uint32_t line) {
    auto dots = s.find("..");
    if (dots == std::string_view::npos) net_fail(line, "expected lo..hi, got '" + std::string(s) + "'");
    auto lo = number(s.substr(0, dots), line);
    auto hi = number(s.substr(dots + 2), line);
    if (hi < lo) net_fail(line, "empty range '" + std::string(s) + "'");
    return {lo, hi};
}

// "0.01" -> 10000 ppm, exactly
std::uint32_t fraction_ppm(std::string_view s, std::uint32_t line) {
    auto dot = s.find('.');
    std::string_view whole = s.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if (whole.empty() || frac.size() > 6 || (dot != std::string_view::npos && frac.empty()))
        net_fail(line, "drop must be a fraction with at most six decimals");
    std::uint64_t w = number(whole, line);
    std::uint64_t f = frac.empty() ? 0 : number(frac, line);
    for (std::size_t i = frac.size(); i < 6; ++i) f *= 10;
    std::uint64_t ppm = w * 1000000 + f;
    if (ppm > 1000000) net_fail(line, "drop must not exceed 1");
    return static_cast<std::uint32_t>(ppm);
}

int node_id(std::string_view s, std::uint32_t line) {
    auto v = number(s, line);
    if (v > 1000000) net_fail(line, "node id out of range");
    return static_cast<int>(v);
}

} // namespace

NetFile parse_net(const SourceUnit& src) {
    NetFile out;
    std::istringstream in(src.text);
    std::string raw;
    std::uint32_t lineno = 0;
    bool have_n = false, have_f = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq != std::string::npos) {
            std::string key = trim(std::string_view(line).substr(0, eq));
            std::string val = trim(std::string_view(line).substr(eq + 1));
            if (val.empty()) net_fail(lineno, "missing value for '" + key + "'");
            if (key == "n") {
                out.replicas.n = node_id(val, lineno);
                have_n = true;
            } else if (key == "f") {
                out.replicas.f = node_id(val, lineno);
                have_f = true;
            } else if (key == "seed") {
                out.net.seed = number(val, lineno);
            } else if (key == "roles") {
                out.replicas.roles.clear();
                std::string cell;
                std::istringstream cells(val);
                while (std::getline(cells, cell, ',')) {
                    cell = trim(cell);
                    if (cell.empty()) net_fail(lineno, "empty role");
                    out.replicas.roles.push_back(cell);
                }
            } else if (key == "drop") {
                out.net.drop_ppm = fraction_ppm(val, lineno);
            } else if (key == "delay") {
                std::tie(out.net.delay_min, out.net.delay_max) = range(val, lineno);
            } else if (key == "max-ticks") {
                out.net.max_ticks = number(val, lineno);
            } else {
                net_fail(lineno, "unknown key '" + key + "'");
            }
            continue;
        }
        auto w = words(line);
        if (w[0] == "fault") {
            if (w.size() < 3 || w.size() > 4) net_fail(lineno, "expected: fault <node> <behavior> [ticks]");
            FaultProfile fp;
            fp.node = node_id(w[1], lineno);
            auto k = parse_fault(w[2]);
            if (!k) net_fail(lineno, "unknown fault behavior '" + w[2] + "'");
            fp.kind = *k;
            if (fp.kind == FaultKind::Delay) {
                if (w.size() != 4) net_fail(lineno, "Delay needs a tick count");
                fp.ticks = number(w[3], lineno);
            } else if (w.size() == 4) {
                net_fail(lineno, "only Delay takes a tick count");
            }
            out.faults.push_back(fp);
        } else if (w[0] == "partition") {
            if (w.size() < 5) net_fail(lineno, "expected: partition <from>..<to> <ids> | <ids>");
            Partition p;
            std::tie(p.from, p.to) = range(w[1], lineno);
            bool right = false;
            for (std::size_t i = 2; i < w.size(); ++i) {
                if (w[i] == "|") {
                    if (right) net_fail(lineno, "partition has more than two sides");
                    right = true;
                    continue;
                }
                (right ? p.b : p.a).insert(node_id(w[i], lineno));
            }
            if (!right || p.a.empty() || p.b.empty()) net_fail(lineno, "partition needs two non-empty sides");
            out.net.partitions.push_back(std::move(p));
        } else {
            net_fail(lineno, "unrecognized line '" + line + "'");
        }
    }
    if (!have_n || !have_f) net_fail(lineno, "n and f are required");
    return out;
}

NetFile load_net(const std::filesystem::path& path) { return parse_net(read_source(path)); }

// ---------------------------------------------------------------------------
// Protocol simulation

namespace {

enum class Kind { Request, PrePrepare, Prepare, Commit, ExecVote };

char kind_tag(Kind k) {
    switch (k) {
    case Kind::Request: return 'R';
    case Kind::PrePrepare: return 'P';
    case Kind::Prepare: return 'p';
    case Kind::Commit: return 'C';
    case Kind::ExecVote: return 'V';
    }
    return '?';
}

constexpr int kClient = -1;

struct Message {
    Kind kind = Kind::Prepare;
    int from = 0;
    int to = 0;
    std::uint64_t seq = 0;
    std::string digest; // request digest, or state digest for ExecVote
    // Request and PrePrepare carry the client's request
    std::uint64_t request_id = 0;
    std::optional<machine::Envelope> body;
    std::string client_auth;
    std::string auth; // node authenticator; empty for client requests
};

std::string envelope_bytes(const machine::Envelope& env, std::uint64_t request_id) {
    canon::Writer w;
    w.tag('E').str(env.to.name).str(env.message_type).payload(env.payload).str(env.sender.name).integer(request_id);
    return w.take();
}

std::string request_digest(const machine::Envelope& env, std::uint64_t request_id) {
    return canon::sha256_hex(envelope_bytes(env, request_id));
}

std::string node_key(int id) { return canon::sha256_hex("replica-key:" + std::to_string(id)); }
const std::string& client_key() {
    static const std::string k = canon::sha256_hex("client-key");
    return k;
}

std::string auth_bytes(const Message& m) {
    canon::Writer w;
    w.tag(kind_tag(m.kind)).integer(static_cast<std::uint64_t>(m.from)).integer(static_cast<std::uint64_t>(m.to));
    w.integer(m.seq).str(m.digest).integer(m.request_id).str(m.client_auth);
    return w.take();
}

std::string sign(const Message& m, const std::string& key) { return canon::hmac_sha256_hex(key, auth_bytes(m)); }

std::string forge(const std::string& digest) { return canon::sha256_hex("forged:" + digest); }

struct Slot {
    std::optional<std::string> accepted; // digest from the primary's pre-prepare
    std::map<std::string, std::set<int>> prepares;
    std::map<std::string, std::set<int>> commits;
    bool sent_commit = false;
    std::optional<std::string> committed;
    std::vector<int> signers;
};

struct KnownRequest {
    std::uint64_t id = 0;
    machine::Envelope env;
};

struct Node {
    int id = 0;
    std::optional<FaultProfile> fault;
    runtime::World world;
    ledger::Ledger ledger;
    ledger::Recorder recorder{ledger};

    std::map<std::string, KnownRequest> known;
    std::map<std::uint64_t, Slot> slots;
    std::uint64_t next_exec = 1;
    std::vector<Execution> executed;
    std::map<std::uint64_t, std::map<int, std::string>> votes;
    bool divergence = false;
    std::set<int> flagged;
    std::uint64_t discarded = 0;

    // primary only
    std::map<std::uint64_t, std::string> pending; // request id -> digest
    std::uint64_t next_request = 1;
    std::uint64_t next_seq = 1;

    explicit Node(const runtime::World& w) : world(w) { world.set_observer(&recorder); }
};

constexpr std::uint64_t kWorldBudget = 100000;

class Simulation {
public:
    Simulation(const runtime::World& initial, const ReplicaConfig& cfg, const NetConfig& net,
               const std::vector<FaultProfile>& faults)
        : cfg_(cfg), net_(net), rng_(net.seed) {
        for (int i = 0; i < cfg.n; ++i) {
            nodes_.push_back(std::make_unique<Node>(initial));
            nodes_.back()->id = i;
        }
        for (const auto& fp : faults) {
            if (fp.node < 0 || fp.node >= cfg.n)
                throw BadConfig("fault names node " + std::to_string(fp.node) + " outside 0.." +
                                std::to_string(cfg.n - 1));
            if (nodes_[fp.node]->fault) throw BadConfig("node " + std::to_string(fp.node) + " has two faults");
            nodes_[fp.node]->fault = fp;
        }
        for (const auto& p : net.partitions)
            for (const auto* side : {&p.a, &p.b})
                for (int id : *side)
                    if (id < 0 || id >= cfg.n) throw BadConfig("partition names unknown node " + std::to_string(id));
        if (net.delay_min > net.delay_max) throw BadConfig("delay range is empty");
    }

    void submit(const machine::Envelope& env, std::uint64_t id) {
        Message m;
        m.kind = Kind::Request;
        m.from = kClient;
        m.request_id = id;
        m.body = env;
        m.digest = request_digest(env, id);
        m.client_auth = canon::hmac_sha256_hex(client_key(), m.digest);
        for (int to = 0; to < cfg_.n; ++to) {
            m.to = to;
            transmit(m, 0);
        }
    }

    std::uint64_t run() {
        std::uint64_t last = 0;
        while (!queue_.empty()) {
            auto ev = queue_.top();
            if (ev.time > net_.max_ticks) break;
            queue_.pop();
            now_ = ev.time;
            last = now_;
            receive(inflight_.at(ev.id));
            inflight_.erase(ev.id);
        }
        return last;
    }

    std::vector<std::unique_ptr<Node>>& nodes() { return nodes_; }

private:
    struct Event {
        std::uint64_t time;
        std::uint64_t id; // FIFO among equal times
        bool operator>(const Event& o) const { return time != o.time ? time > o.time : id > o.id; }
    };

    bool cut(int a, int b) const {
        for (const auto& p : net_.partitions) {
            if (now_ < p.from || now_ >= p.to) continue;
            if ((p.a.count(a) && p.b.count(b)) || (p.b.count(a) && p.a.count(b))) return true;
        }
        return false;
    }

    // Applies loss, partitions and latency. Client links and self-delivery
    // are reliable.
    void transmit(const Message& m, std::uint64_t extra) {
        std::uint64_t delay = 0;
        if (m.from != m.to) {
            std::uint64_t span = net_.delay_max - net_.delay_min + 1;
            delay = net_.delay_min + rng_() % span;
            if (m.from != kClient) {
                bool lost = net_.drop_ppm > 0 && rng_() % 1000000 < net_.drop_ppm;
                if (lost || cut(m.from, m.to)) return;
            }
        }
        std::uint64_t id = next_event_++;
        inflight_.emplace(id, m);
        queue_.push({now_ + delay + extra, id});
    }

    void send(Node& self, Message m, int to) {
        m.from = self.id;
        m.to = to;
        m.auth = sign(m, node_key(self.id));
        if (to == self.id || !self.fault) {
            transmit(m, 0);
            return;
        }
        const auto& fault = *self.fault;
        switch (fault.kind) {
        case FaultKind::Silent: return;
        case FaultKind::Delay: transmit(m, fault.ticks); return;
        case FaultKind::ForgeAuth:
            m.auth = sign(m, node_key(self.id) + "-wrong");
            transmit(m, 0);
            return;
        case FaultKind::CorruptDigest:
            if (m.kind == Kind::ExecVote) {
                m.digest = forge(m.digest);
                m.auth = sign(m, node_key(self.id));
            }
            transmit(m, 0);
            return;
        case FaultKind::Equivocate:
            if (deceived(self.id, to)) {
                if (m.kind == Kind::PrePrepare && m.body) {
                    // a request the client never signed
                    m.body->payload["forged"] = std::string("1");
                    m.digest = request_digest(*m.body, m.request_id);
                } else {
                    m.digest = forge(m.digest);
                }
                m.auth = sign(m, node_key(self.id));
            }
            transmit(m, 0);
            return;
        }
    }

    // The upper half of the other nodes, by id, gets the fake story.
    bool deceived(int liar, int to) const {
        std::vector<int> others;
        for (int i = 0; i < cfg_.n; ++i)
            if (i != liar) others.push_back(i);
        std::size_t honest = (others.size() + 1) / 2;
        auto pos = std::find(others.begin(), others.end(), to) - others.begin();
        return static_cast<std::size_t>(pos) >= honest;
    }

    void broadcast(Node& self, const Message& m) {
        for (int to = 0; to < cfg_.n; ++to) send(self, m, to);
    }

    bool client_signed(const Message& m) const {
        return m.body && request_digest(*m.body, m.request_id) == m.digest &&
               canon::hmac_sha256_hex(client_key(), m.digest) == m.client_auth;
    }

    void receive(const Message& m) {
        Node& self = *nodes_[m.to];
        if (m.kind == Kind::Request) {
            if (!client_signed(m)) {
                ++self.discarded;
                return;
            }
            self.known.emplace(m.digest, KnownRequest{m.request_id, *m.body});
            if (self.id == ReplicaConfig::primary) order_requests(self, m);
            try_execute(self);
            return;
        }
        if (m.from < 0 || m.from >= cfg_.n || sign(m, node_key(m.from)) != m.auth) {
            ++self.discarded;
            return;
        }
        switch (m.kind) {
        case Kind::PrePrepare: on_pre_prepare(self, m); break;
        case Kind::Prepare:
            slot(self, m.seq).prepares[m.digest].insert(m.from);
            check_prepared(self, m.seq);
            break;
        case Kind::Commit:
            slot(self, m.seq).commits[m.digest].insert(m.from);
            check_committed(self, m.seq);
            break;
        case Kind::ExecVote:
            self.votes[m.seq][m.from] = m.digest;
            check_votes(self, m.seq);
            break;
        case Kind::Request: break;
        }
    }

    Slot& slot(Node& n, std::uint64_t seq) { return n.slots[seq]; }

    // Requests are sequenced in client id order, whatever order they arrive in.
    void order_requests(Node& self, const Message& m) {
        self.pending.emplace(m.request_id, m.digest);
        while (self.pending.count(self.next_request)) {
            const std::string d = self.pending[self.next_request];
            const auto& req = self.known.at(d);
            Message pp;
            pp.kind = Kind::PrePrepare;
            pp.seq = self.next_seq++;
            pp.digest = d;
            pp.request_id = req.id;
            pp.body = req.env;
            pp.client_auth = canon::hmac_sha256_hex(client_key(), d);
            ++self.next_request;
            broadcast(self, pp);
        }
    }

    void on_pre_prepare(Node& self, const Message& m) {
        if (m.from != ReplicaConfig::primary || m.seq == 0) return;
        if (!client_signed(m)) {
            ++self.discarded;
            return;
        }
        Slot& s = slot(self, m.seq);
        if (s.accepted) return; // first pre-prepare for a seq wins
        s.accepted = m.digest;
        self.known.emplace(m.digest, KnownRequest{m.request_id, *m.body});
        Message p;
        p.kind = Kind::Prepare;
        p.seq = m.seq;
        p.digest = m.digest;
        broadcast(self, p);
        check_prepared(self, m.seq);
    }

    void check_prepared(Node& self, std::uint64_t seq) {
        Slot& s = slot(self, seq);
        if (s.sent_commit || !s.accepted) return;
        auto it = s.prepares.find(*s.accepted);
        if (it == s.prepares.end() || static_cast<int>(it->second.size()) < cfg_.quorum()) return;
        s.sent_commit = true;
        Message c;
        c.kind = Kind::Commit;
        c.seq = seq;
        c.digest = *s.accepted;
        broadcast(self, c);
    }

    void check_committed(Node& self, std::uint64_t seq) {
        Slot& s = slot(self, seq);
        if (s.committed) return;
        for (const auto& [d, who] : s.commits) {
            if (static_cast<int>(who.size()) < cfg_.quorum()) continue;
            s.committed = d;
            s.signers.assign(who.begin(), who.end());
            break;
        }
        if (s.committed) try_execute(self);
    }

    void try_execute(Node& self) {
        for (;;) {
            auto it = self.slots.find(self.next_exec);
            if (it == self.slots.end() || !it->second.committed) return;
            auto req = self.known.find(*it->second.committed);
            if (req == self.known.end()) return; // body not seen yet
            std::uint64_t seq = self.next_exec++;
            machine::Envelope env = req->second.env;
            env.seq = seq;
            self.recorder.set_seq(seq);
            self.world.deliver(env);
            self.world.run(kWorldBudget);
            Execution ex;
            ex.seq = seq;
            ex.request_id = req->second.id;
            ex.request_digest = req->first;
            ex.state_digest = self.world.digest();
            ex.certificate = {seq, req->first, it->second.signers};
            self.executed.push_back(ex);
            Message v;
            v.kind = Kind::ExecVote;
            v.seq = seq;
            v.digest = ex.state_digest;
            broadcast(self, v);
        }
    }

    void check_votes(Node& self, std::uint64_t seq) {
        if (seq == 0 || seq > self.executed.size()) return;
        const std::string& own = self.executed[seq - 1].state_digest;
        const auto& vs = self.votes[seq];
        std::map<std::string, int> others;
        int agree = 0;
        for (const auto& [who, d] : vs) {
            if (d == own) ++agree;
            if (who != self.id) ++others[d];
        }
        for (const auto& [d, count] : others)
            if (d != own && count >= cfg_.quorum()) self.divergence = true;
        if (agree >= cfg_.quorum())
            for (const auto& [who, d] : vs)
                if (d != own) self.flagged.insert(who);
    }

    ReplicaConfig cfg_;
    NetConfig net_;
    std::mt19937_64 rng_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    std::map<std::uint64_t, Message> inflight_;
    std::uint64_t next_event_ = 0;
    std::uint64_t now_ = 0;
};

bool is_prefix(const std::vector<ledger::LedgerEntry>& a, const std::vector<ledger::LedgerEntry>& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

} // namespace

ReplicaSet::ReplicaSet(const runtime::World& initial, ReplicaConfig cfg) : initial_(initial), cfg_(std::move(cfg)) {
    check_config(cfg_);
    initial_.set_observer(nullptr);
}

std::uint64_t ReplicaSet::submit(machine::Envelope env) {
    env.seq.reset();
    requests_.push_back(std::move(env));
    return requests_.size();
}

std::vector<std::string> ReplicaSet::initial_digests() const {
    std::vector<std::string> out;
    for (int i = 0; i < cfg_.n; ++i) {
        runtime::World copy = initial_;
        out.push_back(copy.digest());
    }
    return out;
}

ReplicationReport ReplicaSet::run(const NetConfig& net, const std::vector<FaultProfile>& faults) const {
    Simulation sim(initial_, cfg_, net, faults);
    for (std::size_t i = 0; i < requests_.size(); ++i) sim.submit(requests_[i], i + 1);

    ReplicationReport rep;
    rep.n = cfg_.n;
    rep.f = cfg_.f;
    rep.seed = net.seed;
    rep.requests = requests_.size();
    rep.ticks = sim.run();

    int faulty = 0;
    for (auto& node : sim.nodes()) {
        ReplicaReport r;
        r.node = node->id;
        r.role = cfg_.roles.empty() ? "" : cfg_.roles[node->id];
        r.fault = node->fault;
        r.executed = node->executed;
        r.divergence = node->divergence;
        r.flagged = node->flagged;
        r.discarded_auth = node->discarded;
        r.final_digest = node->world.digest();
        r.ledger = node->ledger;
        if (node->fault) ++faulty;
        rep.replicas.push_back(std::move(r));
    }
    rep.assumption_breach = faulty > cfg_.f;

    std::vector<const ReplicaReport*> honest;
    for (const auto& r : rep.replicas)
        if (!r.fault) honest.push_back(&r);

    for (const auto* r : honest) {
        for (std::size_t i = 0; i < r->executed.size(); ++i) {
            if (r->executed[i].seq != i + 1) {
                rep.total_order = false;
                rep.findings.push_back("replica " + std::to_string(r->node) + " executed out of order");
            }
        }
        if (r->divergence) {
            rep.honest_divergence = true;
            rep.findings.push_back("replica " + std::to_string(r->node) + " diverged from a quorum");
        }
        rep.flagged.insert(r->flagged.begin(), r->flagged.end());
    }
    for (std::size_t a = 0; a < honest.size(); ++a) {
        for (std::size_t b = a + 1; b < honest.size(); ++b) {
            const auto& x = honest[a]->executed;
            const auto& y = honest[b]->executed;
            for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
                if (x[i].request_digest != y[i].request_digest || x[i].state_digest != y[i].state_digest) {
                    rep.agreement = false;
                    rep.findings.push_back("replicas " + std::to_string(honest[a]->node) + " and " +
                                           std::to_string(honest[b]->node) + " disagree at seq " +
                                           std::to_string(x[i].seq));
                    break;
                }
            }
            const auto& lx = honest[a]->ledger.entries();
            const auto& ly = honest[b]->ledger.entries();
            if (!is_prefix(lx, ly) && !is_prefix(ly, lx)) {
                rep.ledgers_consistent = false;
                rep.findings.push_back("ledgers of replicas " + std::to_string(honest[a]->node) + " and " +
                                       std::to_string(honest[b]->node) + " diverge");
            }
        }
    }
    for (std::uint64_t id = 1; id <= requests_.size(); ++id) {
        int count = 0;
        for (const auto* r : honest)
            for (const auto& ex : r->executed)
                if (ex.request_id == id) ++count;
        if (count < cfg_.f + 1) {
            rep.liveness = false;
            rep.findings.push_back("request " + std::to_string(id) + " executed by " + std::to_string(count) +
                                   " honest replicas, needs " + std::to_string(cfg_.f + 1));
        }
    }
    if (rep.assumption_breach)
        rep.findings.push_back(std::to_string(faulty) + " faulty nodes exceed f=" + std::to_string(cfg_.f) +
                               "; guarantees do not apply");
    return rep;
}

std::string export_report(const ReplicationReport& r) {
    std::ostringstream out;
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    out << "config n=" << r.n << " f=" << r.f << " quorum=" << 2 * r.f + 1 << " seed=" << r.seed
        << " requests=" << r.requests << " ticks=" << r.ticks << '\n';
    for (const auto& rep : r.replicas) {
        out << "replica node=" << rep.node << " role=" << (rep.role.empty() ? "-" : rep.role) << " fault=";
        if (!rep.fault) out << '-';
        else {
            out << to_string(rep.fault->kind);
            if (rep.fault->kind == FaultKind::Delay) out << ':' << rep.fault->ticks;
        }
        out << " executed=" << rep.executed.size() << " divergence=" << yn(rep.divergence) << " flagged=";
        if (rep.flagged.empty()) out << '-';
        for (auto it = rep.flagged.begin(); it != rep.flagged.end(); ++it)
            out << (it == rep.flagged.begin() ? "" : ",") << *it;
        out << " discarded=" << rep.discarded_auth << " ledger=" << rep.ledger.size()
            << " digest=" << rep.final_digest << '\n';
    }
    for (const auto& rep : r.replicas) {
        for (const auto& ex : rep.executed) {
            out << "exec node=" << rep.node << " seq=" << ex.seq << " request=" << ex.request_id
                << " request_digest=" << ex.request_digest << " state=" << ex.state_digest << " signers=";
            for (std::size_t i = 0; i < ex.certificate.signers.size(); ++i)
                out << (i ? "," : "") << ex.certificate.signers[i];
            out << '\n';
        }
    }
    for (const auto& f : r.findings) out << "finding " << f << '\n';
    out << "verdict liveness=" << (r.liveness ? "ok" : "lost") << " safety=" << (r.safe() ? "ok" : "violated")
        << " agreement=" << yn(r.agreement) << " total_order=" << yn(r.total_order)
        << " ledgers_consistent=" << yn(r.ledgers_consistent) << " divergence=" << yn(r.honest_divergence)
        << " assumption_breach=" << yn(r.assumption_breach) << " flagged=";
    if (r.flagged.empty()) out << '-';
    for (auto it = r.flagged.begin(); it != r.flagged.end(); ++it)
        out << (it == r.flagged.begin() ? "" : ",") << *it;
    out << '\n';
    return out.str();
}

} // namespace huuzlee::replication
