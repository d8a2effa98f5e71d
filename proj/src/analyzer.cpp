#include "huuzlee/analyzer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace huuzlee::analyzer {

using machine::CompiledMachine;
using machine::Program;

std::string to_string(const Label& l) {
    std::string s = l.consumed + " {";
    for (std::size_t i = 0; i < l.emitted.size(); ++i) s += (i ? "," : "") + l.emitted[i];
    s += l.terminates ? "} end" : "} live";
    return s;
}

std::string to_string(const Witness& w) {
    std::string s;
    for (const auto& l : w.path) s += to_string(l) + " ; ";
    s += to_string(w.label);
    s += w.side == 0 ? " [first only" : " [second only";
    s += w.missing ? "]" : ", other side diverges after]";
    return s;
}

namespace {

// Too many static paths means the machine is far beyond desk scale.
constexpr std::size_t kMaxPaths = 1 << 16;

struct Path {
    std::optional<int> pending;
    bool terminated = false;
    bool failed = false;
    std::vector<std::string> emitted;
};

class Scanner {
public:
    explicit Scanner(const CompiledMachine& m) : m_(m) {}

    std::vector<Path> run(const Program& p, std::vector<Path> paths) const {
        for (const auto& op : p) {
            std::vector<Path> next;
            for (auto& path : paths) {
                if (path.failed) {
                    next.push_back(std::move(path));
                    continue;
                }
                if (const auto* t = std::get_if<machine::OpTransition>(&op.node)) {
                    path.pending = t->target;
                    next.push_back(std::move(path));
                } else if (const auto* s = std::get_if<machine::OpSend>(&op.node)) {
                    path.emitted.push_back(s->message_type);
                    next.push_back(std::move(path));
                } else if (std::holds_alternative<machine::OpTerminate>(op.node)) {
                    path.terminated = true;
                    next.push_back(std::move(path));
                } else if (const auto* mt = std::get_if<machine::OpMatch>(&op.node)) {
                    for (auto& q : run(mt->on_success, {path})) next.push_back(std::move(q));
                    for (auto& q : run(mt->on_fail, {path})) next.push_back(std::move(q));
                } else {
                    next.push_back(std::move(path)); // map and noop have no observable effect
                }
            }
            paths = std::move(next);
            if (paths.size() > kMaxPaths) throw TooLarge("too many static paths");
        }
        return paths;
    }

    // Mirrors the step engine's settle loop, forking where #Exit or #Enter
    // programs fork. Returns (path, state) outcomes.
    void settle(Path path, int state, bool enter_triggered, int chained,
                std::vector<std::pair<Path, int>>& out) const {
        if (path.failed || !path.pending || *path.pending < 0) {
            path.pending.reset();
            out.emplace_back(std::move(path), state);
            return;
        }
        int target = *path.pending;
        path.pending.reset();
        if (enter_triggered && ++chained > machine::kMaxEnterChain) {
            path.failed = true;
            out.emplace_back(std::move(path), state);
            return;
        }
        std::vector<Path> after_exit{path};
        if (const auto& exit = m_.states[state].exit) after_exit = run(*exit, after_exit);
        for (auto& p : after_exit) {
            if (p.failed) {
                out.emplace_back(std::move(p), state);
                continue;
            }
            if (p.pending) {
                p.failed = true; // TransitionInExit
                out.emplace_back(std::move(p), state);
                continue;
            }
            std::vector<Path> after_enter{p};
            if (const auto& enter = m_.states[target].enter) after_enter = run(*enter, after_enter);
            for (auto& q : after_enter) {
                if (q.terminated && !q.failed) {
                    q.pending.reset();
                    out.emplace_back(std::move(q), target);
                } else {
                    settle(std::move(q), target, true, chained, out);
                }
            }
        }
        if (out.size() > kMaxPaths) throw TooLarge("too many static paths");
    }

private:
    const CompiledMachine& m_;
};

} // namespace

ProtocolSignature extract_protocol(const CompiledMachine& m) {
    if (m.states.size() > kMaxStates) throw TooLarge("machine has " + std::to_string(m.states.size()) + " states");
    ProtocolSignature sig;
    for (const auto& s : m.states) sig.states.push_back(s.name);
    Scanner scan(m);
    std::set<Transition> trans;

    auto add = [&](int from, const std::string& type, std::vector<std::pair<Path, int>>& outcomes) {
        for (auto& [p, to] : outcomes) {
            Transition t;
            t.from = from;
            t.label.consumed = type;
            if (p.failed) {
                t.to = from; // all-or-nothing: nothing observable happened
            } else {
                t.label.emitted = p.emitted;
                std::sort(t.label.emitted.begin(), t.label.emitted.end());
                t.label.terminates = p.terminated;
                t.to = to;
            }
            trans.insert(std::move(t));
        }
    };

    for (int s = 0; s < static_cast<int>(m.states.size()); ++s) {
        for (const auto& [type, h] : m.states[s].handlers) {
            std::vector<std::pair<Path, int>> outcomes;
            if (!h.guards.empty()) {
                Path veto;
                veto.failed = true;
                outcomes.emplace_back(veto, s);
            }
            std::vector<Path> paths{Path{}};
            for (const auto& b : h.before) paths = scan.run(b.program, paths);
            paths = scan.run(h.program, paths);
            for (auto it = h.after.rbegin(); it != h.after.rend(); ++it) paths = scan.run(it->program, paths);
            for (auto& p : paths) scan.settle(std::move(p), s, false, 0, outcomes);
            add(s, type, outcomes);
        }
    }

    // bootstrap
    std::vector<std::pair<Path, int>> boot;
    std::vector<Path> paths{Path{}};
    if (const auto& enter = m.states[m.initial_state].enter) paths = scan.run(*enter, paths);
    for (auto& p : paths) {
        if (p.terminated && !p.failed) boot.emplace_back(std::move(p), m.initial_state);
        else scan.settle(std::move(p), m.initial_state, true, 0, boot);
    }
    std::set<int> targets;
    bool observable = false;
    for (const auto& [p, to] : boot) {
        targets.insert(p.failed ? m.initial_state : to);
        if (!p.failed && (p.terminated || !p.emitted.empty())) observable = true;
    }
    if (!observable && targets.size() == 1) {
        sig.initial = *targets.begin();
    } else {
        int start = static_cast<int>(sig.states.size());
        sig.states.push_back(kStart);
        sig.initial = start;
        add(start, kBootstrap, boot);
    }
    sig.transitions.assign(trans.begin(), trans.end());
    return sig;
}

ProtocolSignature relabel_terms(const ProtocolSignature& sig, const ontology::AnnotatedDefinition& ann) {
    auto term = [&](const std::string& type) {
        if (type == kBootstrap) return type;
        const auto* t = ann.term_of("#" + type);
        return t ? t->id : type;
    };
    ProtocolSignature out = sig;
    std::set<Transition> trans;
    for (auto t : sig.transitions) {
        t.label.consumed = term(t.label.consumed);
        for (auto& e : t.label.emitted) e = term(e);
        std::sort(t.label.emitted.begin(), t.label.emitted.end());
        trans.insert(std::move(t));
    }
    out.transitions.assign(trans.begin(), trans.end());
    return out;
}

namespace {

// Analysis graph: terminating labels lead to a per-graph sink with no
// outgoing transitions.
struct Graph {
    int size = 0;
    int initial = 0;
    std::vector<std::vector<std::pair<Label, int>>> out;
};

Graph graph_of(const ProtocolSignature& sig, int offset = 0) {
    if (sig.states.size() > kMaxStates + 1) throw TooLarge("signature has " + std::to_string(sig.states.size()) + " states");
    Graph g;
    int n = static_cast<int>(sig.states.size());
    g.size = n + 1;
    g.initial = sig.initial + offset;
    g.out.resize(g.size);
    for (const auto& t : sig.transitions) {
        int to = t.label.terminates ? n : t.to;
        g.out[t.from].emplace_back(t.label, to + offset);
    }
    for (auto& edges : g.out) std::sort(edges.begin(), edges.end());
    return g;
}

Graph disjoint_union(const ProtocolSignature& a, const ProtocolSignature& b, int& b_initial) {
    Graph ga = graph_of(a);
    Graph gb = graph_of(b, ga.size);
    Graph u;
    u.size = ga.size + gb.size;
    u.initial = ga.initial;
    u.out = ga.out;
    u.out.insert(u.out.end(), gb.out.begin(), gb.out.end());
    b_initial = gb.initial;
    return u;
}

std::vector<int> successors(const Graph& g, int s, const Label& l) {
    std::vector<int> out;
    for (const auto& [lab, to] : g.out[s])
        if (lab == l) out.push_back(to);
    return out;
}

} // namespace

Verdict check_equivalence(const ProtocolSignature& a, const ProtocolSignature& b) {
    int bi = 0;
    Graph g = disjoint_union(a, b, bi);
    int ai = g.initial;

    // rounds[r][s] = block of s after r refinement rounds
    std::vector<std::vector<int>> rounds{std::vector<int>(g.size, 0)};
    std::size_t blocks = 1;
    for (;;) {
        const auto& cur = rounds.back();
        std::map<std::pair<int, std::set<std::pair<Label, int>>>, int> ids;
        std::vector<int> next(g.size);
        for (int s = 0; s < g.size; ++s) {
            std::set<std::pair<Label, int>> sig;
            for (const auto& [l, to] : g.out[s]) sig.emplace(l, cur[to]);
            auto key = std::make_pair(cur[s], std::move(sig));
            auto it = ids.find(key);
            if (it == ids.end()) it = ids.emplace(std::move(key), static_cast<int>(ids.size())).first;
            next[s] = it->second;
        }
        rounds.push_back(std::move(next));
        if (ids.size() == blocks) break;
        blocks = ids.size();
    }
    const auto& final = rounds.back();
    if (final[ai] == final[bi]) return {true, std::nullopt};

    auto level = [&](int p, int q) {
        for (std::size_t r = 0; r < rounds.size(); ++r)
            if (rounds[r][p] != rounds[r][q]) return r;
        return rounds.size();
    };

    Witness w;
    int p = ai, q = bi;
    int side = 0;
    for (;;) {
        std::size_t k = level(p, q);
        const auto& prev = rounds[k - 1];
        // a transition of one side the other cannot match within prev-blocks
        auto unmatched = [&](int x, int y) -> std::optional<std::pair<Label, int>> {
            for (const auto& [l, to] : g.out[x]) {
                bool matched = false;
                for (int y2 : successors(g, y, l)) matched = matched || prev[y2] == prev[to];
                if (!matched) return std::make_pair(l, to);
            }
            return std::nullopt;
        };
        auto mv = unmatched(p, q);
        int from_side = side;
        if (!mv) {
            mv = unmatched(q, p);
            std::swap(p, q);
            from_side = 1 - side;
            side = from_side;
        }
        const auto& [l, to] = *mv;
        auto ys = successors(g, q, l);
        if (ys.empty()) {
            w.label = l;
            w.side = from_side;
            w.missing = true;
            break;
        }
        if (k == 1) { // cannot happen: round 1 separates on enabled labels only
            w.label = l;
            w.side = from_side;
            w.missing = false;
            break;
        }
        w.path.push_back(l);
        p = to;
        q = ys.front();
    }
    return {false, w};
}

Verdict check_conformance(const ProtocolSignature& impl, const ProtocolSignature& spec) {
    Graph gi = graph_of(impl);
    Graph gs = graph_of(spec);

    std::vector<char> reach(gi.size, 0);
    std::deque<int> todo{gi.initial};
    reach[gi.initial] = 1;
    while (!todo.empty()) {
        int s = todo.front();
        todo.pop_front();
        for (const auto& [l, to] : gi.out[s])
            if (!reach[to]) {
                reach[to] = 1;
                todo.push_back(to);
            }
    }

    // removed[p][q] = round at which (p, q) left the relation, 0 while in it
    std::vector<std::vector<int>> removed(gi.size, std::vector<int>(gs.size, 0));
    for (int round = 1;; ++round) {
        bool changed = false;
        for (int p = 0; p < gi.size; ++p) {
            if (!reach[p]) continue;
            for (int q = 0; q < gs.size; ++q) {
                if (removed[p][q]) continue;
                bool ok = true;
                for (const auto& [l, to] : gi.out[p]) {
                    bool matched = false;
                    for (int q2 : successors(gs, q, l))
                        if (!removed[to][q2] || removed[to][q2] == round) matched = true;
                    if (!matched) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) {
                    removed[p][q] = round;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    if (!removed[gi.initial][gs.initial]) return {true, std::nullopt};

    Witness w;
    w.side = 0;
    int p = gi.initial, q = gs.initial;
    for (;;) {
        int k = removed[p][q];
        std::optional<std::pair<Label, int>> mv;
        for (const auto& [l, to] : gi.out[p]) {
            bool matched = false;
            for (int q2 : successors(gs, q, l))
                if (!removed[to][q2] || removed[to][q2] >= k) matched = true;
            if (!matched) {
                mv = std::make_pair(l, to);
                break;
            }
        }
        const auto& [l, to] = *mv;
        auto qs = successors(gs, q, l);
        if (qs.empty()) {
            w.label = l;
            w.missing = true;
            break;
        }
        w.path.push_back(l);
        p = to;
        q = qs.front();
    }
    return {false, w};
}

std::string export_signature(const ProtocolSignature& sig) {
    std::ostringstream out;
    out << "initial " << sig.states[sig.initial] << '\n';
    for (const auto& t : sig.transitions) {
        out << "trans " << sig.states[t.from] << ' ' << t.label.consumed << " {";
        for (std::size_t i = 0; i < t.label.emitted.size(); ++i) out << (i ? "," : "") << t.label.emitted[i];
        out << "} " << (t.label.terminates ? "end" : "live") << ' ' << sig.states[t.to] << '\n';
    }
    return out.str();
}

} // namespace huuzlee::analyzer
