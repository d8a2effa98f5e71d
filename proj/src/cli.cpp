#include "huuzlee/cli.hpp"

#include <fstream>
#include <sstream>

#include "huuzlee/analyzer.hpp"
#include "huuzlee/ontology.hpp"
#include "huuzlee/parser.hpp"
#include "huuzlee/replication.hpp"
#include "huuzlee/scenario.hpp"
#include "huuzlee/validate.hpp"
#include "json.hpp"

namespace huuzlee::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Unreadable or unwritable file.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SourceUnit read(const fs::path& p) {
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) throw IoError("cannot read " + p.string());
    try {
        return read_source(p);
    } catch (const std::runtime_error& e) {
        throw IoError(e.what());
    }
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    out.close();
    if (!out) throw IoError("cannot write " + p.string());
}

std::string str(const Diagnostic& d) {
    std::ostringstream s;
    s << d;
    return s.str();
}

ordered_json json_of(const Diagnostic& d) {
    return {{"file", d.file}, {"line", d.line}, {"column", d.column}, {"code", d.code}, {"message", d.message}};
}

Outcome error(const std::string& msg) { return {2, {}, msg + "\n"}; }

// ---- check --------------------------------------------------------------------

struct CheckState {
    std::vector<Diagnostic> diags;
    std::string errors;
    bool io_failed = false;
};

void check_contract(const fs::path& p, const SourceUnit& src, const CheckOptions& opts, CheckState& st) {
    lang::ActorDefinition def;
    try {
        def = lang::parse_source(src);
    } catch (const SyntaxError& e) {
        st.diags.push_back(e.to_diagnostic(p.string()));
        return;
    }
    auto found = lang::validate(def, p.string());
    st.diags.insert(st.diags.end(), found.begin(), found.end());
    if (!found.empty() || !opts.strict) return;

    std::string actor = opts.actor.value_or(p.stem().string());
    ontology::Registry reg;
    std::vector<ontology::Binding> bindings;
    if (opts.terms) {
        try {
            reg = ontology::load_registry(read(*opts.terms));
        } catch (const SyntaxError& e) {
            st.diags.push_back(e.to_diagnostic(opts.terms->string()));
            return;
        }
    }
    if (opts.ann) {
        try {
            bindings = ontology::load_annotations(read(*opts.ann));
        } catch (const SyntaxError& e) {
            st.diags.push_back(e.to_diagnostic(opts.ann->string()));
            return;
        }
    }
    try {
        auto adef = ontology::annotate(def, actor, bindings, reg);
        auto strict = ontology::check_strict(adef, p.string());
        st.diags.insert(st.diags.end(), strict.begin(), strict.end());
    } catch (const SyntaxError& e) {
        st.diags.push_back(e.to_diagnostic(opts.ann ? opts.ann->string() : p.string()));
    }
}

void check_scenario(const fs::path& p, const SourceUnit& src, CheckState& st) {
    runtime::Scenario sc;
    try {
        sc = runtime::parse_scenario(src, p.parent_path());
    } catch (const SyntaxError& e) {
        st.diags.push_back(e.to_diagnostic(p.string()));
        return;
    }
    runtime::MachineCache cache;
    for (const auto& d : sc.directives) {
        const auto* s = std::get_if<runtime::SpawnDirective>(&d);
        if (!s) continue;
        try {
            cache.get(s->contract, s->fragments);
        } catch (const SyntaxError& e) {
            st.diags.push_back({p.string(), s->pos.line, s->pos.column, e.code(),
                                s->contract.filename().string() + ": " + e.what()});
        } catch (const machine::CompileError& e) {
            st.diags.push_back({p.string(), s->pos.line, s->pos.column, e.code(), e.what()});
        } catch (const std::runtime_error& e) {
            st.diags.push_back({p.string(), s->pos.line, s->pos.column, "UnreadableContract", e.what()});
        }
    }
}

void check_one(const fs::path& p, const CheckOptions& opts, CheckState& st) {
    SourceUnit src;
    try {
        src = read(p);
    } catch (const IoError& e) {
        st.errors += std::string(e.what()) + "\n";
        st.io_failed = true;
        return;
    }
    std::string ext = p.extension().string();
    try {
        if (ext == ".hzl") {
            check_contract(p, src, opts, st);
        } else if (ext == ".bhv") {
            lang::parse_fragment_source(src);
        } else if (ext == ".terms") {
            ontology::load_registry(src);
        } else if (ext == ".ann") {
            ontology::load_annotations(src);
        } else if (ext == ".scn") {
            check_scenario(p, src, st);
        } else if (ext == ".net") {
            auto net = replication::parse_net(src);
            try {
                replication::check_config(net.replicas);
            } catch (const replication::BadConfig& e) {
                st.diags.push_back({p.string(), 1, 1, "BadConfig", e.what()});
            }
        } else {
            st.errors += "unsupported file type: " + p.string() + "\n";
            st.io_failed = true;
        }
    } catch (const SyntaxError& e) {
        st.diags.push_back(e.to_diagnostic(p.string()));
    } catch (const IoError& e) {
        st.errors += std::string(e.what()) + "\n";
        st.io_failed = true;
    }
}

// ---- run / simulate -------------------------------------------------------------

runtime::Scenario scenario(const fs::path& p) {
    auto src = read(p);
    return runtime::parse_scenario(src, p.parent_path());
}

// Runs `body`, mapping input problems to exit code 2.
template <typename F>
Outcome guarded(F&& body) {
    try {
        return body();
    } catch (const IoError& e) {
        return error(e.what());
    } catch (const SyntaxError& e) {
        std::ostringstream s;
        s << "line " << e.position().line << ":" << e.position().column << ": " << e.code() << ": " << e.what();
        return error(s.str());
    } catch (const machine::CompileError& e) {
        return error(e.code() + ": " + e.what());
    } catch (const replication::BadConfig& e) {
        return error(std::string("BadConfig: ") + e.what());
    } catch (const runtime::AddressInUse& e) {
        return error(e.what());
    } catch (const analyzer::TooLarge& e) {
        return error(std::string("TooLarge: ") + e.what());
    } catch (const std::invalid_argument& e) {
        return error(e.what());
    } catch (const std::runtime_error& e) {
        return error(e.what());
    }
}

ordered_json json_report(const replication::ReplicationReport& r) {
    ordered_json j;
    j["n"] = r.n;
    j["f"] = r.f;
    j["seed"] = r.seed;
    j["requests"] = r.requests;
    j["ticks"] = r.ticks;
    j["replicas"] = ordered_json::array();
    for (const auto& rep : r.replicas) {
        ordered_json x;
        x["node"] = rep.node;
        x["role"] = rep.role;
        if (rep.fault) {
            x["fault"] = std::string(replication::to_string(rep.fault->kind));
            if (rep.fault->kind == replication::FaultKind::Delay) x["delay"] = rep.fault->ticks;
        } else {
            x["fault"] = nullptr;
        }
        x["divergence"] = rep.divergence;
        x["flagged"] = rep.flagged;
        x["discarded"] = rep.discarded_auth;
        x["digest"] = rep.final_digest;
        x["ledger_entries"] = rep.ledger.size();
        x["executed"] = ordered_json::array();
        for (const auto& ex : rep.executed)
            x["executed"].push_back({{"seq", ex.seq},
                                     {"request", ex.request_id},
                                     {"request_digest", ex.request_digest},
                                     {"state", ex.state_digest},
                                     {"signers", ex.certificate.signers}});
        j["replicas"].push_back(std::move(x));
    }
    j["verdict"] = {{"liveness", r.liveness},
                    {"safe", r.safe()},
                    {"agreement", r.agreement},
                    {"total_order", r.total_order},
                    {"ledgers_consistent", r.ledgers_consistent},
                    {"divergence", r.honest_divergence},
                    {"assumption_breach", r.assumption_breach},
                    {"flagged", r.flagged}};
    j["findings"] = r.findings;
    return j;
}

// ---- compare --------------------------------------------------------------------

analyzer::ProtocolSignature signature(const fs::path& contract, const std::vector<fs::path>& fragments, bool strict,
                                      const ontology::Registry& reg, const std::optional<fs::path>& ann) {
    auto def = lang::parse_source(read(contract));
    auto diags = lang::validate(def, contract.string());
    if (!diags.empty()) throw SyntaxError(diags.front().code, {diags.front().line, diags.front().column},
                                          contract.string() + ": " + diags.front().message);
    auto m = machine::compile(def);
    std::vector<lang::FragmentDecl> frags;
    for (const auto& f : fragments) frags.push_back(lang::parse_fragment_source(read(f)));
    if (!frags.empty()) m = machine::compose_behaviors(m, frags);
    auto sig = analyzer::extract_protocol(m);
    if (!strict) return sig;
    std::vector<ontology::Binding> bindings;
    if (ann) bindings = ontology::load_annotations(read(*ann));
    return analyzer::relabel_terms(sig, ontology::annotate(def, contract.stem().string(), bindings, reg));
}

ordered_json json_label(const analyzer::Label& l) {
    return {{"consumed", l.consumed}, {"emitted", l.emitted}, {"terminates", l.terminates}};
}

ordered_json json_of(const ledger::LedgerEntry& e) {
    return {{"index", e.index},
            {"prev", e.prev_hash},
            {"seq", e.seq},
            {"actor", e.actor},
            {"msg", e.message_type},
            {"payload", e.payload_digest},
            {"status", std::string(ledger::to_string(e.status))},
            {"reason", e.reason},
            {"state", e.state_digest},
            {"hash", e.entry_hash}};
}

} // namespace

Outcome cmd_check(const CheckOptions& opts) {
    if (opts.paths.empty()) return error("check: no files given");
    CheckState st;
    for (const auto& p : opts.paths) check_one(p, opts, st);
    Outcome out;
    if (opts.json) {
        ordered_json j = ordered_json::array();
        for (const auto& d : st.diags) j.push_back(json_of(d));
        out.report = j.dump() + "\n";
    } else {
        for (const auto& d : st.diags) out.report += str(d) + "\n";
        out.report += "checked " + std::to_string(opts.paths.size()) + " file(s), " +
                      std::to_string(st.diags.size()) + " diagnostic(s)\n";
    }
    out.errors = st.errors;
    out.exit_code = st.io_failed ? 2 : st.diags.empty() ? 0 : 1;
    return out;
}

Outcome cmd_run(const RunOptions& opts) {
    return guarded([&]() -> Outcome {
        auto sc = scenario(opts.scenario);
        runtime::World world(opts.seed);
        ledger::Ledger led;
        ledger::Recorder rec(led);
        world.set_observer(&rec);
        runtime::MachineCache cache;
        runtime::RunOptions ro;
        ro.max_ticks = opts.max_ticks;
        bool ok = runtime::run_scenario(world, sc, cache, ro);
        world.set_observer(nullptr);

        if (opts.trace) write_file(*opts.trace, runtime::export_trace(world.trace()));
        if (opts.ledger) write_file(*opts.ledger, led.text());

        std::ostringstream r;
        r << "ticks=" << world.trace().ticks << " steps=" << world.consumed() << " dead_letters=" << world.dead_letters()
          << " pending=" << world.pending() << " ledger_entries=" << led.size() << '\n';
        for (const auto& a : world.actors())
            r << "actor " << a.address.name << " state=" << a.machine->states[a.state].name
              << " terminated=" << (a.terminated ? "yes" : "no") << '\n';
        r << "digest=" << world.digest() << '\n';
        Outcome out;
        if (!ok) {
            r << "MaxTicksExceeded\n";
            out.exit_code = 1;
        }
        out.report = r.str();
        return out;
    });
}

Outcome cmd_simulate(const SimulateOptions& opts) {
    return guarded([&]() -> Outcome {
        auto sc = scenario(opts.scenario);
        auto file = replication::load_net(opts.net);
        if (opts.seed) file.net.seed = *opts.seed;
        runtime::World world;
        runtime::MachineCache cache;
        auto requests = runtime::spawn_all(world, sc, cache);
        replication::ReplicaSet rs(world, file.replicas);
        for (auto& env : requests) rs.submit(env);
        auto rep = rs.run(file.net, file.faults);

        Outcome out;
        out.report = opts.json ? json_report(rep).dump(2) + "\n" : replication::export_report(rep);
        if (opts.report) write_file(*opts.report, out.report);
        if (opts.ledger_dir) {
            std::error_code ec;
            fs::create_directories(*opts.ledger_dir, ec);
            for (const auto& r : rep.replicas)
                write_file(*opts.ledger_dir / ("node-" + std::to_string(r.node) + ".ledger"), r.ledger.text());
        }
        out.exit_code = rep.liveness && rep.safe() ? 0 : 1;
        return out;
    });
}

Outcome cmd_compare(const CompareOptions& opts) {
    return guarded([&]() -> Outcome {
        ontology::Registry reg;
        if (opts.strict_terms) {
            if (!opts.terms) return error("compare: --strict-terms needs --terms");
            reg = ontology::load_registry(read(*opts.terms));
        }
        auto a = signature(opts.a, opts.with_a, opts.strict_terms, reg, opts.ann_a);
        auto b = signature(opts.b, opts.with_b, opts.strict_terms, reg, opts.ann_b);
        bool equiv = opts.mode == CompareMode::Equivalence;
        auto v = equiv ? analyzer::check_equivalence(a, b) : analyzer::check_conformance(a, b);

        Outcome out;
        out.exit_code = v.holds ? 0 : 1;
        std::string verdict = equiv ? (v.holds ? "equivalent" : "not equivalent")
                                    : (v.holds ? "conforms" : "does not conform");
        if (opts.json) {
            ordered_json j;
            j["mode"] = equiv ? "equiv" : "conform";
            j["a"] = opts.a.string();
            j["b"] = opts.b.string();
            j["holds"] = v.holds;
            if (v.witness) {
                ordered_json path = ordered_json::array();
                for (const auto& l : v.witness->path) path.push_back(json_label(l));
                j["witness"] = {{"path", path},
                                {"label", json_label(v.witness->label)},
                                {"side", v.witness->side == 0 ? "a" : "b"},
                                {"missing", v.witness->missing}};
            }
            out.report = j.dump(2) + "\n";
        } else {
            out.report = "mode=" + std::string(equiv ? "equiv" : "conform") + " a=" + opts.a.string() +
                         " b=" + opts.b.string() + "\n" + verdict + "\n";
            if (v.witness) out.report += "witness: " + analyzer::to_string(*v.witness) + "\n";
        }
        return out;
    });
}

Outcome cmd_ledger(const LedgerOptions& opts) {
    return guarded([&]() -> Outcome {
        auto text = read(opts.file).text;
        Outcome out;
        if (opts.action == LedgerOptions::Action::Verify) {
            auto v = ledger::verify_chain(text);
            out.exit_code = v.ok ? 0 : 1;
            if (opts.json) {
                ordered_json j{{"ok", v.ok}, {"entries", v.entries}};
                if (v.first_bad) j["first_bad"] = *v.first_bad;
                if (!v.ok) j["problem"] = v.problem;
                out.report = j.dump() + "\n";
            } else if (v.ok) {
                out.report = "ok entries=" + std::to_string(v.entries) + "\n";
            } else {
                out.report = "tampered first_bad=" + std::to_string(v.first_bad.value_or(0)) +
                             " verified=" + std::to_string(v.entries) + " problem=" + v.problem + "\n";
            }
            return out;
        }
        auto rows = ledger::query(ledger::parse_ledger(text), opts.filter);
        if (opts.json) {
            ordered_json j = ordered_json::array();
            for (const auto& e : rows) j.push_back(json_of(e));
            out.report = j.dump() + "\n";
        } else {
            for (const auto& e : rows) out.report += ledger::entry_line(e) + "\n";
        }
        return out;
    });
}

} // namespace huuzlee::cli
