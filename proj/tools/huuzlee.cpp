#include <iostream>

#include "CLI11.hpp"
#include "huuzlee/cli.hpp"

using namespace huuzlee;

namespace {

int emit(const cli::Outcome& out) {
    std::cout << out.report;
    std::cerr << out.errors;
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Declarative actor contracts: check, run, replicate, compare, audit"};
    app.require_subcommand(1);

    cli::CheckOptions check;
    auto* c = app.add_subcommand("check", "Parse and validate contract, fragment, ontology, scenario and network files");
    c->add_option("paths", check.paths, "Files to check")->required();
    c->add_flag("--strict", check.strict, "Require every name in a contract to be bound to a matching ontology term");
    c->add_option("--ann", check.ann, "Annotation file (.ann) for --strict");
    c->add_option("--terms", check.terms, "Term registry (.terms) for --strict");
    c->add_option("--actor", check.actor, "Actor name used in annotations (default: file stem)");
    c->add_flag("--json", check.json, "Machine-readable diagnostics");

    cli::RunOptions run;
    auto* r = app.add_subcommand("run", "Run a scenario on a single node");
    r->add_option("scenario", run.scenario, "Scenario file (.scn)")->required();
    r->add_option("--seed", run.seed, "Scheduling seed; 0 keeps creation order")->capture_default_str();
    r->add_option("--max-ticks", run.max_ticks, "Tick budget overriding every RUN directive");
    r->add_option("--trace", run.trace, "Write the JSON-lines trace here");
    r->add_option("--ledger", run.ledger, "Write the hash-chained ledger here");

    cli::SimulateOptions sim;
    auto* s = app.add_subcommand("simulate", "Run a scenario on a replicated, fault-injected network");
    s->add_option("scenario", sim.scenario, "Scenario file (.scn)")->required();
    s->add_option("topology", sim.net, "Network file (.net)")->required();
    s->add_option("--seed", sim.seed, "Network seed overriding the .net file");
    s->add_option("--report", sim.report, "Also write the report here");
    s->add_option("--ledger-dir", sim.ledger_dir, "Write one ledger per replica into this directory");
    s->add_flag("--json", sim.json, "Machine-readable report");

    cli::CompareOptions cmp;
    std::string mode = "equiv";
    auto* k = app.add_subcommand("compare", "Decide protocol equivalence or conformance of two contracts");
    k->add_option("a", cmp.a, "First contract (implementation for conform)")->required();
    k->add_option("b", cmp.b, "Second contract (reference for conform)")->required();
    k->add_option("--mode", mode, "equiv or conform")->check(CLI::IsMember({"equiv", "conform"}))->capture_default_str();
    k->add_option("--with-a", cmp.with_a, "Behaviour fragments composed onto the first contract");
    k->add_option("--with-b", cmp.with_b, "Behaviour fragments composed onto the second contract");
    k->add_flag("--strict-terms", cmp.strict_terms, "Compare bound ontology terms instead of message names");
    k->add_option("--terms", cmp.terms, "Term registry for --strict-terms");
    k->add_option("--ann-a", cmp.ann_a, "Annotations of the first contract");
    k->add_option("--ann-b", cmp.ann_b, "Annotations of the second contract");
    k->add_flag("--json", cmp.json, "Machine-readable verdict");

    cli::LedgerOptions led;
    std::string status;
    auto* l = app.add_subcommand("ledger", "Verify or query a ledger file");
    l->require_subcommand(1);
    auto* lv = l->add_subcommand("verify", "Check the hash chain");
    lv->add_option("file", led.file, "Ledger file")->required();
    lv->add_flag("--json", led.json, "Machine-readable result");
    auto* lq = l->add_subcommand("query", "List entries matching all filters");
    lq->add_option("file", led.file, "Ledger file")->required();
    lq->add_option("--actor", led.filter.actor, "Actor address");
    lq->add_option("--status", status, "ATTEMPTED, LIVE, COMPLETED or FAILED")
        ->check(CLI::IsMember({"ATTEMPTED", "LIVE", "COMPLETED", "FAILED"}));
    lq->add_option("--seq-min", led.filter.seq_min, "Lowest sequence number");
    lq->add_option("--seq-max", led.filter.seq_max, "Highest sequence number");
    lq->add_flag("--json", led.json, "Machine-readable entries");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (*c) return emit(cli::cmd_check(check));
    if (*r) return emit(cli::cmd_run(run));
    if (*s) return emit(cli::cmd_simulate(sim));
    if (*k) {
        cmp.mode = mode == "conform" ? cli::CompareMode::Conformance : cli::CompareMode::Equivalence;
        return emit(cli::cmd_compare(cmp));
    }
    if (*lq) {
        led.action = cli::LedgerOptions::Action::Query;
        if (!status.empty()) led.filter.status = ledger::parse_status(status);
    }
    return emit(cli::cmd_ledger(led));
}
