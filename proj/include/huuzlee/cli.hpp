#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "huuzlee/ledger.hpp"

/// Subcommand implementations behind the `huuzlee` executable. Each returns
/// its exit code and report instead of printing, so tests can run them
/// in-process.
///
/// Exit codes:
///   0  success (no findings, quiescent, safe and live, equivalent, intact)
///   1  findings (diagnostics, tick limit hit, liveness loss or divergence,
///      not equivalent, tampered ledger)
///   2  the command could not do its job: unreadable file, malformed
///      scenario or network file, invalid configuration
///
/// `check` reports syntax and validation problems in the files it is asked
/// to check as findings (1); every other subcommand treats a malformed input
/// as an error (2).
namespace huuzlee::cli {

struct Outcome {
    int exit_code = 0;
    std::string report; // stdout
    std::string errors; // stderr
};

struct CheckOptions {
    std::vector<std::filesystem::path> paths; // .hzl .bhv .ann .terms .scn .net
    bool strict = false;                      // ontology coverage for .hzl files
    std::optional<std::filesystem::path> ann;
    std::optional<std::filesystem::path> terms;
    std::optional<std::string> actor; // defaults to each file's stem
    bool json = false;
};

Outcome cmd_check(const CheckOptions& opts);

struct RunOptions {
    std::filesystem::path scenario;
    std::uint64_t seed = 0; // 0: creation order
    std::optional<std::uint64_t> max_ticks;
    std::optional<std::filesystem::path> trace;
    std::optional<std::filesystem::path> ledger;
};

Outcome cmd_run(const RunOptions& opts);

struct SimulateOptions {
    std::filesystem::path scenario;
    std::filesystem::path net;
    std::optional<std::uint64_t> seed; // overrides the .net seed
    std::optional<std::filesystem::path> report;
    std::optional<std::filesystem::path> ledger_dir; // node-<id>.ledger per replica
    bool json = false;
};

Outcome cmd_simulate(const SimulateOptions& opts);

enum class CompareMode { Equivalence, Conformance };

struct CompareOptions {
    std::filesystem::path a; // conformance: implementation
    std::filesystem::path b; // conformance: reference
    CompareMode mode = CompareMode::Equivalence;
    std::vector<std::filesystem::path> with_a; // behaviour fragments
    std::vector<std::filesystem::path> with_b;
    bool strict_terms = false; // compare ontology terms instead of message names
    std::optional<std::filesystem::path> terms;
    std::optional<std::filesystem::path> ann_a;
    std::optional<std::filesystem::path> ann_b;
    bool json = false;
};

Outcome cmd_compare(const CompareOptions& opts);

struct LedgerOptions {
    enum class Action { Verify, Query };
    Action action = Action::Verify;
    std::filesystem::path file;
    ledger::Filter filter; // query only
    bool json = false;
};

Outcome cmd_ledger(const LedgerOptions& opts);

} // namespace huuzlee::cli
