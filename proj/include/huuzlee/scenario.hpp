#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "huuzlee/runtime.hpp"
#include "huuzlee/source.hpp"

namespace huuzlee::runtime {

/// `SPAWN addr contract.hzl [WITH a.bhv ...] [INIT {record.field: value, ...}]`
struct SpawnDirective {
    Address address;
    std::filesystem::path contract;
    std::vector<std::filesystem::path> fragments;
    Payload init;
    Position pos;
};

/// `SEND from to msgType {field: value, ...}`
struct SendDirective {
    Envelope envelope;
    Position pos;
};

/// `RUN maxTicks`
struct RunDirective {
    std::uint64_t max_ticks = 0;
    Position pos;
};

using Directive = std::variant<SpawnDirective, SendDirective, RunDirective>;

struct Scenario {
    std::vector<Directive> directives;
};

/// One directive per line; `#` or `//` start comment lines. Values: `?`
/// unbound, `"text"` string, a decimal number, or a bare name (address).
/// Relative paths resolve against `base_dir`. Throws SyntaxError with code
/// ScenarioError.
Scenario parse_scenario(const SourceUnit& src, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Parses `{key: value, ...}` as used by SEND and INIT.
Payload parse_payload(std::string_view text, Position pos = {});

/// Compiles each (contract, fragments) combination once.
class MachineCache {
public:
    /// Throws SyntaxError, machine::CompileError, or std::runtime_error
    /// (unreadable file).
    std::shared_ptr<const CompiledMachine> get(const std::filesystem::path& contract,
                                               const std::vector<std::filesystem::path>& fragments);

private:
    std::map<std::vector<std::string>, std::shared_ptr<const CompiledMachine>> cache_;
};

struct RunOptions {
    std::optional<std::uint64_t> max_ticks; // overrides every RUN directive
    std::uint64_t default_max_ticks = 10000;
};

/// Executes the directives in order. Mail still pending after the last
/// directive is run with the default (or overriding) budget. Returns false
/// when any run was cut off.
bool run_scenario(World& world, const Scenario& sc, MachineCache& cache, const RunOptions& opts = {});

/// Replicated reading of a scenario: performs every SPAWN, runs the world
/// until bootstrap mail settles and returns the SEND envelopes in order.
/// RUN directives are ignored; each request runs to quiescence once ordered.
std::vector<Envelope> spawn_all(World& world, const Scenario& sc, MachineCache& cache,
                                std::uint64_t max_ticks = 10000);

} // namespace huuzlee::runtime
