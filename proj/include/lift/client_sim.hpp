#pragma once
// Simulated TPF client. Executes a ground-truth BGP against a Store with
// client-side nested-loop joins, emitting the server log the execution
// would produce, and interleaves several logs to simulate concurrency.
//
// Requests are logged the way a TPF server sees them: variable names are
// not transmitted, so logged patterns carry positional names (?s / ?o) and
// the output mappings bind those names. Probe requests (used for join
// ordering) are logged identically to regular requests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lift/log_io.hpp"
#include "lift/model.hpp"
#include "lift/store.hpp"

namespace lift {

// Request timestamps: an arithmetic clock, optionally overridden by an
// explicit schedule (fixture tests replay published traces with it). Once
// a schedule runs out the clock continues arithmetically. Timestamps are
// strictly increasing either way.
struct RequestClock {
    std::int64_t start = 1;
    std::int64_t step = 1;
    std::vector<std::int64_t> schedule;
};

struct ClientConfig {
    std::string ip = "172.16.0.1";
    bool probe_first = false;  // issue a page-1 request per pattern up front
    std::size_t page_size = kDefaultPageSize;
    RequestClock clock;
};

// One solution row: variable name -> constant.
using SolutionRow = std::map<std::string, Term>;

struct ExecutionResult {
    std::vector<SolutionRow> solutions;
    TpfLog log;
    std::vector<std::string> warnings;  // e.g. cross products
};

// Runs the query as a nested loop: bindings from already-solved patterns
// are injected as constants into the next pattern, one request cascade per
// distinct injected tuple. The next pattern is the one with the most bound
// positions (probe cardinality, then query order, break ties). There is no
// client cache: identical instance requests are re-issued and re-logged.
ExecutionResult execute_query(const Store& store, const Bgp& query, const ClientConfig& cfg);

// Brute-force join over the store, independent of the nested-loop path;
// used as the solutions oracle in tests.
std::vector<SolutionRow> join_brute_force(const Store& store, const Bgp& query);

enum class ShuffleMode { RoundRobin, RandomInterleave, Offset };

struct ShufflePolicy {
    ShuffleMode mode = ShuffleMode::RoundRobin;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> start_delays;  // Offset mode, one per log
};

// Interleaves the input logs into one: every entry exactly once, relative
// order within each source preserved, output timestamps strictly
// increasing, deterministic given the seed.
TpfLog shuffle_logs(const std::vector<TpfLog>& logs, const ShufflePolicy& policy);

}  // namespace lift
