#pragma once
// TPF server log parsing and serialization. One record per line:
//
//   <ip> <ts> <s> <p> <o> [mu ?var v1 v2 ... [?var2 w1 ...]]
//
// Terms use the shared token grammar (text.hpp). The mu section lists the
// output mappings: a `?var` token starts a binding group, following value
// tokens belong to it. Requests with empty output mappings omit `mu`.
// `#` begins a comment line. parse(write(log)) reproduces log bit-exactly.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "lift/model.hpp"

namespace lift {

// One TPF request/response trace.
struct LogEntry {
    std::string ip;
    std::int64_t ts = 0;
    TriplePattern tp;
    MappingSet outputs;  // binds only variables occurring in tp

    friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

struct TpfLog {
    std::vector<LogEntry> entries;  // non-decreasing ts

    bool empty() const { return entries.size() == 0; }
    std::size_t size() const { return entries.size(); }
    // Duration from first to last timestamp; 0 for logs of 0 or 1 entries.
    std::int64_t duration() const;
};

struct LogReject {
    std::size_t line_no = 0;
    std::string reason;
};

struct ParsedLog {
    TpfLog log;
    std::vector<LogReject> rejects;
};

// Every well-formed line becomes an entry; entries are re-sorted stably by
// ts. Malformed or out-of-scope lines (variable predicate, reserved
// variable names, mu binding a variable absent from tp) are reported as
// rejects, never dropped silently. Parse is total: no input crashes it.
ParsedLog parse_log(std::istream& in);
ParsedLog parse_log_file(const std::string& path);

void write_log(const TpfLog& log, std::ostream& out);
void write_log_file(const TpfLog& log, const std::string& path);

std::string entry_to_string(const LogEntry& entry);

}  // namespace lift
