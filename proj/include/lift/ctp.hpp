#pragma once
// Phase 1: aggregate log entries into candidate triple patterns (ctps) that
// plausibly belong to the same inner or outer loop. Entries are templated
// (constants replaced by the reserved subject/object variables) and merged
// into the most recently created compatible ctp: same template, same ip,
// within the gap.

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lift/log_io.hpp"
#include "lift/model.hpp"

namespace lift {

// Gaps are kept as doubles so that a gap can be a fraction of a tick
// (percentage gaps on short logs); +infinity means unbounded.
inline constexpr double kUnboundedGap = std::numeric_limits<double>::infinity();

// One log entry as aggregated into a ctp. Keeps enough provenance to split
// the ctp later: which values the entry injected and what it returned.
struct ConstituentEntry {
    std::size_t log_index = 0;
    std::int64_t ts = 0;
    std::map<std::string, Term> injected;  // reserved variable -> constant
    MappingSet outputs;
};

struct Ctp {
    int id = 0;  // creation order, 1-based
    std::string ip;
    std::int64_t ts_min = 0;
    std::int64_t ts_max = 0;
    TriplePattern tmpl;
    MappingSet outputs;  // union of provenance outputs
    MappingSet inputs;   // union of provenance injected values
    std::vector<ConstituentEntry> provenance;
};

// true iff later.tsMin - earlier.tsMax <= gap (overlaps included).
bool ingap(std::int64_t later_ts_min, std::int64_t earlier_ts_max, double gap);

// The span form lets callers process windows of a large log in place;
// log_index in the provenance is relative to the span.
std::vector<Ctp> ctp_extraction(std::span<const LogEntry> entries, double gap);
std::vector<Ctp> ctp_extraction(const TpfLog& log, double gap);

}  // namespace lift
