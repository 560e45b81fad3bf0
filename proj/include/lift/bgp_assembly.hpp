#pragma once
// Phase 3: connected components of the DTP graph become deduced BGPs with
// fresh variable names, constants restituted where a reserved variable has
// a single unjoined input value, and one join annotation per graph edge.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lift/dtp_graph.hpp"
#include "lift/model.hpp"

namespace lift {

struct DeducedBgp {
    Bgp bgp;
    std::vector<int> support;          // contributing dtp ids, ascending
    std::int64_t window_start = 0;     // timestamp hull over the dtps
    std::int64_t window_end = 0;
};

// Fresh-variable counters; shared across calls when one run processes
// several slices so that names stay unique within one output document.
struct VariableNaming {
    int next_subject = 1;
    int next_object = 1;
};

std::vector<DeducedBgp> extract_bgps(const DtpGraph& graph, VariableNaming& naming);
std::vector<DeducedBgp> extract_bgps(const DtpGraph& graph);

// Post-processing for probe artifacts: drops every BGP whose joins all
// connect two shape-identical patterns (same predicate, variables and
// constants in the same positions); mixed BGPs only lose those join edges,
// re-splitting into components if they become disconnected. Idempotent.
std::vector<DeducedBgp> filter_self_joins(const std::vector<DeducedBgp>& bgps);

struct BgpStats {
    std::size_t bgp_count = 0;
    std::size_t pattern_count = 0;
    std::size_t join_count = 0;
    std::size_t subject_subject = 0;
    std::size_t subject_object = 0;
    std::size_t object_object = 0;
    std::map<std::size_t, std::size_t> size_histogram;      // #patterns -> #bgps
    std::map<std::string, std::size_t> pattern_frequency;   // shape -> count
};

BgpStats bgp_stats(const std::vector<DeducedBgp>& bgps);

}  // namespace lift
