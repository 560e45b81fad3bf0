#pragma once
// Orchestrates the three phases: ctp extraction -> nested-loop detection ->
// BGP extraction, optionally per log slice and per client ip.

#include <optional>
#include <string>
#include <vector>

#include "lift/bgp_assembly.hpp"
#include "lift/ctp.hpp"
#include "lift/dtp_graph.hpp"
#include "lift/log_io.hpp"

namespace lift {

// Gap or slice length: an absolute duration in timestamp units, a
// percentage of the log duration, or unbounded.
struct DurationSpec {
    enum class Kind { Absolute, Percent, Unbounded } kind = Kind::Unbounded;
    double value = 0;

    static DurationSpec absolute(double v) { return {Kind::Absolute, v}; }
    static DurationSpec percent(double v) { return {Kind::Percent, v}; }
    static DurationSpec unbounded() { return {Kind::Unbounded, 0}; }

    double resolve(const TpfLog& log) const;
};

// Parses "8", "2.5", "10%", or "inf"/"unbounded".
DurationSpec parse_duration_spec(const std::string& text);

struct LiftConfig {
    DurationSpec gap = DurationSpec::unbounded();
    std::optional<DurationSpec> slice_length;  // process consecutive slices
    bool self_join_filter = false;
    bool per_ip_partition = false;
};

struct LiftRun {
    std::vector<DeducedBgp> bgps;
    double resolved_gap = kUnboundedGap;
    // Intermediate state of the last processed unit (the whole log when
    // unsliced and not partitioned), for the debug dumps.
    std::vector<Ctp> ctps;
    DtpGraph graph;
    std::size_t slice_count = 1;
};

LiftRun lift(const TpfLog& log, const LiftConfig& cfg);

}  // namespace lift
