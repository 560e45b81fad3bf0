#pragma once
// Serialization of run results: the canonical JSON document of deduced
// BGPs, the XML alternative, evaluation reports, and the debug tables for
// the intermediate CTP list and DTP graph. Output is byte-stable across
// runs for identical inputs.

#include <string>
#include <vector>

#include "lift/bgp_assembly.hpp"
#include "lift/ctp.hpp"
#include "lift/dtp_graph.hpp"
#include "lift/metrics.hpp"
#include "lift/pipeline.hpp"

namespace lift {

struct RunMeta {
    std::string input;
    std::string gap;      // as given on the command line
    double resolved_gap = kUnboundedGap;
    std::size_t entries = 0;
    std::size_t rejected = 0;
    std::size_t slices = 1;
    bool self_join_filter = false;
    bool per_ip = false;
};

std::string bgps_to_json(const std::vector<DeducedBgp>& bgps, const RunMeta& meta);
std::string bgps_to_xml(const std::vector<DeducedBgp>& bgps, const RunMeta& meta);

// Reads a canonical JSON document back (for `eval`/`stats` over saved runs).
std::vector<DeducedBgp> bgps_from_json(const std::string& text);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

struct SweepRow {
    std::string gap;
    EvalReport report;
};

std::string sweep_to_table(const std::vector<SweepRow>& rows);
std::string sweep_to_json(const std::vector<SweepRow>& rows);

std::string stats_to_json(const BgpStats& stats);
std::string stats_to_table(const BgpStats& stats);

// Debug tables mirroring the intermediate state: one row per ctp / dtp.
std::string ctps_to_table(const std::vector<Ctp>& ctps);
std::string dtp_graph_to_table(const DtpGraph& graph);

}  // namespace lift
