#pragma once
// Phase 2: nested-loop join detection. Relates input-mappings of later ctps
// to output-mappings of earlier ones, splitting over-aggregated ctps so
// every edge is a full inclusion, and produces the edge-labelled DTP graph
// whose connected components become the deduced BGPs.

#include <string>
#include <utility>
#include <vector>

#include "lift/ctp.hpp"

namespace lift {

// A deduced triple pattern: a ctp, possibly a fragment of one.
struct Dtp : Ctp {
    int origin_ctp_id = 0;  // id in the input CTP list; = id when never split
};

struct DtpEdge {
    int parent = 0;             // dtp id, always < child
    int child = 0;
    std::string parent_var;     // variable of parent's outputs
    std::string child_var;      // variable of child's inputs
    friend bool operator==(const DtpEdge&, const DtpEdge&) = default;
};

struct DtpGraph {
    std::vector<Dtp> nodes;                       // ids are 1..nodes.size()
    std::vector<DtpEdge> edges;
    std::vector<std::pair<int, int>> splits;      // (origin ctp id, dtp id)

    const Dtp& node(int id) const { return nodes[static_cast<std::size_t>(id - 1)]; }
};

// Partitions target's constituent entries by whether their injected value
// for target_var lies in source's outputs for source_var: matching entries
// form the returned product, target is shrunk in place to the remainder.
// Timestamps, outputs and inputs of both sides are recomputed from their
// own entries. Requires a strict partial intersection; full inclusion or an
// empty intersection is a contract violation.
Dtp split(Ctp& target, const std::string& target_var, const Ctp& source,
          const std::string& source_var);

// Builds the DTP graph from a CTP list. Deterministic: node ids and the
// edge set are a pure function of (ctps, gap).
DtpGraph nested_loop_detection(std::vector<Ctp> ctps, double gap);

}  // namespace lift
