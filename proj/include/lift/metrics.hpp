#pragma once
// Approximation quality: triple-pattern and join precision/recall of
// deduced BGPs against ground-truth queries, via a maximum-weight 1-1
// assignment between truth and deduced BGPs.

#include <optional>
#include <string>
#include <vector>

#include "lift/bgp_assembly.hpp"
#include "lift/model.hpp"

namespace lift {

struct QueryReport {
    int truth_index = 0;
    std::optional<int> deduced_index;  // assigned deduced BGP, if any
    int truth_patterns = 0;
    int deduced_patterns = 0;
    int matched_patterns = 0;
    int truth_joins = 0;
    int deduced_joins = 0;
    int matched_joins = 0;
};

struct EvalReport {
    // pooled (micro) counts over all patterns and joins
    int truth_patterns = 0;
    int deduced_patterns = 0;
    int matched_patterns = 0;
    int truth_joins = 0;
    int deduced_joins = 0;
    int matched_joins = 0;

    double tp_precision = 1.0;
    double tp_recall = 1.0;
    double join_precision = 1.0;
    double join_recall = 1.0;
    double quality = 1.0;       // (tp_precision + tp_recall) / 2
    double join_quality = 1.0;  // (join_precision + join_recall) / 2

    // per-query macro averages over the same assignment
    double macro_tp_precision = 1.0;
    double macro_tp_recall = 1.0;
    double macro_quality = 1.0;

    std::vector<QueryReport> per_query;
    std::vector<int> unmatched_deduced;  // deduced BGP indices matched to no truth
};

// Assigns each truth BGP the deduced BGP maximizing matched triple patterns
// under a consistent variable renaming (1-1 across the whole assignment;
// ties broken by higher join match, then lower deduced index). Duplicate
// truth queries (equal up to renaming) are collapsed first. Joins are
// counted canonically from shared variables, so chain- and star-shaped
// annotations of the same connection compare equal.
EvalReport evaluate(const std::vector<DeducedBgp>& deduced, const std::vector<Bgp>& truth);

// Property-2 check: evaluates the concurrent run against the union of the
// isolated runs taken as ground truth.
EvalReport concurrency_resistance(const std::vector<std::vector<DeducedBgp>>& isolated,
                                  const std::vector<DeducedBgp>& concurrent);

}  // namespace lift
