#include "lift/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace lift {

namespace {

// Exact minimum-cost assignment (Hungarian with potentials) on a square
// cost matrix; returns row -> column. Used with negated composite weights
// to maximize.
std::vector<int> min_cost_assignment(const std::vector<std::vector<long long>>& cost) {
    const int n = static_cast<int>(cost.size());
    const long long inf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(n + 1), v(n + 1);
    std::vector<int> p(n + 1), way(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            int j1 = 0;
            long long delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

double ratio(int num, int den) { return den == 0 ? 1.0 : static_cast<double>(num) / den; }

int canonical_join_count(const Bgp& bgp) {
    return static_cast<int>(Bgp::derive_joins(bgp.patterns).size());
}

}  // namespace

EvalReport evaluate(const std::vector<DeducedBgp>& deduced, const std::vector<Bgp>& truth_in) {
    // Collapse duplicate truth queries (equal up to renaming): repeated
    // executions of one query deduce one BGP, so one copy is the target.
    std::vector<Bgp> truth;
    for (const Bgp& t : truth_in) {
        bool dup = false;
        for (const Bgp& kept : truth)
            if (patterns_equal_up_to_renaming(kept, t)) {
                dup = true;
                break;
            }
        if (!dup) truth.push_back(t);
    }

    const int nt = static_cast<int>(truth.size());
    const int nd = static_cast<int>(deduced.size());

    EvalReport report;
    for (const Bgp& t : truth) {
        report.truth_patterns += static_cast<int>(t.patterns.size());
        report.truth_joins += canonical_join_count(t);
    }
    for (const DeducedBgp& d : deduced) {
        report.deduced_patterns += static_cast<int>(d.bgp.patterns.size());
        report.deduced_joins += canonical_join_count(d.bgp);
    }

    // Pairwise best-renaming scores, then a maximum-weight 1-1 assignment.
    // Weight is lexicographic: matched patterns, matched joins, lower
    // deduced index.
    std::vector<std::vector<MatchScore>> score(static_cast<std::size_t>(nt));
    long long max_join = 1;
    for (int i = 0; i < nt; ++i) {
        score[i].resize(static_cast<std::size_t>(nd));
        for (int j = 0; j < nd; ++j) {
            score[i][j] = best_pattern_match(deduced[static_cast<std::size_t>(j)].bgp,
                                             truth[static_cast<std::size_t>(i)]);
            max_join = std::max(max_join, static_cast<long long>(score[i][j].join_matched));
        }
    }
    const int n = std::max(nt, nd);
    std::vector<int> assigned_deduced(static_cast<std::size_t>(nt), -1);
    if (n > 0 && nd > 0 && nt > 0) {
        const long long idx_unit = nd + 1;
        const long long join_unit = idx_unit * (n + 1);
        const long long tp_unit = join_unit * (max_join + 1) * (n + 1);
        std::vector<std::vector<long long>> cost(static_cast<std::size_t>(n),
                                                 std::vector<long long>(static_cast<std::size_t>(n), 0));
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < nd; ++j) {
                const MatchScore& s = score[i][j];
                if (s.tp_matched == 0) continue;  // no better than unmatched
                const long long w =
                    tp_unit * s.tp_matched + join_unit * s.join_matched + (nd - j);
                cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -w;
            }
        const std::vector<int> row_to_col = min_cost_assignment(cost);
        for (int i = 0; i < nt; ++i) {
            const int j = row_to_col[static_cast<std::size_t>(i)];
            if (j >= 0 && j < nd && score[i][j].tp_matched > 0) assigned_deduced[i] = j;
        }
    }

    std::vector<bool> deduced_used(static_cast<std::size_t>(nd), false);
    double macro_p = 0, macro_r = 0, macro_q = 0;
    for (int i = 0; i < nt; ++i) {
        QueryReport q;
        q.truth_index = i;
        q.truth_patterns = static_cast<int>(truth[static_cast<std::size_t>(i)].patterns.size());
        q.truth_joins = canonical_join_count(truth[static_cast<std::size_t>(i)]);
        const int j = assigned_deduced[i];
        if (j >= 0) {
            deduced_used[static_cast<std::size_t>(j)] = true;
            q.deduced_index = j;
            q.deduced_patterns =
                static_cast<int>(deduced[static_cast<std::size_t>(j)].bgp.patterns.size());
            q.deduced_joins = canonical_join_count(deduced[static_cast<std::size_t>(j)].bgp);
            q.matched_patterns = score[i][j].tp_matched;
            q.matched_joins = score[i][j].join_matched;
        }
        report.matched_patterns += q.matched_patterns;
        report.matched_joins += q.matched_joins;
        const double p = ratio(q.matched_patterns, q.deduced_patterns);
        const double r = ratio(q.matched_patterns, q.truth_patterns);
        macro_p += p;
        macro_r += j >= 0 ? r : 0.0;
        macro_q += (p + (j >= 0 ? r : 0.0)) / 2.0;
        report.per_query.push_back(q);
    }
    for (int j = 0; j < nd; ++j)
        if (!deduced_used[static_cast<std::size_t>(j)]) report.unmatched_deduced.push_back(j);

    report.tp_precision = ratio(report.matched_patterns, report.deduced_patterns);
    report.tp_recall = ratio(report.matched_patterns, report.truth_patterns);
    report.join_precision = ratio(report.matched_joins, report.deduced_joins);
    report.join_recall = ratio(report.matched_joins, report.truth_joins);
    report.quality = (report.tp_precision + report.tp_recall) / 2.0;
    report.join_quality = (report.join_precision + report.join_recall) / 2.0;
    if (nt > 0) {
        report.macro_tp_precision = macro_p / nt;
        report.macro_tp_recall = macro_r / nt;
        report.macro_quality = macro_q / nt;
    }
    return report;
}

EvalReport concurrency_resistance(const std::vector<std::vector<DeducedBgp>>& isolated,
                                  const std::vector<DeducedBgp>& concurrent) {
    std::vector<Bgp> truth;
    for (const std::vector<DeducedBgp>& run : isolated)
        for (const DeducedBgp& d : run) truth.push_back(d.bgp);
    return evaluate(concurrent, truth);
}

}  // namespace lift
