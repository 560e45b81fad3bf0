#include "lift/client_sim.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "lift/text.hpp"

namespace lift {

namespace {

class Clock {
public:
    explicit Clock(const RequestClock& cfg) : cfg_(cfg) {}

    std::int64_t tick() {
        std::int64_t ts;
        if (pos_ < cfg_.schedule.size()) {
            ts = cfg_.schedule[pos_++];
        } else if (!started_) {
            ts = cfg_.start;
        } else {
            ts = last_ + cfg_.step;
        }
        if (started_ && ts <= last_) ts = last_ + 1;  // keep strictly increasing
        started_ = true;
        last_ = ts;
        return ts;
    }

private:
    const RequestClock& cfg_;
    std::size_t pos_ = 0;
    bool started_ = false;
    std::int64_t last_ = 0;
};

class Execution {
public:
    Execution(const Store& store, const Bgp& query, const ClientConfig& cfg)
        : store_(store), query_(query), cfg_(cfg), clock_(cfg.clock) {
        if (query_.patterns.empty())
            throw std::invalid_argument("execute_query: query has no patterns");
        for (const TriplePattern& p : query_.patterns)
            if (!p.p.is_iri())
                throw std::invalid_argument("execute_query: all predicates must be bound IRIs");
        probe_counts_.assign(query_.patterns.size(), 0);
    }

    ExecutionResult run() {
        if (cfg_.probe_first) {
            for (std::size_t qi = 0; qi < query_.patterns.size(); ++qi) {
                Fragment frag = store_.evaluate_fragment(query_.patterns[qi], 1, cfg_.page_size);
                log_request(query_.patterns[qi], frag);
                probe_counts_[qi] = frag.total_count;
            }
        }
        std::vector<std::size_t> remaining(query_.patterns.size());
        for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
        exec_level({SolutionRow{}}, remaining);
        return std::move(result_);
    }

private:
    // Server-side view of a request: variable names are not on the wire, so
    // the logged pattern and its mappings use positional names.
    void log_request(const TriplePattern& instance, const Fragment& frag) {
        TriplePattern wire = instance;
        if (wire.s.is_variable()) wire.s = Term::variable("s");
        if (wire.o.is_variable()) wire.o = Term::variable("o");
        LogEntry entry;
        entry.ip = cfg_.ip;
        entry.ts = clock_.tick();
        entry.tp = wire;
        for (const Triple& t : frag.triples) {
            if (wire.s.is_variable()) entry.outputs.add("s", t.s);
            if (wire.o.is_variable()) entry.outputs.add("o", t.o);
        }
        result_.log.entries.push_back(std::move(entry));
    }

    std::vector<Triple> request_all_pages(const TriplePattern& instance) {
        std::vector<Triple> all;
        std::size_t page = 1;
        while (true) {
            Fragment frag = store_.evaluate_fragment(instance, page, cfg_.page_size);
            log_request(instance, frag);
            all.insert(all.end(), frag.triples.begin(), frag.triples.end());
            if (page * cfg_.page_size >= frag.total_count) break;
            ++page;
        }
        return all;
    }

    static int bound_positions(const TriplePattern& p, const std::set<std::string>& bound) {
        int n = 0;
        for (const Term* t : {&p.s, &p.p, &p.o})
            if (t->is_constant() || bound.count(t->text)) ++n;
        return n;
    }

    // Most bound positions first; probe cardinality, then query order break
    // ties. Reproduces the reference client's visible schedule: an injected
    // fully-bound pattern is requested before one that still has a variable.
    std::size_t pick_next(const std::vector<std::size_t>& remaining,
                          const std::set<std::string>& bound) const {
        std::size_t best = remaining.front();
        int best_bound = -1;
        for (std::size_t qi : remaining) {
            int b = bound_positions(query_.patterns[qi], bound);
            if (b > best_bound ||
                (b == best_bound && cfg_.probe_first && probe_counts_[qi] < probe_counts_[best])) {
                best = qi;
                best_bound = b;
            }
        }
        return best;
    }

    static TriplePattern substitute(const TriplePattern& p, const SolutionRow& row) {
        TriplePattern out = p;
        for (Term* t : {&out.s, &out.o}) {
            if (!t->is_variable()) continue;
            auto it = row.find(t->text);
            if (it != row.end()) *t = it->second;
        }
        return out;
    }

    // Bindings of the instance's remaining variables from one matched
    // triple; rejects triples violating a repeated variable (the wire
    // request cannot express sameness, the client filters).
    static std::optional<SolutionRow> bind_row(const TriplePattern& instance, const Triple& t) {
        SolutionRow row;
        const std::pair<const Term*, const Term*> slots[] = {
            {&instance.s, &t.s}, {&instance.p, &t.p}, {&instance.o, &t.o}};
        for (const auto& [slot, val] : slots) {
            if (!slot->is_variable()) continue;
            auto it = row.find(slot->text);
            if (it != row.end()) {
                if (!(it->second == *val)) return std::nullopt;
                continue;
            }
            row.emplace(slot->text, *val);
        }
        return row;
    }

    void exec_level(std::vector<SolutionRow> rows, std::vector<std::size_t> remaining) {
        if (rows.empty()) return;
        if (remaining.empty()) {
            for (SolutionRow& r : rows) result_.solutions.push_back(std::move(r));
            return;
        }
        std::set<std::string> bound;
        for (const auto& [var, _] : rows.front()) bound.insert(var);

        const std::size_t qi = pick_next(remaining, bound);
        const TriplePattern& pattern = query_.patterns[qi];
        std::vector<std::size_t> rest;
        for (std::size_t r : remaining)
            if (r != qi) rest.push_back(r);

        std::vector<std::string> shared;
        for (const Term* t : {&pattern.s, &pattern.o})
            if (t->is_variable() && bound.count(t->text) &&
                std::find(shared.begin(), shared.end(), t->text) == shared.end())
                shared.push_back(t->text);
        if (shared.empty() && !bound.empty())
            result_.warnings.push_back("cross product at pattern " + std::to_string(qi + 1) +
                                       ": " + pattern_to_string(pattern));

        // One request cascade per distinct injected tuple, first-seen order.
        std::vector<std::vector<Term>> tuples;
        std::vector<std::vector<SolutionRow>> groups;
        for (SolutionRow& row : rows) {
            std::vector<Term> key;
            for (const std::string& var : shared) key.push_back(row.at(var));
            auto it = std::find(tuples.begin(), tuples.end(), key);
            if (it == tuples.end()) {
                tuples.push_back(key);
                groups.emplace_back();
                it = std::prev(tuples.end());
            }
            groups[static_cast<std::size_t>(it - tuples.begin())].push_back(std::move(row));
        }

        for (std::size_t g = 0; g < groups.size(); ++g) {
            SolutionRow injected;
            for (std::size_t k = 0; k < shared.size(); ++k) injected.emplace(shared[k], tuples[g][k]);
            const TriplePattern instance = substitute(pattern, injected);
            const std::vector<Triple> triples = request_all_pages(instance);
            std::vector<SolutionRow> next_rows;
            for (const Triple& t : triples) {
                std::optional<SolutionRow> binding = bind_row(instance, t);
                if (!binding) continue;
                for (const SolutionRow& base : groups[g]) {
                    SolutionRow merged = base;
                    for (const auto& [var, val] : *binding) merged.emplace(var, val);
                    next_rows.push_back(std::move(merged));
                }
            }
            exec_level(std::move(next_rows), rest);
        }
    }

    const Store& store_;
    const Bgp& query_;
    const ClientConfig& cfg_;
    Clock clock_;
    std::vector<std::size_t> probe_counts_;
    ExecutionResult result_;
};

}  // namespace

ExecutionResult execute_query(const Store& store, const Bgp& query, const ClientConfig& cfg) {
    if (cfg.clock.step <= 0) throw std::invalid_argument("clock step must be positive");
    return Execution(store, query, cfg).run();
}

namespace {

void brute_force_level(const Store& store, const Bgp& query, std::size_t qi, SolutionRow row,
                       std::vector<SolutionRow>& out) {
    if (qi == query.patterns.size()) {
        out.push_back(std::move(row));
        return;
    }
    TriplePattern p = query.patterns[qi];
    for (Term* t : {&p.s, &p.o}) {
        if (!t->is_variable()) continue;
        auto it = row.find(t->text);
        if (it != row.end()) *t = it->second;
    }
    for (const Triple& t : store.match_all(p)) {
        SolutionRow extended = row;
        bool ok = true;
        const std::pair<const Term*, const Term*> slots[] = {{&p.s, &t.s}, {&p.o, &t.o}};
        for (const auto& [slot, val] : slots) {
            if (!slot->is_variable()) continue;
            auto it = extended.find(slot->text);
            if (it != extended.end()) {
                if (!(it->second == *val)) ok = false;
            } else {
                extended.emplace(slot->text, *val);
            }
        }
        if (ok) brute_force_level(store, query, qi + 1, std::move(extended), out);
    }
}

}  // namespace

std::vector<SolutionRow> join_brute_force(const Store& store, const Bgp& query) {
    std::vector<SolutionRow> out;
    brute_force_level(store, query, 0, {}, out);
    return out;
}

TpfLog shuffle_logs(const std::vector<TpfLog>& logs, const ShufflePolicy& policy) {
    struct Source {
        std::size_t log;
        std::size_t index;
        std::int64_t shifted_ts;
    };
    std::vector<Source> order;

    if (policy.mode == ShuffleMode::Offset) {
        for (std::size_t li = 0; li < logs.size(); ++li) {
            const std::int64_t delay =
                li < policy.start_delays.size() ? policy.start_delays[li] : 0;
            for (std::size_t i = 0; i < logs[li].entries.size(); ++i)
                order.push_back({li, i, logs[li].entries[i].ts + delay});
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const Source& a, const Source& b) { return a.shifted_ts < b.shifted_ts; });
    } else {
        std::vector<std::size_t> pos(logs.size(), 0);
        std::size_t remaining = 0;
        for (const TpfLog& log : logs) remaining += log.size();
        std::mt19937_64 rng(policy.seed);
        std::size_t rr = 0;
        while (remaining > 0) {
            std::size_t li;
            if (policy.mode == ShuffleMode::RoundRobin) {
                while (pos[rr % logs.size()] >= logs[rr % logs.size()].size()) ++rr;
                li = rr % logs.size();
                ++rr;
            } else {
                std::vector<std::size_t> live;
                for (std::size_t l = 0; l < logs.size(); ++l)
                    if (pos[l] < logs[l].size()) live.push_back(l);
                li = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
            }
            order.push_back({li, pos[li], 0});
            ++pos[li];
            --remaining;
        }
    }

    TpfLog out;
    if (order.empty()) return out;

    std::int64_t ts;
    if (policy.mode == ShuffleMode::Offset) {
        ts = order.front().shifted_ts;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i > 0) ts = std::max(order[i].shifted_ts, ts + 1);
            LogEntry entry = logs[order[i].log].entries[order[i].index];
            entry.ts = ts;
            out.entries.push_back(std::move(entry));
        }
    } else {
        std::int64_t first = 0;
        bool seen = false;
        for (const TpfLog& log : logs) {
            if (log.empty()) continue;
            if (!seen || log.entries.front().ts < first) first = log.entries.front().ts;
            seen = true;
        }
        ts = seen ? first : 1;
        for (const Source& src : order) {
            LogEntry entry = logs[src.log].entries[src.index];
            entry.ts = ts++;
            out.entries.push_back(std::move(entry));
        }
    }
    return out;
}

}  // namespace lift
