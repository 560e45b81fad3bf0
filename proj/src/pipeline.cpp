#include "lift/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>

#include "lift/text.hpp"

namespace lift {

double DurationSpec::resolve(const TpfLog& log) const {
    switch (kind) {
        case Kind::Absolute:
            return value;
        case Kind::Percent:
            return value / 100.0 * static_cast<double>(log.duration());
        case Kind::Unbounded:
            return kUnboundedGap;
    }
    return kUnboundedGap;
}

DurationSpec parse_duration_spec(const std::string& text) {
    if (text == "inf" || text == "unbounded" || text == "max")
        return DurationSpec::unbounded();
    std::string num = text;
    bool percent = false;
    if (!num.empty() && num.back() == '%') {
        percent = true;
        num.pop_back();
    }
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(num, &used);
    } catch (const std::exception&) {
        throw ParseError("bad duration: " + text);
    }
    if (used != num.size() || !(v >= 0) || !std::isfinite(v))
        throw ParseError("bad duration: " + text);
    return percent ? DurationSpec::percent(v) : DurationSpec::absolute(v);
}

namespace {

std::vector<DeducedBgp> run_unit(std::span<const LogEntry> unit, double gap,
                                 bool self_join_filter, VariableNaming& naming, LiftRun& run) {
    run.ctps = ctp_extraction(unit, gap);
    run.graph = nested_loop_detection(run.ctps, gap);
    std::vector<DeducedBgp> bgps = extract_bgps(run.graph, naming);
    if (self_join_filter) bgps = filter_self_joins(bgps);
    return bgps;
}

// Consecutive windows aligned to the first timestamp; entries are sorted by
// ts, so every slice is one contiguous range.
std::vector<std::span<const LogEntry>> slice_log(const std::vector<LogEntry>& entries,
                                                 double slice_length) {
    const std::span<const LogEntry> all(entries);
    if (entries.empty() || !std::isfinite(slice_length)) return {all};
    std::vector<std::span<const LogEntry>> slices;
    const std::int64_t t0 = entries.front().ts;
    std::size_t begin = 0;
    while (begin < entries.size()) {
        const auto slice_idx = static_cast<std::size_t>(
            static_cast<double>(entries[begin].ts - t0) / slice_length);
        std::size_t end = begin + 1;
        while (end < entries.size() &&
               static_cast<std::size_t>(static_cast<double>(entries[end].ts - t0) /
                                        slice_length) == slice_idx)
            ++end;
        slices.push_back(all.subspan(begin, end - begin));
        begin = end;
    }
    return slices;
}

}  // namespace

LiftRun lift(const TpfLog& log, const LiftConfig& cfg) {
    LiftRun run;
    run.resolved_gap = cfg.gap.resolve(log);
    if (!(run.resolved_gap > 0))
        throw std::invalid_argument("lift: gap must be positive or unbounded");

    std::vector<TpfLog> partitions;  // materialized only when partitioning
    std::vector<const std::vector<LogEntry>*> units;
    if (cfg.per_ip_partition) {
        std::vector<std::string> order;
        std::map<std::string, TpfLog> by_ip;
        for (const LogEntry& entry : log.entries) {
            if (!by_ip.count(entry.ip)) order.push_back(entry.ip);
            by_ip[entry.ip].entries.push_back(entry);
        }
        for (const std::string& ip : order) partitions.push_back(std::move(by_ip[ip]));
        for (const TpfLog& p : partitions) units.push_back(&p.entries);
    } else {
        units.push_back(&log.entries);
    }

    double slice_length = kUnboundedGap;
    if (cfg.slice_length) {
        slice_length = cfg.slice_length->resolve(log);
        if (std::isfinite(slice_length) && slice_length < run.resolved_gap)
            throw std::invalid_argument("lift: slice length must be >= gap");
    }

    run.slice_count = 0;
    VariableNaming naming;
    for (const std::vector<LogEntry>* unit : units) {
        for (std::span<const LogEntry> slice : slice_log(*unit, slice_length)) {
            ++run.slice_count;
            std::vector<DeducedBgp> bgps =
                run_unit(slice, run.resolved_gap, cfg.self_join_filter, naming, run);
            for (DeducedBgp& b : bgps) run.bgps.push_back(std::move(b));
        }
    }
    if (run.slice_count == 0) {
        run.slice_count = 1;
        run.ctps.clear();
        run.graph = DtpGraph{};
    }
    return run;
}

}  // namespace lift
