#include "lift/ctp.hpp"

#include <stdexcept>
#include <unordered_map>

namespace lift {

bool ingap(std::int64_t later_ts_min, std::int64_t earlier_ts_max, double gap) {
    return static_cast<double>(later_ts_min - earlier_ts_max) <= gap;
}

namespace {

struct BucketKey {
    std::string ip;
    TriplePattern tmpl;
    friend bool operator==(const BucketKey&, const BucketKey&) = default;
};

struct BucketKeyHash {
    std::size_t operator()(const BucketKey& k) const {
        std::size_t h = std::hash<std::string>{}(k.ip);
        h ^= TriplePatternHash{}(k.tmpl) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

std::vector<Ctp> ctp_extraction(std::span<const LogEntry> entries, double gap) {
    if (!(gap >= 0)) throw std::invalid_argument("ctp_extraction: gap must be >= 0");
    std::vector<Ctp> ctps;
    // Only the newest ctp of an (ip, template) bucket can still be in the
    // gap window: older ones stopped growing when the newer was created.
    std::unordered_map<BucketKey, std::size_t, BucketKeyHash> newest;

    for (std::size_t idx = 0; idx < entries.size(); ++idx) {
        const LogEntry& entry = entries[idx];
        TemplateResult templated = template_of(entry.tp);

        ConstituentEntry item;
        item.log_index = idx;
        item.ts = entry.ts;
        item.outputs = entry.outputs;
        for (const auto& [var, values] : templated.seed_inputs.bindings())
            item.injected.emplace(var, values.values().front());

        const BucketKey key{entry.ip, templated.tmpl};
        auto it = newest.find(key);
        if (it != newest.end() && ingap(entry.ts, ctps[it->second].ts_max, gap)) {
            Ctp& target = ctps[it->second];
            target.ts_max = entry.ts;  // the lower timestamp never moves
            target.outputs.merge(entry.outputs);
            target.inputs.merge(templated.seed_inputs);
            target.provenance.push_back(std::move(item));
            continue;
        }
        Ctp fresh;
        fresh.id = static_cast<int>(ctps.size()) + 1;
        fresh.ip = entry.ip;
        fresh.ts_min = entry.ts;
        fresh.ts_max = entry.ts;
        fresh.tmpl = templated.tmpl;
        fresh.outputs = entry.outputs;
        fresh.inputs = templated.seed_inputs;
        fresh.provenance.push_back(std::move(item));
        ctps.push_back(std::move(fresh));
        newest[key] = ctps.size() - 1;
    }
    return ctps;
}

std::vector<Ctp> ctp_extraction(const TpfLog& log, double gap) {
    return ctp_extraction(std::span<const LogEntry>(log.entries), gap);
}

}  // namespace lift
