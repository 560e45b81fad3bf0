#include "lift/documents.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "lift/text.hpp"

namespace lift {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json gap_to_json(double gap) {
    if (!std::isfinite(gap)) return "unbounded";
    if (gap == std::floor(gap) && std::abs(gap) < 1e15)
        return static_cast<std::int64_t>(gap);
    return gap;
}

ordered_json bgp_to_json(const DeducedBgp& deduced) {
    ordered_json j;
    j["patterns"] = ordered_json::array();
    for (const TriplePattern& p : deduced.bgp.patterns)
        j["patterns"].push_back(pattern_to_string(p));
    j["joins"] = ordered_json::array();
    for (const JoinEdge& e : deduced.bgp.joins) {
        ordered_json join;
        join["a"] = e.pattern_a;
        join["posA"] = pattern_pos_name(e.pos_a);
        join["b"] = e.pattern_b;
        join["posB"] = pattern_pos_name(e.pos_b);
        j["joins"].push_back(std::move(join));
    }
    j["support"] = deduced.support;
    j["window"] = ordered_json::array({deduced.window_start, deduced.window_end});
    return j;
}

}  // namespace

std::string bgps_to_json(const std::vector<DeducedBgp>& bgps, const RunMeta& meta) {
    ordered_json doc;
    ordered_json m;
    m["input"] = meta.input;
    m["gap"] = meta.gap;
    m["resolvedGap"] = gap_to_json(meta.resolved_gap);
    m["entries"] = meta.entries;
    m["rejected"] = meta.rejected;
    m["slices"] = meta.slices;
    m["selfJoinFilter"] = meta.self_join_filter;
    m["perIp"] = meta.per_ip;
    m["bgpCount"] = bgps.size();
    doc["meta"] = std::move(m);
    doc["bgps"] = ordered_json::array();
    for (const DeducedBgp& d : bgps) doc["bgps"].push_back(bgp_to_json(d));
    return doc.dump(2) + "\n";
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string bgps_to_xml(const std::vector<DeducedBgp>& bgps, const RunMeta& meta) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<bgps input=\"" << xml_escape(meta.input) << "\" gap=\"" << xml_escape(meta.gap)
        << "\" entries=\"" << meta.entries << "\" rejected=\"" << meta.rejected
        << "\" slices=\"" << meta.slices << "\" selfJoinFilter=\""
        << (meta.self_join_filter ? "true" : "false") << "\" perIp=\""
        << (meta.per_ip ? "true" : "false") << "\">\n";
    for (const DeducedBgp& d : bgps) {
        out << "  <bgp windowStart=\"" << d.window_start << "\" windowEnd=\"" << d.window_end
            << "\">\n";
        for (const TriplePattern& p : d.bgp.patterns)
            out << "    <pattern>" << xml_escape(pattern_to_string(p)) << "</pattern>\n";
        for (const JoinEdge& e : d.bgp.joins)
            out << "    <join a=\"" << e.pattern_a << "\" posA=\"" << pattern_pos_name(e.pos_a)
                << "\" b=\"" << e.pattern_b << "\" posB=\"" << pattern_pos_name(e.pos_b)
                << "\"/>\n";
        out << "    <support>";
        for (std::size_t i = 0; i < d.support.size(); ++i)
            out << (i ? " " : "") << d.support[i];
        out << "</support>\n";
        out << "  </bgp>\n";
    }
    out << "</bgps>\n";
    return out.str();
}

std::vector<DeducedBgp> bgps_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad BGP document: ") + e.what());
    }
    if (!doc.contains("bgps") || !doc["bgps"].is_array())
        throw ParseError("bad BGP document: missing `bgps` array");
    std::vector<DeducedBgp> out;
    for (const auto& jb : doc["bgps"]) {
        DeducedBgp d;
        for (const auto& jp : jb.at("patterns"))
            d.bgp.patterns.push_back(parse_pattern_string(jp.get<std::string>()));
        if (jb.contains("joins")) {
            for (const auto& jj : jb["joins"]) {
                JoinEdge e;
                e.pattern_a = jj.at("a").get<int>();
                e.pos_a = jj.at("posA").get<std::string>() == "object" ? PatternPos::Object
                                                                       : PatternPos::Subject;
                e.pattern_b = jj.at("b").get<int>();
                e.pos_b = jj.at("posB").get<std::string>() == "object" ? PatternPos::Object
                                                                       : PatternPos::Subject;
                d.bgp.joins.push_back(e);
            }
        }
        if (jb.contains("support")) d.support = jb["support"].get<std::vector<int>>();
        if (jb.contains("window") && jb["window"].is_array() && jb["window"].size() == 2) {
            d.window_start = jb["window"][0].get<std::int64_t>();
            d.window_end = jb["window"][1].get<std::int64_t>();
        }
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

ordered_json report_core_json(const EvalReport& r) {
    ordered_json j;
    j["tpPrecision"] = r.tp_precision;
    j["tpRecall"] = r.tp_recall;
    j["joinPrecision"] = r.join_precision;
    j["joinRecall"] = r.join_recall;
    j["quality"] = r.quality;
    j["joinQuality"] = r.join_quality;
    ordered_json counts;
    counts["truthPatterns"] = r.truth_patterns;
    counts["deducedPatterns"] = r.deduced_patterns;
    counts["matchedPatterns"] = r.matched_patterns;
    counts["truthJoins"] = r.truth_joins;
    counts["deducedJoins"] = r.deduced_joins;
    counts["matchedJoins"] = r.matched_joins;
    j["counts"] = std::move(counts);
    ordered_json macro;
    macro["tpPrecision"] = r.macro_tp_precision;
    macro["tpRecall"] = r.macro_tp_recall;
    macro["quality"] = r.macro_quality;
    j["macro"] = std::move(macro);
    return j;
}

std::string format_metric(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

}  // namespace

std::string report_to_json(const EvalReport& r) {
    ordered_json j = report_core_json(r);
    j["perQuery"] = ordered_json::array();
    for (const QueryReport& q : r.per_query) {
        ordered_json jq;
        jq["truth"] = q.truth_index;
        if (q.deduced_index)
            jq["deduced"] = *q.deduced_index;
        else
            jq["deduced"] = nullptr;
        jq["truthPatterns"] = q.truth_patterns;
        jq["deducedPatterns"] = q.deduced_patterns;
        jq["matchedPatterns"] = q.matched_patterns;
        jq["truthJoins"] = q.truth_joins;
        jq["deducedJoins"] = q.deduced_joins;
        jq["matchedJoins"] = q.matched_joins;
        j["perQuery"].push_back(std::move(jq));
    }
    j["unmatchedDeduced"] = r.unmatched_deduced;
    return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& r) {
    std::ostringstream out;
    out << "metric          value\n";
    out << "tp precision    " << format_metric(r.tp_precision) << "  (" << r.matched_patterns
        << "/" << r.deduced_patterns << ")\n";
    out << "tp recall       " << format_metric(r.tp_recall) << "  (" << r.matched_patterns << "/"
        << r.truth_patterns << ")\n";
    out << "join precision  " << format_metric(r.join_precision) << "  (" << r.matched_joins
        << "/" << r.deduced_joins << ")\n";
    out << "join recall     " << format_metric(r.join_recall) << "  (" << r.matched_joins << "/"
        << r.truth_joins << ")\n";
    out << "quality         " << format_metric(r.quality) << "\n";
    out << "join quality    " << format_metric(r.join_quality) << "\n";
    out << "macro tp prec   " << format_metric(r.macro_tp_precision) << "\n";
    out << "macro tp recall " << format_metric(r.macro_tp_recall) << "\n";
    out << "macro quality   " << format_metric(r.macro_quality) << "\n";
    out << "noise bgps      " << r.unmatched_deduced.size() << "\n";
    return out.str();
}

std::string sweep_to_table(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(10) << "gap" << std::setw(8) << "tpP" << std::setw(8) << "tpR"
        << std::setw(8) << "joinP" << std::setw(8) << "joinR" << std::setw(8) << "quality"
        << "\n";
    for (const SweepRow& row : rows) {
        const EvalReport& r = row.report;
        out << std::left << std::setw(10) << row.gap << std::setw(8)
            << format_metric(r.tp_precision) << std::setw(8) << format_metric(r.tp_recall)
            << std::setw(8) << format_metric(r.join_precision) << std::setw(8)
            << format_metric(r.join_recall) << std::setw(8) << format_metric(r.quality) << "\n";
    }
    return out.str();
}

std::string sweep_to_json(const std::vector<SweepRow>& rows) {
    ordered_json j = ordered_json::array();
    for (const SweepRow& row : rows) {
        ordered_json jr;
        jr["gap"] = row.gap;
        jr["report"] = report_core_json(row.report);
        j.push_back(std::move(jr));
    }
    return j.dump(2) + "\n";
}

std::string stats_to_json(const BgpStats& s) {
    ordered_json j;
    j["bgps"] = s.bgp_count;
    j["patterns"] = s.pattern_count;
    j["joins"] = s.join_count;
    ordered_json by_type;
    by_type["subjectSubject"] = s.subject_subject;
    by_type["subjectObject"] = s.subject_object;
    by_type["objectObject"] = s.object_object;
    j["joinsByType"] = std::move(by_type);
    ordered_json hist = ordered_json::object();
    for (const auto& [size, count] : s.size_histogram) hist[std::to_string(size)] = count;
    j["sizeHistogram"] = std::move(hist);
    ordered_json freq = ordered_json::object();
    for (const auto& [shape, count] : s.pattern_frequency) freq[shape] = count;
    j["patternFrequency"] = std::move(freq);
    return j.dump(2) + "\n";
}

std::string stats_to_table(const BgpStats& s) {
    std::ostringstream out;
    out << "bgps             " << s.bgp_count << "\n";
    out << "patterns         " << s.pattern_count << "\n";
    out << "joins            " << s.join_count << "\n";
    out << "subject-subject  " << s.subject_subject << "\n";
    out << "subject-object   " << s.subject_object << "\n";
    out << "object-object    " << s.object_object << "\n";
    out << "bgp sizes:\n";
    for (const auto& [size, count] : s.size_histogram)
        out << "  " << size << " pattern(s): " << count << "\n";
    out << "most frequent pattern shapes:\n";
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const auto& [shape, count] : s.pattern_frequency) ranked.emplace_back(count, shape);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    const std::size_t top = std::min<std::size_t>(ranked.size(), 20);
    for (std::size_t i = 0; i < top; ++i)
        out << "  " << ranked[i].first << "  " << ranked[i].second << "\n";
    return out.str();
}

namespace {

std::string mapping_to_string(const MappingSet& mu) {
    std::string out;
    bool first_var = true;
    for (const auto& [var, values] : mu.bindings()) {
        if (!first_var) out += "  ";
        first_var = false;
        out += "?" + var + ":{";
        for (std::size_t i = 0; i < values.values().size(); ++i)
            out += (i ? "," : "") + term_to_string(values.values()[i]);
        out += "}";
    }
    return out;
}

}  // namespace

std::string ctps_to_table(const std::vector<Ctp>& ctps) {
    std::ostringstream out;
    out << "id  ts        tp                                mu_o / mu_i\n";
    for (const Ctp& c : ctps) {
        std::ostringstream ts;
        ts << c.ts_min << "," << c.ts_max;
        out << std::left << std::setw(4) << c.id << std::setw(10) << ts.str() << std::setw(34)
            << pattern_to_string(c.tmpl) << "mu_o " << mapping_to_string(c.outputs) << " | mu_i "
            << mapping_to_string(c.inputs) << "\n";
    }
    return out.str();
}

std::string dtp_graph_to_table(const DtpGraph& graph) {
    std::ostringstream out;
    out << "nodes:\n";
    out << "id  origin  ts        tp                                mu_o / mu_i\n";
    for (const Dtp& d : graph.nodes) {
        std::ostringstream ts;
        ts << d.ts_min << "," << d.ts_max;
        out << std::left << std::setw(4) << d.id << std::setw(8) << d.origin_ctp_id
            << std::setw(10) << ts.str() << std::setw(34) << pattern_to_string(d.tmpl) << "mu_o "
            << mapping_to_string(d.outputs) << " | mu_i " << mapping_to_string(d.inputs) << "\n";
    }
    out << "edges:\n";
    for (const DtpEdge& e : graph.edges)
        out << "  " << e.parent << " -> " << e.child << "  (?" << e.parent_var << ", ?"
            << e.child_var << ")\n";
    out << "splits:\n";
    for (const auto& [ctp_id, dtp_id] : graph.splits)
        out << "  split(" << ctp_id << "," << dtp_id << ")\n";
    return out.str();
}

}  // namespace lift
