#include "lift/bgp_assembly.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "lift/text.hpp"

namespace lift {

namespace {

// Minimal union-find over dense indices.
class Dsu {
public:
    explicit Dsu(std::size_t n) : parent_(n) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

PatternPos var_position(const TriplePattern& tmpl, const std::string& var, bool prefer_subject) {
    const bool at_s = tmpl.s.is_variable() && tmpl.s.text == var;
    const bool at_o = tmpl.o.is_variable() && tmpl.o.text == var;
    if (at_s && (prefer_subject || !at_o)) return PatternPos::Subject;
    if (at_o) return PatternPos::Object;
    throw std::logic_error("variable " + var + " does not occur in template " +
                           pattern_to_string(tmpl));
}

std::size_t slot_index(int dtp_id, PatternPos pos) {
    return static_cast<std::size_t>(dtp_id - 1) * 2 + (pos == PatternPos::Subject ? 0 : 1);
}

}  // namespace

std::vector<DeducedBgp> extract_bgps(const DtpGraph& graph) {
    VariableNaming naming;
    return extract_bgps(graph, naming);
}

std::vector<DeducedBgp> extract_bgps(const DtpGraph& graph, VariableNaming& naming) {
    const std::size_t n = graph.nodes.size();
    if (n == 0) return {};

    // Component structure of the graph (edges undirected) and the variable
    // classes over (dtp, position) slots linked by edge labels.
    Dsu components(n);
    Dsu slots(n * 2);
    std::set<std::size_t> joined_slots;  // slots that appear in an edge label

    for (std::size_t i = 0; i < n; ++i) {
        const TriplePattern& tmpl = graph.nodes[i].tmpl;
        if (tmpl.s.is_variable() && tmpl.s == tmpl.o)
            slots.unite(slot_index(graph.nodes[i].id, PatternPos::Subject),
                        slot_index(graph.nodes[i].id, PatternPos::Object));
    }
    for (const DtpEdge& e : graph.edges) {
        components.unite(static_cast<std::size_t>(e.parent - 1),
                         static_cast<std::size_t>(e.child - 1));
        const Dtp& parent = graph.node(e.parent);
        const Dtp& child = graph.node(e.child);
        std::vector<std::size_t> linked;
        for (PatternPos pos : {PatternPos::Subject, PatternPos::Object}) {
            const Term& pt = pos == PatternPos::Subject ? parent.tmpl.s : parent.tmpl.o;
            if (pt.is_variable() && pt.text == e.parent_var)
                linked.push_back(slot_index(e.parent, pos));
            const Term& ct = pos == PatternPos::Subject ? child.tmpl.s : child.tmpl.o;
            if (ct.is_variable() && ct.text == e.child_var)
                linked.push_back(slot_index(e.child, pos));
        }
        for (std::size_t k = 1; k < linked.size(); ++k) slots.unite(linked[0], linked[k]);
        for (std::size_t s : linked) joined_slots.insert(s);
    }

    // Components are emitted in order of their smallest dtp id; fresh
    // variable numbering follows that traversal, subjects and objects
    // counted separately across the whole extraction.
    std::map<std::size_t, std::vector<int>> component_nodes;  // root -> dtp ids
    for (std::size_t i = 0; i < n; ++i) component_nodes[components.find(i)].push_back(graph.nodes[i].id);
    std::vector<std::vector<int>> ordered;
    for (auto& [_, ids] : component_nodes) {
        std::sort(ids.begin(), ids.end());
        ordered.push_back(ids);
    }
    std::sort(ordered.begin(), ordered.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });

    std::map<std::size_t, std::string> class_names;  // slot class root -> variable name

    auto slot_term_out = [&](const Dtp& dtp, PatternPos pos) -> Term {
        const Term& t = pos == PatternPos::Subject ? dtp.tmpl.s : dtp.tmpl.o;
        if (t.is_constant()) return t;
        const std::size_t slot = slot_index(dtp.id, pos);
        if (is_reserved_var_name(t.text) && !joined_slots.count(slot)) {
            const ValueSet* injected = dtp.inputs.find(t.text);
            if (!injected || injected->empty())
                throw std::logic_error("reserved variable with no recorded input values");
            // Exactly one input mapping: put the constant back.
            if (injected->size() == 1) return injected->values().front();
        }
        const std::size_t root = slots.find(slot);
        auto it = class_names.find(root);
        if (it == class_names.end()) {
            std::string name = pos == PatternPos::Subject
                                   ? "s_" + std::to_string(naming.next_subject++)
                                   : "o_" + std::to_string(naming.next_object++);
            it = class_names.emplace(root, std::move(name)).first;
        }
        return Term::variable(it->second);
    };

    std::vector<DeducedBgp> out;
    for (const std::vector<int>& ids : ordered) {
        DeducedBgp deduced;
        std::map<int, int> pattern_index;
        for (int id : ids) {
            const Dtp& dtp = graph.node(id);
            TriplePattern pattern;
            pattern.s = slot_term_out(dtp, PatternPos::Subject);
            pattern.p = dtp.tmpl.p;
            pattern.o = slot_term_out(dtp, PatternPos::Object);
            pattern_index[id] = static_cast<int>(deduced.bgp.patterns.size());
            deduced.bgp.patterns.push_back(std::move(pattern));
            deduced.support.push_back(id);
            if (deduced.support.size() == 1) {
                deduced.window_start = dtp.ts_min;
                deduced.window_end = dtp.ts_max;
            } else {
                deduced.window_start = std::min(deduced.window_start, dtp.ts_min);
                deduced.window_end = std::max(deduced.window_end, dtp.ts_max);
            }
        }
        for (const DtpEdge& e : graph.edges) {
            if (!pattern_index.count(e.parent)) continue;
            const Dtp& parent = graph.node(e.parent);
            const Dtp& child = graph.node(e.child);
            deduced.bgp.joins.push_back({pattern_index.at(e.parent),
                                         var_position(parent.tmpl, e.parent_var, true),
                                         pattern_index.at(e.child),
                                         var_position(child.tmpl, e.child_var, true)});
        }
        std::sort(deduced.bgp.joins.begin(), deduced.bgp.joins.end());
        out.push_back(std::move(deduced));
    }
    return out;
}

namespace {

// Pattern shape: predicate plus which positions are variables and which
// constants (constants compared by value).
std::string pattern_shape(const TriplePattern& p) {
    auto term = [](const Term& t) { return t.is_variable() ? std::string("?") : term_to_string(t); };
    return term(p.s) + " " + term_to_string(p.p) + " " + term(p.o);
}

bool is_self_join(const Bgp& bgp, const JoinEdge& join) {
    return pattern_shape(bgp.patterns[static_cast<std::size_t>(join.pattern_a)]) ==
           pattern_shape(bgp.patterns[static_cast<std::size_t>(join.pattern_b)]);
}

}  // namespace

std::vector<DeducedBgp> filter_self_joins(const std::vector<DeducedBgp>& bgps) {
    std::vector<DeducedBgp> out;
    for (const DeducedBgp& deduced : bgps) {
        std::vector<JoinEdge> kept_joins;
        for (const JoinEdge& join : deduced.bgp.joins)
            if (!is_self_join(deduced.bgp, join)) kept_joins.push_back(join);

        if (kept_joins.size() == deduced.bgp.joins.size()) {
            out.push_back(deduced);
            continue;
        }
        if (kept_joins.empty() && !deduced.bgp.joins.empty()) continue;  // pure self-join noise

        // Some joins survived: re-split the component around them.
        const std::size_t n = deduced.bgp.patterns.size();
        Dsu dsu(n);
        for (const JoinEdge& join : kept_joins)
            dsu.unite(static_cast<std::size_t>(join.pattern_a),
                      static_cast<std::size_t>(join.pattern_b));
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < n; ++i) groups[dsu.find(i)].push_back(i);
        std::vector<std::vector<std::size_t>> parts;
        for (auto& [_, members] : groups) parts.push_back(members);
        std::sort(parts.begin(), parts.end());
        for (const std::vector<std::size_t>& members : parts) {
            DeducedBgp piece;
            piece.window_start = deduced.window_start;
            piece.window_end = deduced.window_end;
            std::map<std::size_t, int> remap;
            for (std::size_t m : members) {
                remap[m] = static_cast<int>(piece.bgp.patterns.size());
                piece.bgp.patterns.push_back(deduced.bgp.patterns[m]);
                piece.support.push_back(deduced.support[m]);
            }
            for (const JoinEdge& join : kept_joins) {
                auto a = remap.find(static_cast<std::size_t>(join.pattern_a));
                if (a == remap.end()) continue;
                piece.bgp.joins.push_back({a->second, join.pos_a,
                                           remap.at(static_cast<std::size_t>(join.pattern_b)),
                                           join.pos_b});
            }
            out.push_back(std::move(piece));
        }
    }
    return out;
}

BgpStats bgp_stats(const std::vector<DeducedBgp>& bgps) {
    BgpStats stats;
    stats.bgp_count = bgps.size();
    for (const DeducedBgp& deduced : bgps) {
        stats.pattern_count += deduced.bgp.patterns.size();
        stats.size_histogram[deduced.bgp.patterns.size()] += 1;
        for (const TriplePattern& p : deduced.bgp.patterns)
            stats.pattern_frequency[pattern_shape(p)] += 1;
        for (const JoinEdge& join : deduced.bgp.joins) {
            ++stats.join_count;
            const bool a_subject = join.pos_a == PatternPos::Subject;
            const bool b_subject = join.pos_b == PatternPos::Subject;
            if (a_subject && b_subject)
                ++stats.subject_subject;
            else if (!a_subject && !b_subject)
                ++stats.object_object;
            else
                ++stats.subject_object;
        }
    }
    return stats;
}

}  // namespace lift
