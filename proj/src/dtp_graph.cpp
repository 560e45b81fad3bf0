#include "lift/dtp_graph.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace lift {

namespace {

void recompute_from_provenance(Ctp& ctp) {
    ctp.outputs = MappingSet{};
    ctp.inputs = MappingSet{};
    ctp.ts_min = ctp.provenance.front().ts;
    ctp.ts_max = ctp.provenance.front().ts;
    for (const ConstituentEntry& e : ctp.provenance) {
        ctp.ts_min = std::min(ctp.ts_min, e.ts);
        ctp.ts_max = std::max(ctp.ts_max, e.ts);
        ctp.outputs.merge(e.outputs);
        for (const auto& [var, value] : e.injected) ctp.inputs.add(var, value);
    }
}

}  // namespace

Dtp split(Ctp& target, const std::string& target_var, const Ctp& source,
          const std::string& source_var) {
    const ValueSet* in_vals = target.inputs.find(target_var);
    const ValueSet* out_vals = source.outputs.find(source_var);
    if (!in_vals || !out_vals)
        throw std::logic_error("split: variables not bound in target inputs / source outputs");
    const ValueSet intersection = out_vals->intersect(*in_vals);
    if (intersection.empty() || intersection.size() == in_vals->size())
        throw std::logic_error("split: requires a strict partial intersection");

    std::vector<ConstituentEntry> moved, kept;
    for (ConstituentEntry& e : target.provenance) {
        auto it = e.injected.find(target_var);
        if (it != e.injected.end() && intersection.contains(it->second))
            moved.push_back(std::move(e));
        else
            kept.push_back(std::move(e));
    }
    Dtp product;
    product.id = target.id;
    product.ip = target.ip;
    product.tmpl = target.tmpl;
    product.origin_ctp_id = target.id;
    product.provenance = std::move(moved);
    recompute_from_provenance(product);

    target.provenance = std::move(kept);
    recompute_from_provenance(target);
    return product;
}

namespace {

struct WorkNode {
    Dtp dtp;
};

struct EdgeRec {
    const WorkNode* parent;
    const WorkNode* child;
    std::string parent_var;
    std::string child_var;
};

// Smallest timestamp among target entries whose injected value for var lies
// in values; used to check a would-be split product against the gap before
// committing to it.
std::int64_t product_ts_min(const Ctp& target, const std::string& var, const ValueSet& values) {
    std::int64_t ts = std::numeric_limits<std::int64_t>::max();
    for (const ConstituentEntry& e : target.provenance) {
        auto it = e.injected.find(var);
        if (it != e.injected.end() && values.contains(it->second)) ts = std::min(ts, e.ts);
    }
    return ts;
}

}  // namespace

DtpGraph nested_loop_detection(std::vector<Ctp> ctps, double gap) {
    std::vector<std::unique_ptr<WorkNode>> work;
    work.reserve(ctps.size());
    std::unordered_set<int> split_origins;
    for (Ctp& ctp : ctps) {
        auto node = std::make_unique<WorkNode>();
        static_cast<Ctp&>(node->dtp) = std::move(ctp);
        node->dtp.origin_ctp_id = node->dtp.id;
        work.push_back(std::move(node));
    }

    std::vector<EdgeRec> edges;
    for (std::size_t i = 0; i < work.size(); ++i) {
        WorkNode* source = work[i].get();
        for (const std::string& v_o : source->dtp.outputs.variables()) {
            const ValueSet& out_vals = *source->dtp.outputs.find(v_o);
            for (std::size_t j = i + 1; j < work.size(); ++j) {
                WorkNode* target = work[j].get();
                for (const std::string& v_i : target->dtp.inputs.variables()) {
                    if (!ingap(target->dtp.ts_min, source->dtp.ts_max, gap)) break;
                    const ValueSet* in_vals = target->dtp.inputs.find(v_i);
                    const ValueSet intersection = out_vals.intersect(*in_vals);
                    if (intersection.empty()) continue;
                    if (intersection.size() == in_vals->size()) {
                        edges.push_back({source, target, v_o, v_i});
                        continue;
                    }
                    // Partial intersection: carve the intersecting entries
                    // out, unless the fragment itself falls out of the gap.
                    if (!ingap(product_ts_min(target->dtp, v_i, intersection),
                               source->dtp.ts_max, gap))
                        continue;
                    auto fragment = std::make_unique<WorkNode>();
                    fragment->dtp = split(target->dtp, v_i, source->dtp, v_o);
                    fragment->dtp.origin_ctp_id = target->dtp.origin_ctp_id;
                    split_origins.insert(target->dtp.origin_ctp_id);

                    // An edge recorded before this split now points at the
                    // remainder. Its inclusion survives on either fragment
                    // (both inject subsets of the old values); keep it on
                    // the remainder when the gap still allows, fall back to
                    // the fragment, drop it otherwise.
                    for (auto it = edges.begin(); it != edges.end();) {
                        if (it->child != target) {
                            ++it;
                            continue;
                        }
                        if (ingap(target->dtp.ts_min, it->parent->dtp.ts_max, gap)) {
                            ++it;
                        } else if (ingap(fragment->dtp.ts_min, it->parent->dtp.ts_max, gap)) {
                            it->child = fragment.get();
                            ++it;
                        } else {
                            it = edges.erase(it);
                        }
                    }

                    edges.push_back({source, fragment.get(), v_o, v_i});
                    work.insert(work.begin() + static_cast<std::ptrdiff_t>(j),
                                std::move(fragment));
                    ++j;  // stay on the shrunk target for its remaining vars
                    target = work[j].get();
                }
            }
        }
    }

    DtpGraph graph;
    std::unordered_map<const WorkNode*, int> final_id;
    graph.nodes.reserve(work.size());
    for (std::size_t pos = 0; pos < work.size(); ++pos) {
        WorkNode* node = work[pos].get();
        node->dtp.id = static_cast<int>(pos) + 1;
        final_id[node] = node->dtp.id;
        if (split_origins.count(node->dtp.origin_ctp_id))
            graph.splits.emplace_back(node->dtp.origin_ctp_id, node->dtp.id);
        graph.nodes.push_back(std::move(node->dtp));
    }
    graph.edges.reserve(edges.size());
    for (const EdgeRec& e : edges)
        graph.edges.push_back({final_id.at(e.parent), final_id.at(e.child), e.parent_var, e.child_var});
    std::sort(graph.edges.begin(), graph.edges.end(), [](const DtpEdge& a, const DtpEdge& b) {
        return std::tie(a.parent, a.child, a.parent_var, a.child_var) <
               std::tie(b.parent, b.child, b.parent_var, b.child_var);
    });

    for (const DtpEdge& e : graph.edges) {
        const Dtp& parent = graph.node(e.parent);
        const Dtp& child = graph.node(e.child);
        const ValueSet* child_in = child.inputs.find(e.child_var);
        const ValueSet* parent_out = parent.outputs.find(e.parent_var);
        if (!child_in || !parent_out || !parent_out->includes(*child_in))
            throw std::logic_error("dtp graph: edge without full inclusion");
        if (!ingap(child.ts_min, parent.ts_max, gap))
            throw std::logic_error("dtp graph: edge violates the gap");
    }
    return graph;
}

}  // namespace lift
