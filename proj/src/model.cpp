#include "lift/model.hpp"

#include <algorithm>
#include <stdexcept>

#include "lift/text.hpp"

namespace lift {

Term Term::iri(std::string value) {
    Term t;
    t.kind = TermKind::Iri;
    t.text = std::move(value);
    return t;
}

Term Term::literal(std::string lexical, std::string lang_tag) {
    Term t;
    t.kind = TermKind::Literal;
    t.text = std::move(lexical);
    t.lang = std::move(lang_tag);
    return t;
}

Term Term::variable(std::string name) {
    if (name.empty()) throw std::invalid_argument("variable name must be non-empty");
    Term t;
    t.kind = TermKind::Variable;
    t.text = std::move(name);
    return t;
}

namespace {

inline void hash_combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

std::size_t TermHash::operator()(const Term& t) const {
    std::size_t h = static_cast<std::size_t>(t.kind);
    hash_combine(h, std::hash<std::string>{}(t.text));
    if (!t.lang.empty()) hash_combine(h, std::hash<std::string>{}(t.lang));
    return h;
}

std::size_t TriplePatternHash::operator()(const TriplePattern& tp) const {
    TermHash th;
    std::size_t h = th(tp.s);
    hash_combine(h, th(tp.p));
    hash_combine(h, th(tp.o));
    return h;
}

bool triple_less(const Triple& a, const Triple& b) {
    const std::string as = term_to_string(a.s), bs = term_to_string(b.s);
    if (as != bs) return as < bs;
    const std::string ap = term_to_string(a.p), bp = term_to_string(b.p);
    if (ap != bp) return ap < bp;
    return term_to_string(a.o) < term_to_string(b.o);
}

bool ValueSet::contains(const Term& value) const {
    if (!index_.empty()) return index_.count(value) > 0;
    for (const Term& v : ordered_)
        if (v == value) return true;
    return false;
}

void ValueSet::insert(const Term& value) {
    if (index_.empty() && ordered_.size() >= kIndexThreshold)
        index_.insert(ordered_.begin(), ordered_.end());
    if (!index_.empty()) {
        if (!index_.insert(value).second) return;
    } else if (contains(value)) {
        return;
    }
    ordered_.push_back(value);
}

bool ValueSet::includes(const ValueSet& other) const {
    if (other.size() > size()) return false;
    for (const Term& v : other.ordered_)
        if (!contains(v)) return false;
    return true;
}

bool ValueSet::intersects(const ValueSet& other) const {
    const ValueSet& small = size() <= other.size() ? *this : other;
    const ValueSet& large = size() <= other.size() ? other : *this;
    for (const Term& v : small.ordered_)
        if (large.contains(v)) return true;
    return false;
}

ValueSet ValueSet::intersect(const ValueSet& other) const {
    ValueSet out;
    for (const Term& v : other.ordered_)
        if (contains(v)) out.insert(v);
    return out;
}

bool operator==(const ValueSet& a, const ValueSet& b) {
    return a.size() == b.size() && a.includes(b);
}

void MappingSet::add(const std::string& var, const Term& value) {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                               [](const Binding& b, const std::string& v) { return b.first < v; });
    if (it == bindings_.end() || it->first != var) it = bindings_.insert(it, {var, ValueSet{}});
    it->second.insert(value);
}

void MappingSet::merge(const MappingSet& other) {
    for (const auto& [var, values] : other.bindings_)
        for (const Term& v : values.values()) add(var, v);
}

const ValueSet* MappingSet::find(const std::string& var) const {
    auto it = std::lower_bound(bindings_.begin(), bindings_.end(), var,
                               [](const Binding& b, const std::string& v) { return b.first < v; });
    return it == bindings_.end() || it->first != var ? nullptr : &it->second;
}

std::vector<std::string> MappingSet::variables() const {
    std::vector<std::string> out;
    out.reserve(bindings_.size());
    for (const auto& [var, _] : bindings_) out.push_back(var);
    return out;
}

bool operator==(const MappingSet& a, const MappingSet& b) {
    return a.bindings_ == b.bindings_;
}

const char* pattern_pos_name(PatternPos pos) {
    return pos == PatternPos::Subject ? "subject" : "object";
}

namespace {

struct Slot {
    int pattern;
    PatternPos pos;

    friend auto operator<=>(const Slot&, const Slot&) = default;
};

const Term& slot_term(const TriplePattern& tp, PatternPos pos) {
    return pos == PatternPos::Subject ? tp.s : tp.o;
}

}  // namespace

std::vector<JoinEdge> Bgp::derive_joins(const std::vector<TriplePattern>& patterns) {
    std::map<std::string, std::vector<Slot>> occurrences;
    for (int i = 0; i < static_cast<int>(patterns.size()); ++i) {
        for (PatternPos pos : {PatternPos::Subject, PatternPos::Object}) {
            const Term& t = slot_term(patterns[i], pos);
            if (t.is_variable()) occurrences[t.text].push_back({i, pos});
        }
    }
    std::vector<JoinEdge> joins;
    for (auto& [_, slots] : occurrences) {
        if (slots.size() < 2) continue;
        std::sort(slots.begin(), slots.end());
        const Slot& root = slots.front();
        for (std::size_t k = 1; k < slots.size(); ++k)
            joins.push_back({root.pattern, root.pos, slots[k].pattern, slots[k].pos});
    }
    std::sort(joins.begin(), joins.end());
    return joins;
}

Bgp Bgp::from_patterns(std::vector<TriplePattern> patterns) {
    Bgp bgp;
    bgp.joins = derive_joins(patterns);
    bgp.patterns = std::move(patterns);
    return bgp;
}

bool is_reserved_var_name(const std::string& name) {
    return name == kReservedSubjectVar || name == kReservedObjectVar;
}

TemplateResult template_of(const TriplePattern& tp) {
    if (!tp.p.is_iri())
        throw std::invalid_argument("template_of: predicate must be a bound IRI");
    TemplateResult r;
    r.tmpl = tp;
    if (tp.s.is_constant()) {
        r.tmpl.s = Term::variable(kReservedSubjectVar);
        r.seed_inputs.add(kReservedSubjectVar, tp.s);
    }
    if (tp.o.is_constant()) {
        r.tmpl.o = Term::variable(kReservedObjectVar);
        r.seed_inputs.add(kReservedObjectVar, tp.o);
    }
    return r;
}

namespace {

// Backtracking search for the best 1-1 pattern matching under one injective
// renaming of a-side variables onto b-side variables. Pattern counts stay
// small (<= ~10) so exhaustive search with a simple bound is fine.
class PatternMatcher {
public:
    PatternMatcher(const Bgp& a, const Bgp& b) : a_(a), b_(b) {
        b_used_.assign(b_.patterns.size(), false);
        assignment_.assign(a_.patterns.size(), -1);
        for (int i = 0; i < static_cast<int>(a_.patterns.size()); ++i) {
            for (PatternPos pos : {PatternPos::Subject, PatternPos::Object}) {
                const Term& t = slot_term(a_.patterns[i], pos);
                if (t.is_variable()) a_classes_[t.text].push_back(i);
            }
        }
    }

    MatchScore run() {
        descend(0, 0);
        return best_;
    }

private:
    void descend(std::size_t idx, int matched) {
        if (idx == a_.patterns.size()) {
            MatchScore score{matched, matched_joins()};
            if (score.tp_matched > best_.tp_matched ||
                (score.tp_matched == best_.tp_matched && score.join_matched > best_.join_matched))
                best_ = score;
            return;
        }
        // Bound: even matching every remaining pattern cannot beat best_.
        const int remaining = static_cast<int>(a_.patterns.size() - idx);
        if (matched + remaining < best_.tp_matched) return;

        for (std::size_t j = 0; j < b_.patterns.size(); ++j) {
            if (b_used_[j]) continue;
            std::vector<std::pair<std::string, std::string>> added;
            if (!unify(a_.patterns[idx], b_.patterns[j], added)) continue;
            b_used_[j] = true;
            assignment_[idx] = static_cast<int>(j);
            descend(idx + 1, matched + 1);
            assignment_[idx] = -1;
            b_used_[j] = false;
            for (const auto& [av, bv] : added) {
                ab_.erase(av);
                ba_.erase(bv);
            }
        }
        descend(idx + 1, matched);  // leave a-pattern idx unmatched
    }

    bool unify(const TriplePattern& pa, const TriplePattern& pb,
               std::vector<std::pair<std::string, std::string>>& added) {
        auto bind = [&](const Term& ta, const Term& tb) {
            if (ta.is_variable() != tb.is_variable()) return false;
            if (!ta.is_variable()) return ta == tb;
            auto it = ab_.find(ta.text);
            if (it != ab_.end()) return it->second == tb.text;
            if (ba_.count(tb.text)) return false;  // keep the renaming injective
            ab_.emplace(ta.text, tb.text);
            ba_.emplace(tb.text, ta.text);
            added.emplace_back(ta.text, tb.text);
            return true;
        };
        if (bind(pa.s, pb.s) && bind(pa.p, pb.p) && bind(pa.o, pb.o)) return true;
        for (const auto& [av, bv] : added) {
            ab_.erase(av);
            ba_.erase(bv);
        }
        added.clear();
        return false;
    }

    // Joins are counted per shared-variable class: a class with k slots in
    // matched patterns contributes k-1 matched join edges. Matched patterns
    // map slot-for-slot under the renaming, so those slots share a variable
    // on the b side too; the count is valid against either side's totals.
    int matched_joins() const {
        int count = 0;
        for (const auto& [_, slots] : a_classes_) {
            int present = 0;
            for (int pattern : slots)
                if (assignment_[pattern] >= 0) ++present;
            if (present > 1) count += present - 1;
        }
        return count;
    }

    const Bgp& a_;
    const Bgp& b_;
    std::map<std::string, std::vector<int>> a_classes_;  // var -> slot patterns
    std::vector<bool> b_used_;
    std::vector<int> assignment_;
    std::map<std::string, std::string> ab_, ba_;
    MatchScore best_;
};

}  // namespace

MatchScore best_pattern_match(const Bgp& a, const Bgp& b) {
    return PatternMatcher(a, b).run();
}

bool patterns_equal_up_to_renaming(const Bgp& a, const Bgp& b) {
    if (a.patterns.size() != b.patterns.size()) return false;
    return best_pattern_match(a, b).tp_matched == static_cast<int>(a.patterns.size());
}

}  // namespace lift
