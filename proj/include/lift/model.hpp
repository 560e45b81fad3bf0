#pragma once
// Core RDF vocabulary: terms, triple patterns, triples, mapping sets and
// basic graph patterns shared by every other module. All types are plain
// immutable values; nothing here touches I/O.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace lift {

enum class TermKind : std::uint8_t { Iri, Literal, Variable };

// One RDF term. IRIs are kept as exact strings (no normalization), literals
// compare by (lexical, langTag) and variables by case-sensitive name.
struct Term {
    TermKind kind = TermKind::Iri;
    std::string text;  // IRI string, literal lexical form, or variable name
    std::string lang;  // language tag for literals, empty otherwise

    static Term iri(std::string value);
    static Term literal(std::string lexical, std::string lang_tag = "");
    static Term variable(std::string name);

    bool is_iri() const { return kind == TermKind::Iri; }
    bool is_literal() const { return kind == TermKind::Literal; }
    bool is_variable() const { return kind == TermKind::Variable; }
    bool is_constant() const { return kind != TermKind::Variable; }

    friend bool operator==(const Term&, const Term&) = default;
};

struct TermHash {
    std::size_t operator()(const Term& t) const;
};

struct TriplePattern {
    Term s, p, o;

    friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

struct TriplePatternHash {
    std::size_t operator()(const TriplePattern& tp) const;
};

// A ground triple: no variables anywhere, predicate is an IRI.
struct Triple {
    Term s, p, o;

    TriplePattern as_pattern() const { return {s, p, o}; }
    friend bool operator==(const Triple&, const Triple&) = default;
};

bool triple_less(const Triple& a, const Triple& b);

// Ordered duplicate-free set of constant terms. Keeps insertion order for
// reproducible output but compares as a set. Small sets (the common case:
// one injected constant, a handful of returned values) stay a plain vector;
// a hash index is built once the set grows.
class ValueSet {
public:
    void insert(const Term& value);
    bool contains(const Term& value) const;
    std::size_t size() const { return ordered_.size(); }
    bool empty() const { return ordered_.empty(); }
    const std::vector<Term>& values() const { return ordered_; }

    bool includes(const ValueSet& other) const;       // other ⊆ this
    bool intersects(const ValueSet& other) const;
    ValueSet intersect(const ValueSet& other) const;  // keeps other's order

    friend bool operator==(const ValueSet& a, const ValueSet& b);

private:
    static constexpr std::size_t kIndexThreshold = 8;

    std::vector<Term> ordered_;
    std::unordered_set<Term, TermHash> index_;  // empty until the set grows
};

// Variable-name -> value-set table (the output/input mapping tables), kept
// as a flat vector sorted by name. No variable ever maps to an empty set;
// absent variable means no binding.
class MappingSet {
public:
    using Binding = std::pair<std::string, ValueSet>;

    void add(const std::string& var, const Term& value);
    void merge(const MappingSet& other);
    bool has(const std::string& var) const { return find(var) != nullptr; }
    const ValueSet* find(const std::string& var) const;
    const std::vector<Binding>& bindings() const { return bindings_; }
    std::vector<std::string> variables() const;  // sorted by name
    bool empty() const { return bindings_.empty(); }

    friend bool operator==(const MappingSet& a, const MappingSet& b);

private:
    std::vector<Binding> bindings_;
};

enum class PatternPos : std::uint8_t { Subject, Object };

const char* pattern_pos_name(PatternPos pos);

// Join between two pattern positions holding the same variable.
struct JoinEdge {
    int pattern_a = 0;
    PatternPos pos_a = PatternPos::Subject;
    int pattern_b = 0;
    PatternPos pos_b = PatternPos::Subject;

    friend bool operator==(const JoinEdge&, const JoinEdge&) = default;
    friend auto operator<=>(const JoinEdge&, const JoinEdge&) = default;
};

// A basic graph pattern: an ordered set of triple patterns plus explicit
// join annotations. `derive_joins` computes the canonical join set from
// shared variables: for each variable occurring in k positions, a star of
// k-1 edges rooted at the smallest (patternIndex, position) slot. BGPs
// assembled from a DTP graph instead carry one join per detected edge.
struct Bgp {
    std::vector<TriplePattern> patterns;
    std::vector<JoinEdge> joins;

    static std::vector<JoinEdge> derive_joins(const std::vector<TriplePattern>& patterns);
    static Bgp from_patterns(std::vector<TriplePattern> patterns);

    friend bool operator==(const Bgp&, const Bgp&) = default;
};

// Reserved variable names standing for replaced subject/object constants.
// Serialized ASCII spellings of the paper-style sigma/omega placeholders.
inline const std::string kReservedSubjectVar = "_inS";
inline const std::string kReservedObjectVar = "_inO";

bool is_reserved_var_name(const std::string& name);

// Replaces bound subject/object of a pattern by the reserved variables and
// records each replaced constant under its reserved name. The predicate is
// never replaced.
struct TemplateResult {
    TriplePattern tmpl;
    MappingSet seed_inputs;
};

// Requires tp.p to be an IRI; a variable predicate is out of scope and the
// caller must skip such entries.
TemplateResult template_of(const TriplePattern& tp);

// Best 1-1 matching between two pattern lists under a single injective
// variable renaming (a-side variables -> b-side variables). `tp_matched` is
// maximized first, `join_matched` (canonical joins whose endpoint patterns
// both matched with agreeing positions) breaks ties.
struct MatchScore {
    int tp_matched = 0;
    int join_matched = 0;
};

MatchScore best_pattern_match(const Bgp& a, const Bgp& b);

// True iff a bijective variable renaming makes the two pattern sets (and
// hence their join structure) identical.
bool patterns_equal_up_to_renaming(const Bgp& a, const Bgp& b);

}  // namespace lift
