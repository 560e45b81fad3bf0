#pragma once
// Minimal in-memory RDF store with TPF-style fragment evaluation: paged
// triple-pattern matching plus exact total counts. Immutable after load;
// concurrent reads are safe.

#include <cstdint>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lift/model.hpp"

namespace lift {

// One page of matching triples plus the total match count.
struct Fragment {
    std::vector<Triple> triples;
    std::size_t total_count = 0;
    std::size_t page = 1;
    std::size_t page_size = 0;
};

inline constexpr std::size_t kDefaultPageSize = 100;

class Store {
public:
    // Builds a store from distinct triples; input order is irrelevant, the
    // store keeps one global lexicographic order (by s, p, o string form).
    static Store from_triples(std::vector<Triple> triples);

    // Parses the triple file format: one triple per line, three whitespace
    // separated fields, `#` comment lines, quoted literals with optional
    // @lang in the object. Malformed line -> ParseError with line number.
    static Store load(std::istream& in);
    static Store load_file(const std::string& path);

    std::size_t size() const { return triples_.size(); }
    const std::vector<Triple>& triples() const { return triples_; }

    // Returns the page-th slice of the matches of tp, in the global
    // deterministic order, along with the exact total count. No matches is
    // not an error. page and page_size must be >= 1.
    Fragment evaluate_fragment(const TriplePattern& tp, std::size_t page,
                               std::size_t page_size = kDefaultPageSize) const;

    // All matches of tp, in order (testing and the client simulator's
    // brute-force oracle use this).
    std::vector<Triple> match_all(const TriplePattern& tp) const;

    void write(std::ostream& out) const;

private:
    struct PairKey {
        Term a, b;
        friend bool operator==(const PairKey&, const PairKey&) = default;
    };
    struct PairKeyHash {
        std::size_t operator()(const PairKey& k) const;
    };

    void build_indexes();
    // Indices into triples_ matching tp, ascending (= lexicographic order).
    std::vector<std::uint32_t> matching_indices(const TriplePattern& tp) const;

    std::vector<Triple> triples_;  // sorted lexicographically, distinct
    std::unordered_map<Term, std::vector<std::uint32_t>, TermHash> by_p_;
    std::unordered_map<PairKey, std::vector<std::uint32_t>, PairKeyHash> by_ps_;
    std::unordered_map<PairKey, std::vector<std::uint32_t>, PairKeyHash> by_po_;
};

}  // namespace lift
