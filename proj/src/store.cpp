#include "lift/store.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "lift/text.hpp"

namespace lift {

std::size_t Store::PairKeyHash::operator()(const PairKey& k) const {
    TermHash th;
    std::size_t h = th(k.a);
    h ^= th(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

Store Store::from_triples(std::vector<Triple> triples) {
    for (const Triple& t : triples) {
        if (!t.s.is_iri() || !t.p.is_iri() || t.o.is_variable())
            throw ParseError("triple with a variable or non-IRI subject/predicate: " +
                             triple_to_string(t));
    }
    std::sort(triples.begin(), triples.end(), triple_less);
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    Store store;
    store.triples_ = std::move(triples);
    store.build_indexes();
    return store;
}

Store Store::load(std::istream& in) {
    std::vector<Triple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tokens;
        try {
            tokens = tokenize_line(line);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
        if (tokens.empty() || tokens[0][0] == '#') continue;
        if (tokens.size() != 3)
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 fields, got " +
                             std::to_string(tokens.size()));
        try {
            Term s = parse_term(tokens[0]);
            Term p = parse_term(tokens[1]);
            Term o = parse_term(tokens[2]);
            if (s.is_variable() || p.is_variable() || o.is_variable())
                throw ParseError("variables are not allowed in triple files");
            if (s.is_literal()) throw ParseError("literal subject");
            if (p.is_literal()) throw ParseError("literal predicate");
            triples.push_back({std::move(s), std::move(p), std::move(o)});
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return from_triples(std::move(triples));
}

Store Store::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open triple file: " + path);
    return load(in);
}

void Store::build_indexes() {
    for (std::uint32_t i = 0; i < triples_.size(); ++i) {
        const Triple& t = triples_[i];
        by_p_[t.p].push_back(i);
        by_ps_[{t.p, t.s}].push_back(i);
        by_po_[{t.p, t.o}].push_back(i);
    }
}

std::vector<std::uint32_t> Store::matching_indices(const TriplePattern& tp) const {
    const bool sb = tp.s.is_constant();
    const bool pb = tp.p.is_constant();
    const bool ob = tp.o.is_constant();

    auto filtered = [&](const std::vector<std::uint32_t>& candidates) {
        std::vector<std::uint32_t> out;
        out.reserve(candidates.size());
        for (std::uint32_t i : candidates) {
            const Triple& t = triples_[i];
            if (sb && !(t.s == tp.s)) continue;
            if (pb && !(t.p == tp.p)) continue;
            if (ob && !(t.o == tp.o)) continue;
            out.push_back(i);
        }
        return out;
    };

    if (pb) {
        if (sb) {
            auto it = by_ps_.find({tp.p, tp.s});
            if (it == by_ps_.end()) return {};
            return ob ? filtered(it->second) : it->second;
        }
        if (ob) {
            auto it = by_po_.find({tp.p, tp.o});
            if (it == by_po_.end()) return {};
            return it->second;
        }
        auto it = by_p_.find(tp.p);
        if (it == by_p_.end()) return {};
        return it->second;
    }
    // unbound predicate: full scan (out of the client's scope but supported)
    std::vector<std::uint32_t> all(triples_.size());
    for (std::uint32_t i = 0; i < triples_.size(); ++i) all[i] = i;
    return filtered(all);
}

Fragment Store::evaluate_fragment(const TriplePattern& tp, std::size_t page,
                                  std::size_t page_size) const {
    if (page < 1 || page_size < 1)
        throw std::invalid_argument("evaluate_fragment: page and page_size must be >= 1");
    const std::vector<std::uint32_t> matches = matching_indices(tp);
    Fragment frag;
    frag.total_count = matches.size();
    frag.page = page;
    frag.page_size = page_size;
    const std::size_t begin = (page - 1) * page_size;
    const std::size_t end = std::min(begin + page_size, matches.size());
    for (std::size_t i = begin; i < end; ++i) frag.triples.push_back(triples_[matches[i]]);
    return frag;
}

std::vector<Triple> Store::match_all(const TriplePattern& tp) const {
    std::vector<Triple> out;
    for (std::uint32_t i : matching_indices(tp)) out.push_back(triples_[i]);
    return out;
}

void Store::write(std::ostream& out) const {
    for (const Triple& t : triples_) out << triple_to_string(t) << "\n";
}

}  // namespace lift
