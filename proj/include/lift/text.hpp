#pragma once
// Shared textual syntax for terms, triples, patterns and queries.
//
// Token grammar (whitespace separated):
//   ?name            variable
//   "lexical"@lang   literal, quotes required, @lang optional, \" and \\ escapes
//   anything-else    IRI, stored as the exact token string
//
// The same grammar is used by triple files, log files, query files and the
// pattern strings of the canonical BGP document, so round-trips are exact.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lift/model.hpp"

namespace lift {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Splits a line into tokens, honoring quoted literals (a quoted token may
// contain spaces). Throws ParseError on an unterminated quote or bad escape.
std::vector<std::string> tokenize_line(const std::string& line);

// Token <-> term. term_to_string(parse_term(tok)) == tok for valid tokens.
Term parse_term(const std::string& token);
std::string term_to_string(const Term& t);

std::string pattern_to_string(const TriplePattern& tp);
TriplePattern parse_pattern_string(const std::string& text);

std::string triple_to_string(const Triple& t);

// Query files: `SELECT * WHERE { tp . tp . ... }`, one query per file,
// `#` comment lines allowed. Patterns may span lines; separators are `.`.
Bgp parse_query(const std::string& text);
Bgp parse_query_file(const std::string& path);
std::string query_to_string(const Bgp& bgp);

}  // namespace lift
