#include "lift/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace lift {

std::vector<std::string> tokenize_line(const std::string& line) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (line[i] == '"') {
            ++i;
            while (i < n) {
                if (line[i] == '\\') {
                    if (i + 1 >= n) throw ParseError("dangling escape in literal");
                    i += 2;
                    continue;
                }
                if (line[i] == '"') break;
                ++i;
            }
            if (i >= n) throw ParseError("unterminated literal: " + line.substr(start));
            ++i;  // closing quote
            // optional @lang glued to the closing quote
            while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        } else {
            while (i < n && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        }
        tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

namespace {

std::string unescape_lexical(const std::string& raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == '\\') {
            if (i + 1 >= raw.size()) throw ParseError("dangling escape in literal");
            char c = raw[++i];
            if (c != '"' && c != '\\') throw ParseError(std::string("unknown escape \\") + c);
            out.push_back(c);
        } else {
            out.push_back(raw[i]);
        }
    }
    return out;
}

std::string escape_lexical(const std::string& lexical) {
    std::string out;
    out.reserve(lexical.size());
    for (char c : lexical) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

Term parse_term(const std::string& token) {
    if (token.empty()) throw ParseError("empty term token");
    if (token[0] == '?') {
        if (token.size() == 1) throw ParseError("variable with empty name");
        return Term::variable(token.substr(1));
    }
    if (token[0] == '"') {
        std::size_t close = std::string::npos;
        for (std::size_t i = 1; i < token.size(); ++i) {
            if (token[i] == '\\') {
                ++i;
                continue;
            }
            if (token[i] == '"') {
                close = i;
                break;
            }
        }
        if (close == std::string::npos) throw ParseError("unterminated literal: " + token);
        std::string lexical = unescape_lexical(token.substr(1, close - 1));
        std::string rest = token.substr(close + 1);
        if (rest.empty()) return Term::literal(std::move(lexical));
        if (rest.size() < 2 || rest[0] != '@')
            throw ParseError("malformed literal suffix: " + token);
        return Term::literal(std::move(lexical), rest.substr(1));
    }
    return Term::iri(token);
}

std::string term_to_string(const Term& t) {
    switch (t.kind) {
        case TermKind::Iri:
            return t.text;
        case TermKind::Variable:
            return "?" + t.text;
        case TermKind::Literal: {
            std::string out = "\"" + escape_lexical(t.text) + "\"";
            if (!t.lang.empty()) out += "@" + t.lang;
            return out;
        }
    }
    return {};
}

std::string pattern_to_string(const TriplePattern& tp) {
    return term_to_string(tp.s) + " " + term_to_string(tp.p) + " " + term_to_string(tp.o);
}

TriplePattern parse_pattern_string(const std::string& text) {
    std::vector<std::string> tokens = tokenize_line(text);
    if (tokens.size() != 3)
        throw ParseError("expected 3 terms in pattern: " + text);
    return {parse_term(tokens[0]), parse_term(tokens[1]), parse_term(tokens[2])};
}

std::string triple_to_string(const Triple& t) {
    return term_to_string(t.s) + " " + term_to_string(t.p) + " " + term_to_string(t.o);
}

namespace {

bool iequals(const std::string& a, const char* b) {
    std::size_t n = 0;
    while (b[n] != '\0') ++n;
    if (a.size() != n) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (std::toupper(static_cast<unsigned char>(a[i])) != std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

}  // namespace

Bgp parse_query(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        // split braces and dots off surrounding tokens so `{ tp . tp }` parses
        std::string spaced;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (c == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
            if (!quoted && (c == '{' || c == '}')) {
                spaced += ' ';
                spaced += c;
                spaced += ' ';
            } else {
                spaced += c;
            }
        }
        for (std::string& tok : tokenize_line(spaced)) tokens.push_back(std::move(tok));
    }
    std::size_t i = 0;
    auto expect = [&](const char* what) {
        if (i >= tokens.size() || !iequals(tokens[i], what))
            throw ParseError(std::string("query: expected `") + what + "`");
        ++i;
    };
    expect("SELECT");
    expect("*");
    expect("WHERE");
    expect("{");
    std::vector<TriplePattern> patterns;
    std::vector<Term> current;
    while (i < tokens.size() && tokens[i] != "}") {
        if (tokens[i] == ".") {
            if (!current.empty()) throw ParseError("query: pattern with fewer than 3 terms");
            ++i;
            continue;
        }
        current.push_back(parse_term(tokens[i]));
        ++i;
        if (current.size() == 3) {
            patterns.push_back({current[0], current[1], current[2]});
            current.clear();
        }
    }
    if (!current.empty()) throw ParseError("query: trailing partial pattern");
    if (i >= tokens.size()) throw ParseError("query: missing `}`");
    ++i;
    if (i != tokens.size()) throw ParseError("query: trailing tokens after `}`");
    if (patterns.empty()) throw ParseError("query: no triple patterns");
    return Bgp::from_patterns(std::move(patterns));
}

Bgp parse_query_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open query file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_query(buf.str());
}

std::string query_to_string(const Bgp& bgp) {
    std::string out = "SELECT * WHERE {";
    for (std::size_t i = 0; i < bgp.patterns.size(); ++i) {
        out += i == 0 ? " " : " . ";
        out += pattern_to_string(bgp.patterns[i]);
    }
    out += " }";
    return out;
}

}  // namespace lift
