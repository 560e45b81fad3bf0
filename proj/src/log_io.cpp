#include "lift/log_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "lift/text.hpp"

namespace lift {

std::int64_t TpfLog::duration() const {
    if (entries.size() < 2) return 0;
    return entries.back().ts - entries.front().ts;
}

namespace {

bool parse_ts(const std::string& token, std::int64_t& out) {
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

// Variables the pattern binds (positions holding a variable).
std::vector<std::string> pattern_variables(const TriplePattern& tp) {
    std::vector<std::string> vars;
    for (const Term* t : {&tp.s, &tp.p, &tp.o})
        if (t->is_variable()) vars.push_back(t->text);
    return vars;
}

struct LineError {
    std::string reason;
};

LogEntry parse_entry_tokens(const std::vector<std::string>& tokens) {
    if (tokens.size() < 5) throw LineError{"expected at least 5 fields (ip ts s p o)"};
    LogEntry entry;
    entry.ip = tokens[0];
    if (!parse_ts(tokens[1], entry.ts)) throw LineError{"bad timestamp: " + tokens[1]};
    try {
        entry.tp = {parse_term(tokens[2]), parse_term(tokens[3]), parse_term(tokens[4])};
    } catch (const ParseError& e) {
        throw LineError{e.what()};
    }
    if (!entry.tp.p.is_iri()) throw LineError{"unbound predicate"};
    for (const Term* t : {&entry.tp.s, &entry.tp.o})
        if (t->is_variable() && is_reserved_var_name(t->text))
            throw LineError{"reserved variable name ?" + t->text};
    if (entry.tp.s.is_literal()) throw LineError{"literal subject"};

    std::size_t i = 5;
    if (i < tokens.size()) {
        if (tokens[i] != "mu") throw LineError{"expected `mu`, got: " + tokens[i]};
        ++i;
        const std::vector<std::string> vars = pattern_variables(entry.tp);
        std::string current;
        for (; i < tokens.size(); ++i) {
            Term t;
            try {
                t = parse_term(tokens[i]);
            } catch (const ParseError& e) {
                throw LineError{e.what()};
            }
            if (t.is_variable()) {
                if (std::find(vars.begin(), vars.end(), t.text) == vars.end())
                    throw LineError{"mu binds ?" + t.text + " which does not occur in tp"};
                if (!current.empty() && !entry.outputs.has(current))
                    throw LineError{"mu group ?" + current + " has no values"};
                current = t.text;
            } else {
                if (current.empty()) throw LineError{"mu value before any ?var"};
                entry.outputs.add(current, t);
            }
        }
        if (!current.empty() && !entry.outputs.has(current))
            throw LineError{"mu group ?" + current + " has no values"};
    }
    return entry;
}

}  // namespace

ParsedLog parse_log(std::istream& in) {
    ParsedLog result;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> tokens;
        try {
            tokens = tokenize_line(line);
        } catch (const ParseError& e) {
            result.rejects.push_back({line_no, e.what()});
            continue;
        }
        if (tokens.empty() || tokens[0][0] == '#') continue;
        try {
            result.log.entries.push_back(parse_entry_tokens(tokens));
        } catch (const LineError& e) {
            result.rejects.push_back({line_no, e.reason});
        }
    }
    std::stable_sort(result.log.entries.begin(), result.log.entries.end(),
                     [](const LogEntry& a, const LogEntry& b) { return a.ts < b.ts; });
    return result;
}

ParsedLog parse_log_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open log file: " + path);
    return parse_log(in);
}

std::string entry_to_string(const LogEntry& entry) {
    std::string out = entry.ip;
    out += " " + std::to_string(entry.ts);
    out += " " + term_to_string(entry.tp.s);
    out += " " + term_to_string(entry.tp.p);
    out += " " + term_to_string(entry.tp.o);
    if (!entry.outputs.empty()) {
        out += " mu";
        for (const auto& [var, values] : entry.outputs.bindings()) {
            out += " ?" + var;
            for (const Term& v : values.values()) out += " " + term_to_string(v);
        }
    }
    return out;
}

void write_log(const TpfLog& log, std::ostream& out) {
    for (const LogEntry& entry : log.entries) out << entry_to_string(entry) << "\n";
}

void write_log_file(const TpfLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open log file for writing: " + path);
    write_log(log, out);
}

}  // namespace lift
