#include "lift/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lift/client_sim.hpp"
#include "lift/documents.hpp"
#include "lift/log_io.hpp"
#include "lift/metrics.hpp"
#include "lift/pipeline.hpp"
#include "lift/store.hpp"
#include "lift/text.hpp"

namespace lift {

namespace {

constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kIoError = 2;

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// `-` reads standard input.
std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes to the --out path, or to the given stream when no path was set.
void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path);
    if (!file) throw IoError("cannot write " + out_path);
    file << text;
}

TpfLog load_log(const std::string& path, std::size_t* rejected, std::ostream& err) {
    std::istringstream in(read_file(path));
    ParsedLog parsed = parse_log(in);
    if (rejected) *rejected = parsed.rejects.size();
    for (const LogReject& reject : parsed.rejects)
        err << path << ":" << reject.line_no << ": rejected: " << reject.reason << "\n";
    return std::move(parsed.log);
}

struct LiftFlags {
    std::string gap = "unbounded";
    std::string slice;
    bool filter_self_joins = false;
    bool per_ip = false;
};

void add_lift_flags(CLI::App* cmd, LiftFlags& flags) {
    cmd->add_option("--gap", flags.gap,
                    "gap in timestamp units, N% of log duration, or `unbounded`");
    cmd->add_option("--slice", flags.slice, "slice length (same forms as --gap)");
    cmd->add_flag("--filter-self-joins", flags.filter_self_joins,
                  "drop pure self-join BGPs (probe artifacts)");
    cmd->add_flag("--per-ip", flags.per_ip, "partition the log by client ip first");
}

LiftConfig make_config(const LiftFlags& flags) {
    LiftConfig cfg;
    cfg.gap = parse_duration_spec(flags.gap);
    if (!flags.slice.empty()) cfg.slice_length = parse_duration_spec(flags.slice);
    cfg.self_join_filter = flags.filter_self_joins;
    cfg.per_ip_partition = flags.per_ip;
    return cfg;
}

int run_parsed(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LIFT: extract basic graph patterns from TPF server logs"};
    app.require_subcommand(1);

    // ---- generate ----------------------------------------------------
    auto* generate = app.add_subcommand(
        "generate", "execute queries against a triple store, emit the server log");
    std::string gen_store;
    std::vector<std::string> gen_queries;
    std::string gen_out;
    ClientConfig gen_cfg;
    generate->add_option("--store", gen_store, "triple file")->required();
    generate->add_option("queries", gen_queries, "query files, executed back to back")
        ->required();
    generate->add_option("--ip", gen_cfg.ip, "client ip recorded in the log");
    generate->add_flag("--probe-first", gen_cfg.probe_first,
                       "issue a page-1 request per pattern before join ordering");
    generate->add_option("--page-size", gen_cfg.page_size, "fragment page size")
        ->check(CLI::PositiveNumber);
    generate->add_option("--ts-start", gen_cfg.clock.start, "first timestamp");
    generate->add_option("--ts-step", gen_cfg.clock.step, "timestamp increment per request")
        ->check(CLI::PositiveNumber);
    generate->add_option("--out", gen_out, "output log file (default: stdout)");

    // ---- shuffle -----------------------------------------------------
    auto* shuffle = app.add_subcommand("shuffle", "interleave logs to simulate concurrency");
    std::vector<std::string> shuffle_logs_in;
    std::string shuffle_mode = "round-robin";
    std::uint64_t shuffle_seed = 0;
    std::vector<std::int64_t> shuffle_offsets;
    std::string shuffle_out;
    shuffle->add_option("logs", shuffle_logs_in, "log files")->required();
    shuffle->add_option("--mode", shuffle_mode, "round-robin | random | offset");
    shuffle->add_option("--seed", shuffle_seed, "seed for --mode random");
    shuffle->add_option("--offsets", shuffle_offsets,
                        "per-log start delays for --mode offset (comma separated)")
        ->delimiter(',');
    shuffle->add_option("--out", shuffle_out, "output log file (default: stdout)");

    // ---- lift ----------------------------------------------------------
    auto* lift_cmd = app.add_subcommand("lift", "extract BGPs from a TPF server log");
    std::string lift_log_path;
    LiftFlags lift_flags;
    std::string lift_out;
    std::string lift_format = "canonical";
    bool dump_ctps = false, dump_dtps = false;
    lift_cmd->add_option("log", lift_log_path, "log file")->required();
    add_lift_flags(lift_cmd, lift_flags);
    lift_cmd->add_option("--format", lift_format, "canonical (JSON) | xml")
        ->check(CLI::IsMember({"canonical", "xml"}));
    lift_cmd->add_flag("--dump-ctps", dump_ctps, "print the candidate triple pattern table");
    lift_cmd->add_flag("--dump-dtps", dump_dtps, "print the DTP graph");
    lift_cmd->add_option("--out", lift_out, "output file (default: stdout)");

    // ---- eval ----------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a BGP document against truth queries");
    std::string eval_deduced;
    std::vector<std::string> eval_truth;
    std::string eval_out;
    bool eval_json = false;
    eval_cmd->add_option("--deduced", eval_deduced, "canonical BGP document (JSON)")->required();
    eval_cmd->add_option("truth", eval_truth, "ground truth query files")->required();
    eval_cmd->add_flag("--json", eval_json, "emit the report as JSON instead of a table");
    eval_cmd->add_option("--out", eval_out, "output file (default: stdout)");

    // ---- sweep ---------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "evaluate one log across several gaps");
    std::string sweep_log_path;
    std::vector<std::string> sweep_gaps;
    std::vector<std::string> sweep_truth;
    LiftFlags sweep_flags;
    std::string sweep_out;
    bool sweep_json = false;
    sweep_cmd->add_option("log", sweep_log_path, "log file")->required();
    sweep_cmd->add_option("--gaps", sweep_gaps, "gap list, e.g. 1%,10%,50%,100%")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--truth", sweep_truth, "ground truth query files")->required();
    add_lift_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_flag("--json", sweep_json, "emit the table as JSON");
    sweep_cmd->add_option("--out", sweep_out, "output file (default: stdout)");

    // ---- stats ---------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "join/type statistics of a BGP document");
    std::string stats_doc;
    std::string stats_out;
    bool stats_json = false;
    stats_cmd->add_option("document", stats_doc, "canonical BGP document (JSON)")->required();
    stats_cmd->add_flag("--json", stats_json, "emit the report as JSON");
    stats_cmd->add_option("--out", stats_out, "output file (default: stdout)");

    std::vector<const char*> argv;
    argv.push_back("lift");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        err << app.help();
        return kValidationError;
    }

    if (*generate) {
        std::istringstream store_in(read_file(gen_store));
        const Store store = Store::load(store_in);
        TpfLog log;
        ClientConfig cfg = gen_cfg;
        for (const std::string& query_path : gen_queries) {
            const Bgp query = parse_query(read_file(query_path));
            ExecutionResult result = execute_query(store, query, cfg);
            for (const std::string& warning : result.warnings)
                err << query_path << ": warning: " << warning << "\n";
            if (!result.log.empty())
                cfg.clock.start = result.log.entries.back().ts + cfg.clock.step;
            for (LogEntry& entry : result.log.entries) log.entries.push_back(std::move(entry));
        }
        std::ostringstream text;
        write_log(log, text);
        emit(text.str(), gen_out, out);
        return kOk;
    }

    if (*shuffle) {
        std::vector<TpfLog> logs;
        for (const std::string& path : shuffle_logs_in)
            logs.push_back(load_log(path, nullptr, err));
        ShufflePolicy policy;
        policy.seed = shuffle_seed;
        policy.start_delays = shuffle_offsets;
        if (shuffle_mode == "round-robin")
            policy.mode = ShuffleMode::RoundRobin;
        else if (shuffle_mode == "random")
            policy.mode = ShuffleMode::RandomInterleave;
        else if (shuffle_mode == "offset")
            policy.mode = ShuffleMode::Offset;
        else
            throw CLI::ValidationError("--mode", "unknown mode: " + shuffle_mode);
        const TpfLog shuffled = shuffle_logs(logs, policy);
        std::ostringstream text;
        write_log(shuffled, text);
        emit(text.str(), shuffle_out, out);
        return kOk;
    }

    if (*lift_cmd) {
        std::size_t rejected = 0;
        const TpfLog log = load_log(lift_log_path, &rejected, err);
        const LiftConfig cfg = make_config(lift_flags);
        const LiftRun run = lift(log, cfg);
        if (dump_ctps) out << ctps_to_table(run.ctps);
        if (dump_dtps) out << dtp_graph_to_table(run.graph);
        RunMeta meta;
        meta.input = lift_log_path;
        meta.gap = lift_flags.gap;
        meta.resolved_gap = run.resolved_gap;
        meta.entries = log.size();
        meta.rejected = rejected;
        meta.slices = run.slice_count;
        meta.self_join_filter = cfg.self_join_filter;
        meta.per_ip = cfg.per_ip_partition;
        const std::string text = lift_format == "xml" ? bgps_to_xml(run.bgps, meta)
                                                      : bgps_to_json(run.bgps, meta);
        emit(text, lift_out, out);
        return kOk;
    }

    if (*eval_cmd) {
        const std::vector<DeducedBgp> deduced = bgps_from_json(read_file(eval_deduced));
        std::vector<Bgp> truth;
        for (const std::string& path : eval_truth) truth.push_back(parse_query(read_file(path)));
        const EvalReport report = evaluate(deduced, truth);
        emit(eval_json ? report_to_json(report) : report_to_table(report), eval_out, out);
        return kOk;
    }

    if (*sweep_cmd) {
        std::size_t rejected = 0;
        const TpfLog log = load_log(sweep_log_path, &rejected, err);
        std::vector<Bgp> truth;
        for (const std::string& path : sweep_truth) truth.push_back(parse_query(read_file(path)));
        std::vector<SweepRow> rows;
        for (const std::string& gap_text : sweep_gaps) {
            LiftFlags flags = sweep_flags;
            flags.gap = gap_text;
            const LiftRun run = lift(log, make_config(flags));
            rows.push_back({gap_text, evaluate(run.bgps, truth)});
        }
        emit(sweep_json ? sweep_to_json(rows) : sweep_to_table(rows), sweep_out, out);
        return kOk;
    }

    if (*stats_cmd) {
        const std::vector<DeducedBgp> deduced = bgps_from_json(read_file(stats_doc));
        const BgpStats stats = bgp_stats(deduced);
        emit(stats_json ? stats_to_json(stats) : stats_to_table(stats), stats_out, out);
        return kOk;
    }

    err << app.help();
    return kValidationError;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    try {
        return run_parsed(std::move(args), out, err);
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kIoError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidationError;
    }
}

}  // namespace lift
