#include <doctest.h>

#include "lift/documents.hpp"
#include "lift/metrics.hpp"
#include "lift/pipeline.hpp"
#include "lift/text.hpp"
#include "testsupport.hpp"

using namespace lift;
using namespace lift::testing;

TEST_CASE("duration specs parse absolute, percent and unbounded forms") {
    CHECK(parse_duration_spec("8").kind == DurationSpec::Kind::Absolute);
    CHECK(parse_duration_spec("8").value == 8.0);
    CHECK(parse_duration_spec("2.5").value == 2.5);
    CHECK(parse_duration_spec("10%").kind == DurationSpec::Kind::Percent);
    CHECK(parse_duration_spec("inf").kind == DurationSpec::Kind::Unbounded);
    CHECK(parse_duration_spec("unbounded").kind == DurationSpec::Kind::Unbounded);
    CHECK_THROWS_AS(parse_duration_spec("abc"), ParseError);
    CHECK_THROWS_AS(parse_duration_spec("-3"), ParseError);

    TpfLog log;
    for (std::int64_t ts : {10, 20, 30}) {
        LogEntry e;
        e.ip = "ip";
        e.ts = ts;
        e.tp = parse_pattern_string("?s p1 ?o");
        log.entries.push_back(e);
    }
    CHECK(parse_duration_spec("50%").resolve(log) == 10.0);  // duration 20
    CHECK(parse_duration_spec("100%").resolve(log) == 20.0);
}

TEST_CASE("lift on the fixture log rebuilds both queries") {
    const ParsedLog parsed = parse_log_file(fixture_path("fig2b.log"));
    LiftConfig cfg;
    cfg.gap = DurationSpec::absolute(8);
    const LiftRun run = lift::lift(parsed.log, cfg);
    REQUIRE(run.bgps.size() == 2);
    CHECK(patterns_equal_up_to_renaming(run.bgps[0].bgp,
                                        parse_query_file(fixture_path("fig2_q3.rq"))));
    CHECK(patterns_equal_up_to_renaming(run.bgps[1].bgp,
                                        parse_query_file(fixture_path("fig2_q4.rq"))));
    CHECK(run.ctps.size() == 4);
    CHECK(run.graph.nodes.size() == 5);
}

TEST_CASE("lift on an empty log yields nothing") {
    LiftConfig cfg;
    const LiftRun run = lift::lift(TpfLog{}, cfg);
    CHECK(run.bgps.empty());
}

TEST_CASE("a tight gap yields more, smaller BGPs") {
    const ParsedLog parsed = parse_log_file(fixture_path("fig2b.log"));
    LiftConfig cfg;
    cfg.gap = DurationSpec::absolute(1);
    const LiftRun run = lift::lift(parsed.log, cfg);
    CHECK(run.bgps.size() == 7);  // every ctp isolated at gap 1
    for (const DeducedBgp& d : run.bgps) CHECK(d.bgp.patterns.size() == 1);
}

TEST_CASE("identical runs serialize to identical documents") {
    const ParsedLog parsed = parse_log_file(fixture_path("fig2b.log"));
    LiftConfig cfg;
    cfg.gap = DurationSpec::percent(100);
    RunMeta meta;
    meta.gap = "100%";
    const LiftRun a = lift::lift(parsed.log, cfg);
    const LiftRun b = lift::lift(parsed.log, cfg);
    meta.resolved_gap = a.resolved_gap;
    CHECK(bgps_to_json(a.bgps, meta) == bgps_to_json(b.bgps, meta));
    CHECK(bgps_to_xml(a.bgps, meta) == bgps_to_xml(b.bgps, meta));
}

TEST_CASE("an unbounded slice length equals the unsliced run") {
    Rng rng(551);
    for (int round = 0; round < 40; ++round) {
        const TpfLog log = rand_log(rng, rand_int(rng, 0, 40));
        LiftConfig plain;
        plain.gap = DurationSpec::absolute(5);
        LiftConfig sliced = plain;
        sliced.slice_length = DurationSpec::unbounded();
        const LiftRun a = lift::lift(log, plain);
        const LiftRun b = lift::lift(log, sliced);
        REQUIRE(a.bgps.size() == b.bgps.size());
        for (std::size_t i = 0; i < a.bgps.size(); ++i) CHECK(a.bgps[i].bgp == b.bgps[i].bgp);
    }
}

TEST_CASE("slicing bounds the reach of aggregation") {
    // two executions of one query, far apart: one slice each
    std::istringstream in(
        "ip 1 ?s p2 toto mu ?s c1\n"
        "ip 2 c1 p1 ?o mu ?o a\n"
        "ip 5001 ?s p2 toto mu ?s c1\n"
        "ip 5002 c1 p1 ?o mu ?o a\n");
    const TpfLog log = parse_log(in).log;
    LiftConfig cfg;
    cfg.gap = DurationSpec::absolute(100);
    cfg.slice_length = DurationSpec::absolute(1000);
    const LiftRun run = lift::lift(log, cfg);
    CHECK(run.slice_count == 2);
    REQUIRE(run.bgps.size() == 2);
    CHECK(patterns_equal_up_to_renaming(run.bgps[0].bgp, run.bgps[1].bgp));
    // fresh variable names do not repeat across slices
    CHECK(pattern_to_string(run.bgps[0].bgp.patterns[0]) !=
          pattern_to_string(run.bgps[1].bgp.patterns[0]));

    SUBCASE("slice length below the gap is rejected") {
        LiftConfig bad;
        bad.gap = DurationSpec::absolute(100);
        bad.slice_length = DurationSpec::absolute(10);
        CHECK_THROWS_AS(lift::lift(log, bad), std::invalid_argument);
    }
}

TEST_CASE("per-ip partition of distinct-ip logs equals the union of per-ip runs") {
    Rng rng(552);
    for (int round = 0; round < 40; ++round) {
        // build a two-client log: same queries, disjoint ips
        TpfLog a = rand_log(rng, rand_int(rng, 0, 20));
        TpfLog b = rand_log(rng, rand_int(rng, 0, 20));
        for (LogEntry& e : a.entries) e.ip = "10.0.0.1";
        for (LogEntry& e : b.entries) e.ip = "10.0.0.2";
        const TpfLog mixed = shuffle_logs({a, b}, {ShuffleMode::RoundRobin, 0, {}});

        LiftConfig cfg;
        cfg.gap = DurationSpec::unbounded();
        cfg.per_ip_partition = true;
        const LiftRun part = lift::lift(mixed, cfg);

        LiftConfig plain;
        plain.gap = DurationSpec::unbounded();
        // per-ip timestamps differ from the isolated runs, but structures match
        std::vector<DeducedBgp> expected;
        for (const DeducedBgp& d : lift::lift(a, plain).bgps) expected.push_back(d);
        for (const DeducedBgp& d : lift::lift(b, plain).bgps) expected.push_back(d);
        REQUIRE(part.bgps.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(patterns_equal_up_to_renaming(part.bgps[i].bgp, expected[i].bgp));
    }
}

TEST_CASE("rejects gap of zero") {
    LiftConfig cfg;
    cfg.gap = DurationSpec::absolute(0);
    const ParsedLog parsed = parse_log_file(fixture_path("fig2b.log"));
    CHECK_THROWS_AS(lift::lift(parsed.log, cfg), std::invalid_argument);
}
