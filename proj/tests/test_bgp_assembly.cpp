#include <doctest.h>

#include <functional>
#include <set>

#include "lift/bgp_assembly.hpp"
#include "lift/pipeline.hpp"
#include "lift/text.hpp"
#include "testsupport.hpp"

using namespace lift;
using namespace lift::testing;

namespace {

std::vector<std::string> pattern_strings(const DeducedBgp& d) {
    std::vector<std::string> out;
    for (const TriplePattern& p : d.bgp.patterns) out.push_back(pattern_to_string(p));
    return out;
}

DtpGraph fixture_graph(double gap = 8) {
    const ParsedLog parsed = parse_log_file(fixture_path("fig2b.log"));
    return nested_loop_detection(ctp_extraction(parsed.log, gap), gap);
}

}  // namespace

TEST_CASE("components of the fixture graph become the two original queries") {
    const std::vector<DeducedBgp> bgps = extract_bgps(fixture_graph());
    REQUIRE(bgps.size() == 2);

    CHECK(pattern_strings(bgps[0]) == std::vector<std::string>{"?s_1 p2 toto", "?s_1 p1 ?o_1"});
    CHECK(bgps[0].support == std::vector<int>{1, 3});
    CHECK(bgps[0].window_start == 1);
    CHECK(bgps[0].window_end == 5);
    REQUIRE(bgps[0].bgp.joins.size() == 1);
    CHECK(bgps[0].bgp.joins[0] == JoinEdge{0, PatternPos::Subject, 1, PatternPos::Subject});

    CHECK(pattern_strings(bgps[1]) ==
          std::vector<std::string>{"?s_2 p3 titi", "?s_2 p1 ?o_2", "?s_2 p4 tata"});
    CHECK(bgps[1].support == std::vector<int>{2, 4, 5});
    CHECK(bgps[1].bgp.joins.size() == 2);

    CHECK(patterns_equal_up_to_renaming(bgps[0].bgp,
                                        parse_query_file(fixture_path("fig2_q3.rq"))));
    CHECK(patterns_equal_up_to_renaming(bgps[1].bgp,
                                        parse_query_file(fixture_path("fig2_q4.rq"))));
}

TEST_CASE("a reserved variable with several input values stays a variable") {
    std::istringstream in(
        "ip 1 c1 p1 ?o mu ?o a\n"
        "ip 2 c2 p1 ?o mu ?o b\n");
    const double gap = kUnboundedGap;
    const DtpGraph graph = nested_loop_detection(ctp_extraction(parse_log(in).log, gap), gap);
    const std::vector<DeducedBgp> bgps = extract_bgps(graph);
    REQUIRE(bgps.size() == 1);
    CHECK(pattern_strings(bgps[0]) == std::vector<std::string>{"?s_1 p1 ?o_1"});
}

TEST_CASE("a reserved variable with exactly one unjoined input value is restituted") {
    std::istringstream in("ip 1 c1 p1 ?o mu ?o a\n");
    const DtpGraph graph =
        nested_loop_detection(ctp_extraction(parse_log(in).log, kUnboundedGap), kUnboundedGap);
    const std::vector<DeducedBgp> bgps = extract_bgps(graph);
    REQUIRE(bgps.size() == 1);
    CHECK(pattern_strings(bgps[0]) == std::vector<std::string>{"c1 p1 ?o_1"});
}

TEST_CASE("an isolated fully bound request survives as a one-pattern BGP") {
    std::istringstream in("ip 1 c3 p4 tata\n");
    const DtpGraph graph =
        nested_loop_detection(ctp_extraction(parse_log(in).log, kUnboundedGap), kUnboundedGap);
    const std::vector<DeducedBgp> bgps = extract_bgps(graph);
    REQUIRE(bgps.size() == 1);
    CHECK(pattern_strings(bgps[0]) == std::vector<std::string>{"c3 p4 tata"});
}

TEST_CASE("a joined slot is never restituted even with a single value") {
    std::istringstream in(
        "ip 1 ?s p2 toto mu ?s c1\n"
        "ip 2 c1 p1 ?o mu ?o a\n");
    const DtpGraph graph =
        nested_loop_detection(ctp_extraction(parse_log(in).log, kUnboundedGap), kUnboundedGap);
    const std::vector<DeducedBgp> bgps = extract_bgps(graph);
    REQUIRE(bgps.size() == 1);
    CHECK(pattern_strings(bgps[0]) == std::vector<std::string>{"?s_1 p2 toto", "?s_1 p1 ?o_1"});
}

TEST_CASE("the probe scenario yields a correct BGP plus a pure self-join artifact") {
    const Store store = Store::load_file(fixture_path("q7.store"));
    const Bgp q7 = parse_query_file(fixture_path("q7.rq"));
    ClientConfig cfg;
    cfg.probe_first = true;
    cfg.page_size = 2;
    const TpfLog log = execute_query(store, q7, cfg).log;
    const DtpGraph graph =
        nested_loop_detection(ctp_extraction(log, kUnboundedGap), kUnboundedGap);
    const std::vector<DeducedBgp> bgps = extract_bgps(graph);

    REQUIRE(bgps.size() == 2);
    CHECK(patterns_equal_up_to_renaming(bgps[0].bgp, q7));
    CHECK(pattern_strings(bgps[1]) ==
          std::vector<std::string>{"?s_2 dbpo:author ?o_2", "?s_2 dbpo:author ?o_3"});

    SUBCASE("the filter removes the artifact and keeps the real BGP") {
        const std::vector<DeducedBgp> filtered = filter_self_joins(bgps);
        REQUIRE(filtered.size() == 1);
        CHECK(patterns_equal_up_to_renaming(filtered[0].bgp, q7));
    }
}

TEST_CASE("filter keeps BGPs without self-joins and join-less singletons") {
    const std::vector<DeducedBgp> bgps = extract_bgps(fixture_graph());
    CHECK(filter_self_joins(bgps).size() == bgps.size());

    // a pure self-join BGP next to an isolated single-pattern BGP
    std::istringstream in(
        "ip 1 ?s p5 ?o mu ?s c1 c2 ?o a b\n"
        "ip 2 c1 p5 ?o mu ?o a\n"
        "ip 3 c2 p5 ?o mu ?o b\n"
        "ip 4 ?s p6 tutu mu ?s z1\n");
    const DtpGraph graph =
        nested_loop_detection(ctp_extraction(parse_log(in).log, kUnboundedGap), kUnboundedGap);
    const std::vector<DeducedBgp> bgps2 = extract_bgps(graph);
    REQUIRE(bgps2.size() == 2);
    REQUIRE(bgps2[0].bgp.patterns.size() == 2);  // the self-join pair
    const std::vector<DeducedBgp> filtered = filter_self_joins(bgps2);
    REQUIRE(filtered.size() == 1);
    CHECK(pattern_strings(filtered[0]) == std::vector<std::string>{"?s_2 p6 tutu"});
}

TEST_CASE("mixed BGPs drop self-join edges and re-split") {
    // two shape-identical p5 patterns joined to each other and a p6 anchor
    DeducedBgp mixed;
    mixed.bgp.patterns = {parse_pattern_string("?s_1 p6 k"), parse_pattern_string("?s_1 p5 ?o_1"),
                          parse_pattern_string("?s_1 p5 ?o_2")};
    mixed.bgp.joins = {{0, PatternPos::Subject, 1, PatternPos::Subject},
                       {1, PatternPos::Subject, 2, PatternPos::Subject}};
    mixed.support = {1, 2, 3};
    const std::vector<DeducedBgp> filtered = filter_self_joins({mixed});
    REQUIRE(filtered.size() == 2);
    CHECK(pattern_strings(filtered[0]) ==
          std::vector<std::string>{"?s_1 p6 k", "?s_1 p5 ?o_1"});
    CHECK(filtered[0].support == std::vector<int>{1, 2});
    CHECK(pattern_strings(filtered[1]) == std::vector<std::string>{"?s_1 p5 ?o_2"});

    SUBCASE("idempotent") {
        const std::vector<DeducedBgp> again = filter_self_joins(filtered);
        REQUIRE(again.size() == filtered.size());
        for (std::size_t i = 0; i < again.size(); ++i)
            CHECK(again[i].bgp == filtered[i].bgp);
    }
}

TEST_CASE("filter is idempotent on random pipelines") {
    Rng rng(881);
    for (int round = 0; round < 200; ++round) {
        const TpfLog log = rand_log(rng, rand_int(rng, 0, 30));
        const double gap = rand_int(rng, 0, 10);
        const std::vector<DeducedBgp> bgps =
            extract_bgps(nested_loop_detection(ctp_extraction(log, gap), gap));
        const std::vector<DeducedBgp> once = filter_self_joins(bgps);
        const std::vector<DeducedBgp> twice = filter_self_joins(once);
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i].bgp == twice[i].bgp);
    }
}

TEST_CASE("one deduced BGP per connected component") {
    Rng rng(882);
    for (int round = 0; round < 200; ++round) {
        const TpfLog log = rand_log(rng, rand_int(rng, 0, 35));
        const double gap = rand_int(rng, 0, 10);
        const DtpGraph graph = nested_loop_detection(ctp_extraction(log, gap), gap);
        const std::vector<DeducedBgp> bgps = extract_bgps(graph);

        // independent component count over the undirected edge set
        std::map<int, int> parent;
        for (const Dtp& d : graph.nodes) parent[d.id] = d.id;
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const DtpEdge& e : graph.edges) parent[find(e.parent)] = find(e.child);
        std::set<int> roots;
        for (const Dtp& d : graph.nodes) roots.insert(find(d.id));
        CHECK(bgps.size() == roots.size());

        // within a BGP, two positions share a variable iff their slots were
        // linked; across BGPs support sets partition the nodes
        std::size_t covered = 0;
        for (const DeducedBgp& d : bgps) covered += d.support.size();
        CHECK(covered == graph.nodes.size());
    }
}

TEST_CASE("join statistics count edges by position pair") {
    const std::vector<DeducedBgp> bgps = extract_bgps(fixture_graph());
    const BgpStats stats = bgp_stats(bgps);
    CHECK(stats.bgp_count == 2);
    CHECK(stats.pattern_count == 5);
    CHECK(stats.join_count == 3);
    CHECK(stats.subject_subject == 3);
    CHECK(stats.subject_object == 0);
    CHECK(stats.object_object == 0);
    CHECK(stats.size_histogram.at(2) == 1);
    CHECK(stats.size_histogram.at(3) == 1);

    CHECK(bgp_stats({}).bgp_count == 0);
    CHECK(bgp_stats({}).join_count == 0);

    DeducedBgp so;
    so.bgp.patterns = {parse_pattern_string("?a p1 ?b"), parse_pattern_string("?b p2 ?c")};
    so.bgp.joins = {{0, PatternPos::Object, 1, PatternPos::Subject}};
    const BgpStats stats2 = bgp_stats({so});
    CHECK(stats2.subject_object == 1);
    CHECK(stats2.subject_subject == 0);
}
