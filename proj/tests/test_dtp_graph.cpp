#include <doctest.h>

#include <map>
#include <set>

#include "lift/dtp_graph.hpp"
#include "lift/text.hpp"
#include "testsupport.hpp"

using namespace lift;
using namespace lift::testing;

namespace {

std::vector<Ctp> fixture_ctps(double gap = 8) {
    return ctp_extraction(parse_log_file(fixture_path("fig2b.log")).log, gap);
}

ValueSet values_of(const MappingSet& mu, const std::string& var) {
    const ValueSet* v = mu.find(var);
    REQUIRE(v != nullptr);
    return *v;
}

ValueSet set_of(const std::vector<std::string>& terms) {
    ValueSet out;
    for (const std::string& t : terms) out.insert(parse_term(t));
    return out;
}

}  // namespace

TEST_CASE("detection on the fixture CTP list reproduces the published DTP graph") {
    const DtpGraph graph = nested_loop_detection(fixture_ctps(), 8);

    REQUIRE(graph.nodes.size() == 5);
    CHECK(graph.nodes[0].ts_min == 1);
    CHECK(graph.nodes[0].ts_max == 1);
    CHECK(graph.nodes[1].ts_min == 2);
    CHECK(graph.nodes[1].ts_max == 2);

    const Dtp& three = graph.nodes[2];
    CHECK(three.id == 3);
    CHECK(three.origin_ctp_id == 3);
    CHECK(three.ts_min == 3);
    CHECK(three.ts_max == 5);
    CHECK(values_of(three.outputs, "o") == set_of({"a", "b"}));
    CHECK(values_of(three.inputs, kReservedSubjectVar) == set_of({"c1", "c2"}));

    const Dtp& four = graph.nodes[3];
    CHECK(four.id == 4);
    CHECK(four.origin_ctp_id == 3);
    CHECK(four.ts_min == 6);
    CHECK(four.ts_max == 8);
    CHECK(values_of(four.outputs, "o") == set_of({"c", "d"}));
    CHECK(values_of(four.inputs, kReservedSubjectVar) == set_of({"c3", "c4"}));

    const Dtp& five = graph.nodes[4];
    CHECK(five.id == 5);
    CHECK(five.origin_ctp_id == 4);
    CHECK(five.ts_min == 4);
    CHECK(five.ts_max == 7);

    REQUIRE(graph.edges.size() == 3);
    CHECK(graph.edges[0] == DtpEdge{1, 3, "s", kReservedSubjectVar});
    CHECK(graph.edges[1] == DtpEdge{2, 4, "s", kReservedSubjectVar});
    CHECK(graph.edges[2] == DtpEdge{2, 5, "s", kReservedSubjectVar});

    CHECK(graph.splits == std::vector<std::pair<int, int>>{{3, 3}, {3, 4}});
}

TEST_CASE("a lone ctp without inputs becomes an isolated node") {
    std::istringstream in("ip 1 ?s p1 ?o mu ?s a ?o b\n");
    const DtpGraph graph = nested_loop_detection(ctp_extraction(parse_log(in).log, 8), 8);
    CHECK(graph.nodes.size() == 1);
    CHECK(graph.edges.empty());
    CHECK(graph.splits.empty());
}

TEST_CASE("exact inclusion links two ctps without splitting") {
    std::istringstream in(
        "ip 1 ?s p2 toto mu ?s c1 c2\n"
        "ip 2 c1 p1 ?o mu ?o a\n"
        "ip 3 c2 p1 ?o mu ?o b\n");
    const DtpGraph graph = nested_loop_detection(ctp_extraction(parse_log(in).log, 8), 8);
    REQUIRE(graph.nodes.size() == 2);
    REQUIRE(graph.edges.size() == 1);
    CHECK(graph.edges[0] == DtpEdge{1, 2, "s", kReservedSubjectVar});
    CHECK(graph.splits.empty());
}

TEST_CASE("split partitions provenance by the injected value") {
    std::vector<Ctp> ctps = fixture_ctps();
    Ctp& target = ctps[2];  // the aggregated shared inner loop
    const Ctp& source = ctps[0];

    const Dtp product = split(target, kReservedSubjectVar, source, "s");
    CHECK(product.ts_min == 3);
    CHECK(product.ts_max == 5);
    CHECK(values_of(product.outputs, "o") == set_of({"a", "b"}));
    CHECK(values_of(product.inputs, kReservedSubjectVar) == set_of({"c1", "c2"}));
    CHECK(product.provenance.size() == 2);

    CHECK(target.ts_min == 6);
    CHECK(target.ts_max == 8);
    CHECK(values_of(target.outputs, "o") == set_of({"c", "d"}));
    CHECK(values_of(target.inputs, kReservedSubjectVar) == set_of({"c3", "c4"}));
    CHECK(target.provenance.size() == 2);
}

TEST_CASE("split rejects full inclusion and empty intersections") {
    std::vector<Ctp> ctps = fixture_ctps();
    CHECK_THROWS_AS(split(ctps[3], kReservedSubjectVar, ctps[1], "s"), std::logic_error);
    CHECK_THROWS_AS(split(ctps[2], kReservedSubjectVar, ctps[2], "o"), std::logic_error);
}

TEST_CASE("split keeps all but one entry when the intersection covers the rest") {
    std::istringstream in(
        "ip 1 ?s p2 toto mu ?s c1 c2 c3\n"
        "ip 2 c1 p1 ?o mu ?o a\n"
        "ip 3 c2 p1 ?o mu ?o b\n"
        "ip 4 c3 p1 ?o mu ?o c\n"
        "ip 5 c9 p1 ?o mu ?o z\n");
    std::vector<Ctp> ctps = ctp_extraction(parse_log(in).log, kUnboundedGap);
    REQUIRE(ctps.size() == 2);
    const Dtp product = split(ctps[1], kReservedSubjectVar, ctps[0], "s");
    CHECK(product.provenance.size() == 3);
    CHECK(ctps[1].provenance.size() == 1);
    CHECK(values_of(ctps[1].inputs, kReservedSubjectVar) == set_of({"c9"}));
}

TEST_CASE("random splits recompose to the original ctp") {
    Rng rng(771);
    for (int round = 0; round < 200; ++round) {
        // one ctp of 20 entries, a source whose outputs cover a strict
        // nonempty subset of the injected values
        TpfLog log;
        std::set<int> in_product;
        const std::size_t subset_size = static_cast<std::size_t>(rand_int(rng, 1, 9));
        while (in_product.size() < subset_size) in_product.insert(rand_int(rng, 1, 10));
        LogEntry source_entry;
        source_entry.ip = "ip";
        source_entry.ts = 0;
        source_entry.tp = parse_pattern_string("?s p9 ?o");
        for (int v : in_product) source_entry.outputs.add("s", Term::iri("c" + std::to_string(v)));
        source_entry.outputs.add("o", Term::iri("noise"));
        log.entries.push_back(source_entry);
        for (int i = 0; i < 20; ++i) {
            LogEntry e;
            e.ip = "ip";
            e.ts = rand_int(rng, 1, 40);
            const int v = i < 10 ? i + 1 : rand_int(rng, 1, 10);
            e.tp = {Term::iri("c" + std::to_string(v)), Term::iri("p1"), Term::variable("o")};
            e.outputs.add("o", rand_constant(rng, 30));
            log.entries.push_back(e);
        }
        std::stable_sort(log.entries.begin(), log.entries.end(),
                         [](const LogEntry& a, const LogEntry& b) { return a.ts < b.ts; });

        std::vector<Ctp> ctps = ctp_extraction(log, kUnboundedGap);
        Ctp* target = nullptr;
        Ctp* source = nullptr;
        for (Ctp& c : ctps) {
            if (c.tmpl.p == Term::iri("p1")) target = &c;
            if (c.tmpl.p == Term::iri("p9")) source = &c;
        }
        REQUIRE(target != nullptr);
        REQUIRE(source != nullptr);
        const Ctp original = *target;

        const Dtp product = split(*target, kReservedSubjectVar, *source, "s");

        // recomposition: provenance, mappings, and the timestamp hull
        std::multiset<std::size_t> indices;
        for (const ConstituentEntry& e : product.provenance) indices.insert(e.log_index);
        for (const ConstituentEntry& e : target->provenance) indices.insert(e.log_index);
        std::multiset<std::size_t> expected;
        for (const ConstituentEntry& e : original.provenance) expected.insert(e.log_index);
        CHECK(indices == expected);

        MappingSet outputs = product.outputs;
        outputs.merge(target->outputs);
        CHECK(outputs == original.outputs);
        MappingSet inputs = product.inputs;
        inputs.merge(target->inputs);
        CHECK(inputs == original.inputs);
        CHECK(std::min(product.ts_min, target->ts_min) == original.ts_min);
        CHECK(std::max(product.ts_max, target->ts_max) == original.ts_max);
    }
}

namespace {

DtpGraph random_graph(Rng& rng) {
    const TpfLog log = rand_log(rng, rand_int(rng, 0, 40));
    const double gap =
        rand_bool(rng, 0.2) ? kUnboundedGap : static_cast<double>(rand_int(rng, 0, 12));
    return nested_loop_detection(ctp_extraction(log, gap), gap);
}

}  // namespace

TEST_CASE("graph invariants hold on random logs") {
    Rng rng(772);
    for (int round = 0; round < 200; ++round) {
        const TpfLog log = rand_log(rng, rand_int(rng, 0, 40));
        const double gap =
            rand_bool(rng, 0.2) ? kUnboundedGap : static_cast<double>(rand_int(rng, 0, 12));
        const std::vector<Ctp> ctps = ctp_extraction(log, gap);
        const DtpGraph graph = nested_loop_detection(ctps, gap);

        // edge inclusion and gap compliance are asserted inside the builder;
        // check conservation per origin ctp here
        std::map<int, std::multiset<std::size_t>> by_origin;
        for (const Dtp& d : graph.nodes)
            for (const ConstituentEntry& e : d.provenance)
                by_origin[d.origin_ctp_id].insert(e.log_index);
        REQUIRE(by_origin.size() == ctps.size());
        for (const Ctp& c : ctps) {
            std::multiset<std::size_t> expected;
            for (const ConstituentEntry& e : c.provenance) expected.insert(e.log_index);
            CHECK(by_origin.at(c.id) == expected);
        }

        for (const DtpEdge& e : graph.edges) CHECK(e.parent < e.child);

        // a split origin contributes exactly its fragments to the relation
        std::set<int> split_origins;
        for (const auto& [origin, dtp_id] : graph.splits) {
            split_origins.insert(origin);
            CHECK(graph.node(dtp_id).origin_ctp_id == origin);
        }
        for (const Dtp& d : graph.nodes)
            if (split_origins.count(d.origin_ctp_id))
                CHECK(std::count(graph.splits.begin(), graph.splits.end(),
                                 std::make_pair(d.origin_ctp_id, d.id)) == 1);
    }
}

TEST_CASE("detection is deterministic") {
    Rng rng(773);
    for (int round = 0; round < 40; ++round) {
        const TpfLog log = rand_log(rng, rand_int(rng, 0, 30));
        const double gap = rand_int(rng, 0, 10);
        const std::vector<Ctp> ctps = ctp_extraction(log, gap);
        const DtpGraph a = nested_loop_detection(ctps, gap);
        const DtpGraph b = nested_loop_detection(ctps, gap);
        REQUIRE(a.nodes.size() == b.nodes.size());
        for (std::size_t i = 0; i < a.nodes.size(); ++i) {
            CHECK(a.nodes[i].id == b.nodes[i].id);
            CHECK(a.nodes[i].tmpl == b.nodes[i].tmpl);
            CHECK(a.nodes[i].ts_min == b.nodes[i].ts_min);
        }
        CHECK(a.edges == b.edges);
        CHECK(a.splits == b.splits);
    }
}
